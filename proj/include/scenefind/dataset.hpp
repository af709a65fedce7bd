#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scenefind {

using VehicleId = std::int32_t;
using FrameIndex = std::int32_t;

// highD drivingDirection: 1 = upper carriageway (travels towards -x), 2 = lower (+x).
enum class DrivingDirection : int { Upper = 1, Lower = 2 };
enum class VehicleClass { Car, Truck };

std::string_view to_string(VehicleClass cls);

struct RecordingMeta {
  int recording_id = 0;
  double frame_rate = 25.0;
  int location_id = 0;
  std::vector<double> upper_lane_markings;
  std::vector<double> lower_lane_markings;
  double duration = 0.0;

  bool operator==(const RecordingMeta&) const = default;
};

struct TrackMeta {
  VehicleId vehicle_id = 0;
  int recording_id = 0;
  FrameIndex initial_frame = 0;
  FrameIndex final_frame = 0;
  double width = 0.0;   // longitudinal extent
  double height = 0.0;  // lateral extent
  DrivingDirection driving_direction = DrivingDirection::Lower;
  VehicleClass vehicle_class = VehicleClass::Car;

  FrameIndex num_frames() const { return final_frame - initial_frame + 1; }
  bool covers(FrameIndex frame) const { return frame >= initial_frame && frame <= final_frame; }

  bool operator==(const TrackMeta&) const = default;
};

/// Surrounding-vehicle slots in highD column order.
enum class Slot : int {
  Preceding = 0,
  Following,
  LeftPreceding,
  LeftAlongside,
  LeftFollowing,
  RightPreceding,
  RightAlongside,
  RightFollowing,
};
inline constexpr std::size_t kSlotCount = 8;
std::string_view to_string(Slot slot);

using Surrounding = std::array<std::optional<VehicleId>, kSlotCount>;

struct VehicleState {
  VehicleId vehicle_id = 0;
  FrameIndex frame = 0;
  double bbox_x = 0.0;
  double bbox_y = 0.0;
  double center_x = 0.0;
  double center_y = 0.0;
  double x_velocity = 0.0;
  double y_velocity = 0.0;
  int lane_id = 0;
  Surrounding surrounding{};

  const std::optional<VehicleId>& neighbor(Slot slot) const {
    return surrounding[static_cast<std::size_t>(slot)];
  }

  bool operator==(const VehicleState&) const = default;
};

/// Immutable, fully indexed recording. Construct through Recording::build, which
/// validates every invariant, or through load_recording / generate_synthetic.
class Recording {
 public:
  /// States may arrive in any order; centers are recomputed from bbox + extent.
  static Recording build(RecordingMeta meta, std::vector<TrackMeta> tracks,
                         std::vector<VehicleState> states);

  const RecordingMeta& meta() const { return meta_; }
  int id() const { return meta_.recording_id; }

  /// Sorted by vehicle id.
  std::span<const TrackMeta> tracks() const { return tracks_; }
  const TrackMeta* find_track(VehicleId id) const;
  const TrackMeta& track(VehicleId id) const;

  /// nullptr when the vehicle does not exist at that frame.
  const VehicleState* find(VehicleId id, FrameIndex frame) const;
  /// Throws Errc::UnknownScene when absent.
  const VehicleState& at(VehicleId id, FrameIndex frame) const;

  std::span<const VehicleState> track_states(VehicleId id) const;
  /// All states, grouped by vehicle (ascending id), frames ascending within a vehicle.
  std::span<const VehicleState> states() const { return states_; }

  /// Vehicles present at `frame`, ascending id. Empty outside the recorded range.
  std::span<const VehicleId> vehicles_at(FrameIndex frame) const;
  FrameIndex first_frame() const { return first_frame_; }
  /// Last frame with any vehicle; first_frame() - 1 for an empty recording.
  FrameIndex last_frame() const;

  bool operator==(const Recording& other) const {
    return meta_ == other.meta_ && tracks_ == other.tracks_ && states_ == other.states_;
  }

 private:
  Recording() = default;

  RecordingMeta meta_;
  std::vector<TrackMeta> tracks_;
  std::vector<VehicleState> states_;
  std::vector<std::size_t> track_offsets_;  // index into states_, parallel to tracks_

  FrameIndex first_frame_ = 0;
  std::vector<std::size_t> frame_offsets_;  // CSR over frames, size = frame span + 1
  std::vector<VehicleId> frame_vehicles_;
};

std::string recording_prefix(int recording_id);

/// Loads `XX_recordingMeta.csv`, `XX_tracksMeta.csv` and `XX_tracks.csv`.
Recording load_recording(const std::filesystem::path& data_dir, int recording_id);

/// Recording ids found in a directory (by `*_recordingMeta.csv`), ascending.
std::vector<int> discover_recordings(const std::filesystem::path& data_dir);

/// Loads every recording in the directory; independent files load concurrently.
std::vector<Recording> load_dataset(const std::filesystem::path& data_dir, unsigned threads = 0);

/// Writes the three highD CSV files for a recording.
void write_recording(const Recording& recording, const std::filesystem::path& data_dir);

/// Lowercase hex SHA-256 over the sorted highD CSV files of a directory (names and bytes).
std::string dataset_digest(const std::filesystem::path& data_dir);

}  // namespace scenefind
