#pragma once

#include <array>
#include <compare>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "scenefind/dataset.hpp"

namespace scenefind {

inline constexpr double kDefaultLambda = 10.0;
/// Eight surrounding slots plus the optional ego point.
inline constexpr std::size_t kMaxContextPoints = kSlotCount + 1;

/// Identifies one traffic scene: an ego vehicle at one frame of one recording.
struct SceneKey {
  int recording_id = 0;
  VehicleId ego_id = 0;
  FrameIndex frame = 0;

  auto operator<=>(const SceneKey&) const = default;
};

enum class RelativeLane { Left, Center, Right, Merging };
std::string_view to_string(RelativeLane lane);
RelativeLane parse_relative_lane(std::string_view text);

/// A context point in the canonical ego frame: x forward along the ego's travel
/// direction, y towards the ego's left. Lateral components are stored both raw and
/// multiplied by the set's lambda; only the scaled form enters distances.
struct ContextPoint {
  double x = 0.0;
  double y_scaled = 0.0;
  double vx = 0.0;
  double vy_scaled = 0.0;
  double y = 0.0;
  double vy = 0.0;
  VehicleId source_vehicle_id = 0;
  std::optional<Slot> slot;  // empty for the ego point

  bool operator==(const ContextPoint&) const = default;
};

using Point4 = std::array<double, 4>;

inline Point4 scaled(const ContextPoint& p) { return {p.x, p.y_scaled, p.vx, p.vy_scaled}; }

struct ContextSet {
  SceneKey key;
  double lambda = kDefaultLambda;
  std::vector<ContextPoint> points;
  RelativeLane relative_lane = RelativeLane::Right;

  /// Same scene re-expressed with another lambda (recomputed from raw lateral values).
  ContextSet with_lambda(double new_lambda) const;
  std::vector<Point4> scaled_points() const;

  bool operator==(const ContextSet&) const = default;
};

/// Per-location relative-lane overrides, keyed by (location_id, lane_id).
/// Text format: one `location_id lane_id Left|Center|Right|Merging` per line;
/// `#` starts a comment.
class LaneOverrides {
 public:
  LaneOverrides() = default;
  static LaneOverrides parse(std::istream& in);
  static LaneOverrides load(const std::filesystem::path& path);

  void set(int location_id, int lane_id, RelativeLane lane) { table_[{location_id, lane_id}] = lane; }
  std::optional<RelativeLane> lookup(int location_id, int lane_id) const;
  std::size_t size() const { return table_.size(); }

 private:
  std::map<std::pair<int, int>, RelativeLane> table_;
};

struct LaneGeometry {
  DrivingDirection carriageway = DrivingDirection::Lower;
  int index_from_right = 0;  // 0 = rightmost lane
  int lane_count = 0;        // through lanes in this carriageway
  double lower_marking = 0.0;
  double upper_marking = 0.0;

  double width() const { return upper_marking - lower_marking; }
  double center() const { return 0.5 * (lower_marking + upper_marking); }
};

/// Resolves a highD lane id against the recording's lane markings.
/// Throws Errc::UnclassifiableLane when the id lies outside both carriageways.
LaneGeometry lane_geometry(const RecordingMeta& meta, int lane_id);

/// Lane id of the raw lateral coordinate, or nullopt if it lies outside every lane.
std::optional<int> lane_id_at(const RecordingMeta& meta, DrivingDirection direction, double center_y);

RelativeLane classify_lane(const RecordingMeta& meta, DrivingDirection direction, int lane_id,
                           const LaneOverrides& overrides = {});

RelativeLane relative_lane(const Recording& recording, VehicleId vehicle_id, FrameIndex frame,
                           const LaneOverrides& overrides = {});

/// Canonical-frame signs for a carriageway: forward = sign * raw x, left = -sign * raw y.
inline double travel_sign(DrivingDirection d) { return d == DrivingDirection::Lower ? 1.0 : -1.0; }

/// Allocation-free extraction used by the search scan. Writes up to
/// kMaxContextPoints scaled points in slot order (ego last) and returns the count.
std::size_t extract_scaled_points(const Recording& recording, const VehicleState& ego,
                                  const TrackMeta& ego_track, double lambda, bool include_ego,
                                  std::span<Point4, kMaxContextPoints> out);

/// Throws Errc::UnknownScene, Errc::EmptyContext, Errc::InvalidArgument (lambda <= 0).
ContextSet extract_context_set(const Recording& recording, const SceneKey& key,
                               double lambda = kDefaultLambda, bool include_ego = false,
                               const LaneOverrides& overrides = {});

}  // namespace scenefind
