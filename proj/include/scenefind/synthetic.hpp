#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "scenefind/dataset.hpp"

namespace scenefind {

struct LaneChangeScript {
  double start_time = 1.0;  // s after the vehicle's first frame
  double duration = 4.0;    // s
  int direction = +1;       // +1 towards the median (left), -1 away from it (right)
};

/// A vehicle with fully prescribed motion: constant speed, fixed lateral offset,
/// and an optional single lane change.
struct ScriptedVehicle {
  DrivingDirection direction = DrivingDirection::Lower;
  int lane_from_right = 0;         // 0 = rightmost lane of the carriageway
  FrameIndex start_frame = 1;
  double start_position = 0.0;     // raw center x at start_frame
  double speed = 30.0;             // m/s along the travel direction
  double lateral_offset = 0.0;     // m from lane center, positive leftward
  double length = 4.5;
  double height = 1.9;
  VehicleClass vehicle_class = VehicleClass::Car;
  std::optional<LaneChangeScript> lane_change;
};

struct SynthConfig {
  int recording_id = 1;
  int location_id = 1;
  int lanes_per_carriageway = 2;
  int vehicles = 50;  // random vehicles, in addition to `scripted`
  double duration = 60.0;
  double frame_rate = 25.0;
  double min_speed = 22.0;
  double max_speed = 38.0;
  double lane_change_probability = 0.1;
  double lane_width = 4.0;
  double road_length = 420.0;
  double truck_fraction = 0.15;
  /// Scripted vehicles get ids 1..scripted.size() in order; random vehicles follow.
  std::vector<ScriptedVehicle> scripted;
};

/// Throws Errc::InvalidConfig.
void validate_config(const SynthConfig& config);

/// Deterministic for a given (config, seed). Surrounding ids follow the
/// nearest-in-lane rules of `compute_surrounding`.
Recording generate_synthetic(const SynthConfig& config, std::uint64_t seed);

/// Lane markings produced for a configuration (upper, lower).
std::pair<std::vector<double>, std::vector<double>> synthetic_lane_markings(const SynthConfig& config);

/// Raw center y of a lane, counted from the right edge of the carriageway.
double lane_center_y(const RecordingMeta& meta, DrivingDirection direction, int lane_from_right);

/// Ego-relative neighbourhood used by the generator. `present` are the states of all
/// vehicles at one frame (with centers and lane ids set); `tracks` supplies lengths
/// and directions. Adjacent-lane vehicles overlapping the ego longitudinally are
/// "alongside"; otherwise the nearest one ahead/behind fills the slot.
Surrounding compute_surrounding(const RecordingMeta& meta, const VehicleState& ego,
                                const TrackMeta& ego_track,
                                std::span<const VehicleState* const> present,
                                std::span<const TrackMeta* const> present_tracks);

}  // namespace scenefind
