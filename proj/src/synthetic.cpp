#include "scenefind/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <tuple>

#include "csv.hpp"
#include "scenefind/context.hpp"
#include "scenefind/error.hpp"

namespace scenefind {

namespace {

constexpr double kFirstMarking = 8.5;
constexpr double kMedianWidth = 4.5;

double r2(double v) { return csv::round_to(v, 0.01); }

[[noreturn]] void invalid(const std::string& what) { throw Error(Errc::InvalidConfig, what); }

struct Motion {
  DrivingDirection direction = DrivingDirection::Lower;
  FrameIndex start_frame = 1;
  double x0 = 0.0;
  double y0 = 0.0;
  double speed = 0.0;
  double speed_amplitude = 0.0;
  double omega = 1.0;
  double phase = 0.0;
  double length = 4.5;
  double height = 1.9;
  VehicleClass vehicle_class = VehicleClass::Car;
  std::optional<LaneChangeScript> lane_change;
  double lane_change_shift = 0.0;  // m, positive leftward
  double entry_time = 0.0;         // ordering key for id assignment
};

struct Kinematics {
  double x, y, vx, vy;
};

Kinematics evaluate(const Motion& m, double t) {
  const double sign = travel_sign(m.direction);
  const double left = -sign;  // raw y per metre leftward
  double dist = m.speed * t;
  double v = m.speed;
  if (m.speed_amplitude > 0.0) {
    dist += m.speed_amplitude / m.omega * (std::cos(m.phase) - std::cos(m.omega * t + m.phase));
    v += m.speed_amplitude * std::sin(m.omega * t + m.phase);
  }
  double lat = 0.0, vlat = 0.0;
  if (m.lane_change && t > m.lane_change->start_time) {
    const double dur = m.lane_change->duration;
    const double tau = std::min((t - m.lane_change->start_time) / dur, 1.0);
    lat = m.lane_change_shift * 0.5 * (1.0 - std::cos(std::numbers::pi * tau));
    if (tau < 1.0) vlat = m.lane_change_shift * std::numbers::pi / (2.0 * dur) * std::sin(std::numbers::pi * tau);
  }
  return {m.x0 + sign * dist, m.y0 + left * lat, sign * v, left * vlat};
}

int lanes_in(const RecordingMeta& meta, DrivingDirection d) {
  const auto& m = d == DrivingDirection::Upper ? meta.upper_lane_markings : meta.lower_lane_markings;
  return static_cast<int>(m.size()) - 1;
}

double lane_width_at(const RecordingMeta& meta, DrivingDirection d, int lane_from_right) {
  const auto& m = d == DrivingDirection::Upper ? meta.upper_lane_markings : meta.lower_lane_markings;
  const int count = static_cast<int>(m.size()) - 1;
  const int k = d == DrivingDirection::Upper ? lane_from_right : count - 1 - lane_from_right;
  return m[static_cast<std::size_t>(k) + 1] - m[static_cast<std::size_t>(k)];
}

int nearest_lane_id(const RecordingMeta& meta, DrivingDirection d, double y) {
  if (auto id = lane_id_at(meta, d, y)) return *id;
  const int count = lanes_in(meta, d);
  int best_id = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < count; ++r) {
    const double dist = std::abs(lane_center_y(meta, d, r) - y);
    if (dist < best) {
      best = dist;
      best_id = *lane_id_at(meta, d, lane_center_y(meta, d, r));
    }
  }
  return best_id;
}

}  // namespace

void validate_config(const SynthConfig& c) {
  if (c.lanes_per_carriageway < 2 || c.lanes_per_carriageway > 4) invalid("lanes per carriageway must be 2-4");
  if (c.vehicles < 0) invalid("vehicle count must be non-negative");
  if (c.vehicles == 0 && c.scripted.empty()) invalid("at least one vehicle is required");
  if (!(c.duration > 0.0)) invalid("duration must be positive");
  if (!(c.frame_rate > 0.0)) invalid("frame rate must be positive");
  if (!(c.min_speed > 0.0)) invalid("minimum speed must be positive");
  if (c.max_speed < c.min_speed) invalid("speed range is inverted");
  if (!(c.lane_change_probability >= 0.0 && c.lane_change_probability <= 1.0)) {
    invalid("lane-change probability must lie in [0, 1]");
  }
  if (!(c.lane_width > 0.0)) invalid("lane width must be positive");
  if (!(c.road_length > 0.0)) invalid("road length must be positive");
  if (!(c.truck_fraction >= 0.0 && c.truck_fraction <= 1.0)) invalid("truck fraction must lie in [0, 1]");
  for (std::size_t i = 0; i < c.scripted.size(); ++i) {
    const ScriptedVehicle& s = c.scripted[i];
    const std::string who = "scripted vehicle " + std::to_string(i + 1);
    if (s.lane_from_right < 0 || s.lane_from_right >= c.lanes_per_carriageway) invalid(who + ": lane out of range");
    if (s.start_frame < 1) invalid(who + ": start frame must be >= 1");
    if (!(s.speed >= 0.0)) invalid(who + ": negative speed");
    if (!(s.length > 0.0) || !(s.height > 0.0)) invalid(who + ": non-positive extent");
    if (s.start_position < 0.0 || s.start_position > c.road_length) invalid(who + ": starts off the road");
    if (s.lane_change) {
      const int target = s.lane_from_right + s.lane_change->direction;
      if (std::abs(s.lane_change->direction) != 1 || target < 0 || target >= c.lanes_per_carriageway) {
        invalid(who + ": lane change leaves the carriageway");
      }
      if (!(s.lane_change->duration > 0.0)) invalid(who + ": lane change duration must be positive");
    }
  }
}

std::pair<std::vector<double>, std::vector<double>> synthetic_lane_markings(const SynthConfig& c) {
  std::vector<double> upper, lower;
  for (int i = 0; i <= c.lanes_per_carriageway; ++i) upper.push_back(r2(kFirstMarking + i * c.lane_width));
  const double lower_start = upper.back() + kMedianWidth;
  for (int i = 0; i <= c.lanes_per_carriageway; ++i) lower.push_back(r2(lower_start + i * c.lane_width));
  return {upper, lower};
}

double lane_center_y(const RecordingMeta& meta, DrivingDirection d, int lane_from_right) {
  const auto& m = d == DrivingDirection::Upper ? meta.upper_lane_markings : meta.lower_lane_markings;
  const int count = static_cast<int>(m.size()) - 1;
  if (lane_from_right < 0 || lane_from_right >= count) {
    throw Error(Errc::InvalidArgument, "lane " + std::to_string(lane_from_right) + " outside carriageway");
  }
  const int k = d == DrivingDirection::Upper ? lane_from_right : count - 1 - lane_from_right;
  return 0.5 * (m[static_cast<std::size_t>(k)] + m[static_cast<std::size_t>(k) + 1]);
}

Surrounding compute_surrounding(const RecordingMeta& meta, const VehicleState& ego, const TrackMeta& ego_track,
                                std::span<const VehicleState* const> present,
                                std::span<const TrackMeta* const> present_tracks) {
  const double sign = travel_sign(ego_track.driving_direction);
  const int step_left = ego_track.driving_direction == DrivingDirection::Upper ? +1 : -1;

  auto same_carriageway_lane = [&](int lane_id) -> bool {
    try {
      return lane_geometry(meta, lane_id).carriageway == ego_track.driving_direction;
    } catch (const Error&) {
      return false;
    }
  };
  const int left_lane = ego.lane_id + step_left;
  const int right_lane = ego.lane_id - step_left;
  const bool has_left = same_carriageway_lane(left_lane);
  const bool has_right = same_carriageway_lane(right_lane);

  using Key = std::pair<double, VehicleId>;
  std::array<std::optional<Key>, kSlotCount> best{};
  auto offer = [&](Slot slot, double key, VehicleId id) {
    auto& b = best[static_cast<std::size_t>(slot)];
    const Key k{key, id};
    if (!b || k < *b) b = k;
  };

  for (std::size_t i = 0; i < present.size(); ++i) {
    const VehicleState& o = *present[i];
    const TrackMeta& ot = *present_tracks[i];
    if (o.vehicle_id == ego.vehicle_id || ot.driving_direction != ego_track.driving_direction) continue;
    const double dx = sign * (o.center_x - ego.center_x);
    if (o.lane_id == ego.lane_id) {
      const bool ahead = dx > 0.0 || (dx == 0.0 && o.vehicle_id > ego.vehicle_id);
      offer(ahead ? Slot::Preceding : Slot::Following, std::abs(dx), o.vehicle_id);
      continue;
    }
    const bool left = has_left && o.lane_id == left_lane;
    const bool right = has_right && o.lane_id == right_lane;
    if (!left && !right) continue;
    const double half = 0.5 * (ego_track.width + ot.width);
    Slot slot;
    if (std::abs(dx) < half) {
      slot = left ? Slot::LeftAlongside : Slot::RightAlongside;
    } else if (dx > 0.0) {
      slot = left ? Slot::LeftPreceding : Slot::RightPreceding;
    } else {
      slot = left ? Slot::LeftFollowing : Slot::RightFollowing;
    }
    offer(slot, std::abs(dx), o.vehicle_id);
  }

  Surrounding out{};
  for (std::size_t k = 0; k < kSlotCount; ++k) {
    if (best[k]) out[k] = best[k]->second;
  }
  return out;
}

Recording generate_synthetic(const SynthConfig& c, std::uint64_t seed) {
  validate_config(c);

  RecordingMeta meta;
  meta.recording_id = c.recording_id;
  meta.frame_rate = c.frame_rate;
  meta.location_id = c.location_id;
  std::tie(meta.upper_lane_markings, meta.lower_lane_markings) = synthetic_lane_markings(c);
  meta.duration = c.duration;
  const auto total_frames = static_cast<FrameIndex>(std::llround(c.duration * c.frame_rate));

  std::vector<Motion> motions;
  for (const ScriptedVehicle& s : c.scripted) {
    Motion m;
    m.direction = s.direction;
    m.start_frame = s.start_frame;
    m.x0 = s.start_position;
    m.y0 = lane_center_y(meta, s.direction, s.lane_from_right) - travel_sign(s.direction) * s.lateral_offset;
    m.speed = s.speed;
    m.length = s.length;
    m.height = s.height;
    m.vehicle_class = s.vehicle_class;
    m.lane_change = s.lane_change;
    if (s.lane_change) {
      const int target = s.lane_from_right + s.lane_change->direction;
      m.lane_change_shift = lane_center_y(meta, s.direction, target) - lane_center_y(meta, s.direction, s.lane_from_right);
      m.lane_change_shift *= -travel_sign(s.direction);  // raw y shift -> leftward metres
    }
    motions.push_back(m);
  }

  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto chance = [&rng](double p) { return std::bernoulli_distribution(p)(rng); };
  const int lanes = c.lanes_per_carriageway;

  std::vector<Motion> random;
  for (int i = 0; i < c.vehicles; ++i) {
    Motion m;
    m.direction = chance(0.5) ? DrivingDirection::Upper : DrivingDirection::Lower;
    const bool truck = chance(c.truck_fraction);
    m.vehicle_class = truck ? VehicleClass::Truck : VehicleClass::Car;
    const int lane = truck ? 0 : std::uniform_int_distribution<int>(0, lanes - 1)(rng);
    m.length = truck ? uniform(12.0, 18.0) : uniform(4.0, 5.2);
    m.height = truck ? uniform(2.4, 2.6) : uniform(1.7, 2.0);
    m.speed = truck ? uniform(c.min_speed, c.min_speed + 0.4 * (c.max_speed - c.min_speed))
                    : uniform(c.min_speed, c.max_speed);
    m.speed_amplitude = uniform(0.0, 0.8);
    m.omega = 2.0 * std::numbers::pi / uniform(8.0, 30.0);
    m.phase = uniform(0.0, 2.0 * std::numbers::pi);
    const double offset = uniform(-0.3, 0.3);
    m.y0 = lane_center_y(meta, m.direction, lane) - travel_sign(m.direction) * offset;
    m.entry_time = uniform(-c.road_length / std::max(m.speed, 1e-9), c.duration);
    if (chance(c.lane_change_probability)) {
      int dir = lane == 0 ? +1 : (lane == lanes - 1 ? -1 : (chance(0.5) ? +1 : -1));
      LaneChangeScript lc;
      lc.direction = dir;
      lc.start_time = uniform(1.0, 6.0);
      lc.duration = uniform(4.0, 6.0);
      m.lane_change = lc;
      m.lane_change_shift = dir * 0.5 * (lane_width_at(meta, m.direction, lane) +
                                         lane_width_at(meta, m.direction, lane + dir));
    }
    const double entry_x = m.direction == DrivingDirection::Lower ? 0.0 : c.road_length;
    if (m.entry_time >= 0.0) {
      m.start_frame = static_cast<FrameIndex>(std::floor(m.entry_time * c.frame_rate)) + 1;
      m.x0 = entry_x;
    } else {
      m.start_frame = 1;
      m.x0 = entry_x - travel_sign(m.direction) * m.speed * m.entry_time;
      if (m.lane_change) m.lane_change->start_time = std::max(0.0, m.lane_change->start_time + m.entry_time);
    }
    random.push_back(m);
  }
  std::stable_sort(random.begin(), random.end(),
                   [](const Motion& a, const Motion& b) { return a.entry_time < b.entry_time; });
  motions.insert(motions.end(), random.begin(), random.end());

  // Sample trajectories.
  std::vector<TrackMeta> tracks;
  std::vector<std::vector<VehicleState>> per_vehicle;
  VehicleId next_id = 1;
  for (std::size_t i = 0; i < motions.size(); ++i) {
    const Motion& m = motions[i];
    const VehicleId id = next_id;
    TrackMeta t;
    t.vehicle_id = id;
    t.recording_id = c.recording_id;
    t.width = r2(m.length);
    t.height = r2(m.height);
    t.driving_direction = m.direction;
    t.vehicle_class = m.vehicle_class;
    std::vector<VehicleState> states;
    for (FrameIndex f = m.start_frame; f <= total_frames; ++f) {
      const Kinematics k = evaluate(m, static_cast<double>(f - m.start_frame) / c.frame_rate);
      if (k.x < 0.0 || k.x > c.road_length) break;
      VehicleState s;
      s.vehicle_id = id;
      s.frame = f;
      s.bbox_x = r2(k.x - t.width / 2.0);
      s.bbox_y = r2(k.y - t.height / 2.0);
      s.center_x = s.bbox_x + t.width / 2.0;
      s.center_y = s.bbox_y + t.height / 2.0;
      s.x_velocity = r2(k.vx);
      s.y_velocity = r2(k.vy);
      s.lane_id = nearest_lane_id(meta, m.direction, s.center_y);
      states.push_back(s);
    }
    if (states.empty()) {
      if (i < c.scripted.size()) invalid("scripted vehicle " + std::to_string(i + 1) + " never appears on the road");
      continue;
    }
    t.initial_frame = states.front().frame;
    t.final_frame = states.back().frame;
    tracks.push_back(t);
    per_vehicle.push_back(std::move(states));
    ++next_id;
  }

  // Neighbourhoods, frame by frame.
  std::vector<std::vector<std::pair<VehicleState*, const TrackMeta*>>> by_frame(
      static_cast<std::size_t>(total_frames) + 1);
  for (std::size_t v = 0; v < per_vehicle.size(); ++v) {
    for (VehicleState& s : per_vehicle[v]) by_frame[static_cast<std::size_t>(s.frame)].emplace_back(&s, &tracks[v]);
  }
  std::vector<const VehicleState*> present;
  std::vector<const TrackMeta*> present_tracks;
  for (const auto& frame : by_frame) {
    present.clear();
    present_tracks.clear();
    for (const auto& [s, t] : frame) {
      present.push_back(s);
      present_tracks.push_back(t);
    }
    for (const auto& [s, t] : frame) s->surrounding = compute_surrounding(meta, *s, *t, present, present_tracks);
  }

  std::vector<VehicleState> states;
  for (auto& v : per_vehicle) states.insert(states.end(), v.begin(), v.end());
  return Recording::build(std::move(meta), std::move(tracks), std::move(states));
}

}  // namespace scenefind
