#include "scenefind/context.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "scenefind/error.hpp"

namespace scenefind {

std::string_view to_string(RelativeLane lane) {
  switch (lane) {
    case RelativeLane::Left: return "Left";
    case RelativeLane::Center: return "Center";
    case RelativeLane::Right: return "Right";
    case RelativeLane::Merging: return "Merging";
  }
  return "?";
}

RelativeLane parse_relative_lane(std::string_view text) {
  if (text == "Left") return RelativeLane::Left;
  if (text == "Center") return RelativeLane::Center;
  if (text == "Right") return RelativeLane::Right;
  if (text == "Merging") return RelativeLane::Merging;
  throw Error(Errc::InvalidArgument, "unknown relative lane '" + std::string(text) + "'");
}

ContextSet ContextSet::with_lambda(double new_lambda) const {
  if (!(new_lambda > 0.0)) throw Error(Errc::InvalidArgument, "lambda must be positive");
  ContextSet out = *this;
  out.lambda = new_lambda;
  for (ContextPoint& p : out.points) {
    p.y_scaled = new_lambda * p.y;
    p.vy_scaled = new_lambda * p.vy;
  }
  return out;
}

std::vector<Point4> ContextSet::scaled_points() const {
  std::vector<Point4> out;
  out.reserve(points.size());
  for (const ContextPoint& p : points) out.push_back(scaled(p));
  return out;
}

// ---------------------------------------------------------------------------

LaneOverrides LaneOverrides::parse(std::istream& in) {
  LaneOverrides out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    int location = 0, lane = 0;
    std::string label;
    if (!(fields >> location)) continue;  // blank or comment-only
    if (!(fields >> lane >> label)) {
      throw Error(Errc::MalformedRow, "lane override line " + std::to_string(line_no) +
                                          ": expected 'location_id lane_id relative_lane'");
    }
    out.set(location, lane, parse_relative_lane(label));
  }
  return out;
}

LaneOverrides LaneOverrides::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::MissingFile, path.string());
  return parse(in);
}

std::optional<RelativeLane> LaneOverrides::lookup(int location_id, int lane_id) const {
  auto it = table_.find({location_id, lane_id});
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// highD lane numbering: the k-th lane between upper markings k and k+1 has id k+2;
// the k-th lower lane has id (number of upper markings) + 2 + k. The upper
// carriageway's rightmost lane is its first (smallest y); the lower carriageway's
// rightmost lane is its last (largest y).

LaneGeometry lane_geometry(const RecordingMeta& meta, int lane_id) {
  const auto& up = meta.upper_lane_markings;
  const auto& low = meta.lower_lane_markings;
  const int upper_count = static_cast<int>(up.size()) - 1;
  const int lower_count = static_cast<int>(low.size()) - 1;
  const int lower_first_id = static_cast<int>(up.size()) + 2;

  LaneGeometry g;
  if (lane_id >= 2 && lane_id < 2 + upper_count) {
    const int k = lane_id - 2;
    g.carriageway = DrivingDirection::Upper;
    g.lane_count = upper_count;
    g.index_from_right = k;
    g.lower_marking = up[static_cast<std::size_t>(k)];
    g.upper_marking = up[static_cast<std::size_t>(k) + 1];
    return g;
  }
  if (lane_id >= lower_first_id && lane_id < lower_first_id + lower_count) {
    const int k = lane_id - lower_first_id;
    g.carriageway = DrivingDirection::Lower;
    g.lane_count = lower_count;
    g.index_from_right = lower_count - 1 - k;
    g.lower_marking = low[static_cast<std::size_t>(k)];
    g.upper_marking = low[static_cast<std::size_t>(k) + 1];
    return g;
  }
  throw Error(Errc::UnclassifiableLane, "lane id " + std::to_string(lane_id) + " outside the marking-derived range");
}

std::optional<int> lane_id_at(const RecordingMeta& meta, DrivingDirection direction, double center_y) {
  const bool upper = direction == DrivingDirection::Upper;
  const auto& m = upper ? meta.upper_lane_markings : meta.lower_lane_markings;
  const int first_id = upper ? 2 : static_cast<int>(meta.upper_lane_markings.size()) + 2;
  for (std::size_t k = 0; k + 1 < m.size(); ++k) {
    if (center_y >= m[k] && center_y < m[k + 1]) return first_id + static_cast<int>(k);
  }
  return std::nullopt;
}

RelativeLane classify_lane(const RecordingMeta& meta, DrivingDirection direction, int lane_id,
                           const LaneOverrides& overrides) {
  if (auto o = overrides.lookup(meta.location_id, lane_id)) return *o;
  const LaneGeometry g = lane_geometry(meta, lane_id);
  if (g.carriageway != direction) {
    throw Error(Errc::UnclassifiableLane, "lane id " + std::to_string(lane_id) +
                                              " belongs to the opposite carriageway");
  }
  if (g.index_from_right == 0) return RelativeLane::Right;
  if (g.index_from_right == g.lane_count - 1) return RelativeLane::Left;
  return RelativeLane::Center;
}

RelativeLane relative_lane(const Recording& recording, VehicleId vehicle_id, FrameIndex frame,
                           const LaneOverrides& overrides) {
  const VehicleState& s = recording.at(vehicle_id, frame);
  return classify_lane(recording.meta(), recording.track(vehicle_id).driving_direction, s.lane_id, overrides);
}

// ---------------------------------------------------------------------------

namespace {

struct Canonical {
  double x, y, vx, vy;
};

// Center-to-center offset and absolute velocity of `other` in the ego frame.
Canonical to_ego_frame(const VehicleState& ego, double sign, const VehicleState& other) {
  return {sign * (other.center_x - ego.center_x), -sign * (other.center_y - ego.center_y),
          sign * other.x_velocity, -sign * other.y_velocity};
}

Canonical ego_point(const VehicleState& ego, double sign) {
  return {0.0, 0.0, sign * ego.x_velocity, -sign * ego.y_velocity};
}

}  // namespace

std::size_t extract_scaled_points(const Recording& recording, const VehicleState& ego,
                                  const TrackMeta& ego_track, double lambda, bool include_ego,
                                  std::span<Point4, kMaxContextPoints> out) {
  const double sign = travel_sign(ego_track.driving_direction);
  std::size_t n = 0;
  for (const auto& id : ego.surrounding) {
    if (!id) continue;
    const Canonical c = to_ego_frame(ego, sign, recording.at(*id, ego.frame));
    out[n++] = {c.x, lambda * c.y, c.vx, lambda * c.vy};
  }
  if (include_ego) {
    const Canonical c = ego_point(ego, sign);
    out[n++] = {c.x, lambda * c.y, c.vx, lambda * c.vy};
  }
  return n;
}

ContextSet extract_context_set(const Recording& recording, const SceneKey& key, double lambda,
                               bool include_ego, const LaneOverrides& overrides) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(Errc::InvalidArgument, "lambda must be positive");
  if (key.recording_id != recording.id()) {
    throw Error(Errc::UnknownScene, "scene refers to recording " + std::to_string(key.recording_id) +
                                        ", got recording " + std::to_string(recording.id()));
  }
  const VehicleState& ego = recording.at(key.ego_id, key.frame);
  const TrackMeta& track = recording.track(key.ego_id);
  const double sign = travel_sign(track.driving_direction);

  ContextSet set;
  set.key = key;
  set.lambda = lambda;
  set.relative_lane = classify_lane(recording.meta(), track.driving_direction, ego.lane_id, overrides);

  auto push = [&](const Canonical& c, VehicleId source, std::optional<Slot> slot) {
    ContextPoint p;
    p.x = c.x;
    p.y = c.y;
    p.vx = c.vx;
    p.vy = c.vy;
    p.y_scaled = lambda * c.y;
    p.vy_scaled = lambda * c.vy;
    p.source_vehicle_id = source;
    p.slot = slot;
    set.points.push_back(p);
  };
  for (std::size_t k = 0; k < kSlotCount; ++k) {
    const auto& id = ego.surrounding[k];
    if (!id) continue;
    push(to_ego_frame(ego, sign, recording.at(*id, key.frame)), *id, static_cast<Slot>(k));
  }
  if (include_ego) push(ego_point(ego, sign), key.ego_id, std::nullopt);

  if (set.points.empty()) {
    throw Error(Errc::EmptyContext, "vehicle " + std::to_string(key.ego_id) + " at frame " +
                                        std::to_string(key.frame) + " has no surrounding vehicles");
  }
  return set;
}

}  // namespace scenefind
