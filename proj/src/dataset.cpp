#include "scenefind/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <memory>
#include <regex>
#include <sstream>
#include <thread>

#include <openssl/evp.h>

#include "csv.hpp"
#include "scenefind/error.hpp"

namespace scenefind {

namespace fs = std::filesystem;

std::string_view to_string(VehicleClass cls) { return cls == VehicleClass::Truck ? "Truck" : "Car"; }

std::string_view to_string(Slot slot) {
  static constexpr std::array<std::string_view, kSlotCount> names = {
      "preceding",       "following",      "leftPreceding",  "leftAlongside",
      "leftFollowing",   "rightPreceding", "rightAlongside", "rightFollowing"};
  return names[static_cast<std::size_t>(slot)];
}

namespace {

constexpr std::array<std::string_view, kSlotCount> kSlotColumns = {
    "precedingId",      "followingId",     "leftPrecedingId",  "leftAlongsideId",
    "leftFollowingId",  "rightPrecedingId", "rightAlongsideId", "rightFollowingId"};

void check_markings(const std::vector<double>& markings, const char* name) {
  if (markings.size() < 2) {
    throw Error(Errc::InconsistentMeta, std::string(name) + " needs at least two markings");
  }
  for (std::size_t i = 1; i < markings.size(); ++i) {
    if (!(markings[i] > markings[i - 1])) {
      throw Error(Errc::InconsistentMeta, std::string(name) + " must be strictly increasing");
    }
  }
}

std::string vehicle_frame(VehicleId id, FrameIndex frame) {
  return "vehicle " + std::to_string(id) + " at frame " + std::to_string(frame);
}

}  // namespace

Recording Recording::build(RecordingMeta meta, std::vector<TrackMeta> tracks,
                           std::vector<VehicleState> states) {
  if (!(meta.frame_rate > 0.0) || !std::isfinite(meta.frame_rate)) {
    throw Error(Errc::InconsistentMeta, "frame rate must be positive");
  }
  check_markings(meta.upper_lane_markings, "upperLaneMarkings");
  check_markings(meta.lower_lane_markings, "lowerLaneMarkings");

  std::sort(tracks.begin(), tracks.end(),
            [](const TrackMeta& a, const TrackMeta& b) { return a.vehicle_id < b.vehicle_id; });
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    const TrackMeta& t = tracks[i];
    if (i > 0 && tracks[i - 1].vehicle_id == t.vehicle_id) {
      throw Error(Errc::InconsistentMeta, "duplicate track id " + std::to_string(t.vehicle_id));
    }
    if (t.final_frame < t.initial_frame) {
      throw Error(Errc::InconsistentMeta, "track " + std::to_string(t.vehicle_id) + " ends before it starts");
    }
    if (!(t.width > 0.0) || !(t.height > 0.0)) {
      throw Error(Errc::InconsistentMeta, "track " + std::to_string(t.vehicle_id) + " has non-positive extent");
    }
  }

  Recording rec;
  rec.meta_ = std::move(meta);
  rec.tracks_ = std::move(tracks);

  std::size_t total = 0;
  rec.track_offsets_.reserve(rec.tracks_.size());
  for (const TrackMeta& t : rec.tracks_) {
    rec.track_offsets_.push_back(total);
    total += static_cast<std::size_t>(t.num_frames());
  }

  // Place every state in its (vehicle, frame) slot and verify exact coverage.
  rec.states_.assign(total, VehicleState{});
  std::vector<char> filled(total, 0);
  for (VehicleState& s : states) {
    const TrackMeta* t = rec.find_track(s.vehicle_id);
    if (t == nullptr) {
      throw Error(Errc::InconsistentMeta, "tracks row refers to unknown " + vehicle_frame(s.vehicle_id, s.frame));
    }
    if (!t->covers(s.frame)) {
      throw Error(Errc::InconsistentMeta, vehicle_frame(s.vehicle_id, s.frame) + " outside its declared range [" +
                                              std::to_string(t->initial_frame) + ", " +
                                              std::to_string(t->final_frame) + "]");
    }
    const auto idx = static_cast<std::size_t>(t - rec.tracks_.data());
    const std::size_t pos = rec.track_offsets_[idx] + static_cast<std::size_t>(s.frame - t->initial_frame);
    if (filled[pos]) throw Error(Errc::InconsistentMeta, "duplicate row for " + vehicle_frame(s.vehicle_id, s.frame));
    if (!std::isfinite(s.bbox_x) || !std::isfinite(s.bbox_y) || !std::isfinite(s.x_velocity) ||
        !std::isfinite(s.y_velocity)) {
      throw Error(Errc::InconsistentMeta, "non-finite values for " + vehicle_frame(s.vehicle_id, s.frame));
    }
    s.center_x = s.bbox_x + t->width / 2.0;
    s.center_y = s.bbox_y + t->height / 2.0;
    filled[pos] = 1;
    rec.states_[pos] = std::move(s);
  }
  for (std::size_t i = 0; i < rec.tracks_.size(); ++i) {
    const TrackMeta& t = rec.tracks_[i];
    for (FrameIndex f = t.initial_frame; f <= t.final_frame; ++f) {
      if (!filled[rec.track_offsets_[i] + static_cast<std::size_t>(f - t.initial_frame)]) {
        throw Error(Errc::InconsistentMeta, "missing row for " + vehicle_frame(t.vehicle_id, f));
      }
    }
  }

  // Frame index (CSR).
  if (!rec.tracks_.empty()) {
    FrameIndex lo = rec.tracks_.front().initial_frame;
    FrameIndex hi = rec.tracks_.front().final_frame;
    for (const TrackMeta& t : rec.tracks_) {
      lo = std::min(lo, t.initial_frame);
      hi = std::max(hi, t.final_frame);
    }
    rec.first_frame_ = lo;
    const auto span = static_cast<std::size_t>(hi - lo + 1);
    std::vector<std::size_t> counts(span + 1, 0);
    for (const TrackMeta& t : rec.tracks_) {
      for (FrameIndex f = t.initial_frame; f <= t.final_frame; ++f) ++counts[static_cast<std::size_t>(f - lo) + 1];
    }
    for (std::size_t i = 1; i <= span; ++i) counts[i] += counts[i - 1];
    rec.frame_offsets_ = counts;
    rec.frame_vehicles_.resize(counts.back());
    std::vector<std::size_t> cursor(counts.begin(), counts.end() - 1);
    // tracks_ is id-sorted, so each frame bucket ends up id-sorted too
    for (const TrackMeta& t : rec.tracks_) {
      for (FrameIndex f = t.initial_frame; f <= t.final_frame; ++f) {
        rec.frame_vehicles_[cursor[static_cast<std::size_t>(f - lo)]++] = t.vehicle_id;
      }
    }
  }

  for (const VehicleState& s : rec.states_) {
    for (std::size_t k = 0; k < kSlotCount; ++k) {
      const auto& other = s.surrounding[k];
      if (!other) continue;
      if (*other == s.vehicle_id || rec.find(*other, s.frame) == nullptr) {
        throw Error(Errc::InconsistentMeta, vehicle_frame(s.vehicle_id, s.frame) + ": " +
                                                std::string(kSlotColumns[k]) + " " + std::to_string(*other) +
                                                " does not exist at that frame");
      }
    }
  }
  return rec;
}

const TrackMeta* Recording::find_track(VehicleId id) const {
  auto it = std::lower_bound(tracks_.begin(), tracks_.end(), id,
                             [](const TrackMeta& t, VehicleId v) { return t.vehicle_id < v; });
  if (it == tracks_.end() || it->vehicle_id != id) return nullptr;
  return &*it;
}

const TrackMeta& Recording::track(VehicleId id) const {
  const TrackMeta* t = find_track(id);
  if (t == nullptr) {
    throw Error(Errc::UnknownScene, "recording " + std::to_string(meta_.recording_id) + " has no vehicle " + std::to_string(id));
  }
  return *t;
}

const VehicleState* Recording::find(VehicleId id, FrameIndex frame) const {
  const TrackMeta* t = find_track(id);
  if (t == nullptr || !t->covers(frame)) return nullptr;
  const auto idx = static_cast<std::size_t>(t - tracks_.data());
  return &states_[track_offsets_[idx] + static_cast<std::size_t>(frame - t->initial_frame)];
}

const VehicleState& Recording::at(VehicleId id, FrameIndex frame) const {
  const VehicleState* s = find(id, frame);
  if (s == nullptr) {
    throw Error(Errc::UnknownScene, "recording " + std::to_string(meta_.recording_id) + " has no " +
                                        vehicle_frame(id, frame));
  }
  return *s;
}

std::span<const VehicleState> Recording::track_states(VehicleId id) const {
  const TrackMeta& t = track(id);
  const auto idx = static_cast<std::size_t>(&t - tracks_.data());
  return {states_.data() + track_offsets_[idx], static_cast<std::size_t>(t.num_frames())};
}

std::span<const VehicleId> Recording::vehicles_at(FrameIndex frame) const {
  if (frame_offsets_.empty() || frame < first_frame_) return {};
  const auto i = static_cast<std::size_t>(frame - first_frame_);
  if (i + 1 >= frame_offsets_.size()) return {};
  return {frame_vehicles_.data() + frame_offsets_[i], frame_offsets_[i + 1] - frame_offsets_[i]};
}

FrameIndex Recording::last_frame() const {
  if (frame_offsets_.empty()) return first_frame_ - 1;
  return first_frame_ + static_cast<FrameIndex>(frame_offsets_.size()) - 2;
}

// ---------------------------------------------------------------------------
// Loading

std::string recording_prefix(int recording_id) {
  std::ostringstream os;
  os << std::setw(2) << std::setfill('0') << recording_id;
  return os.str();
}

namespace {

std::vector<double> parse_markings(const csv::Reader& r, std::size_t col) {
  std::vector<std::string_view> parts;
  csv::split(r.field(col), ';', parts);
  std::vector<double> out;
  for (std::string_view p : parts) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), v);
    if (p.empty() || ec != std::errc() || ptr != p.data() + p.size() || !std::isfinite(v)) {
      r.fail(col, "bad lane marking '" + std::string(p) + "'");
    }
    out.push_back(v);
  }
  return out;
}

RecordingMeta read_recording_meta(const fs::path& path, int recording_id) {
  csv::Reader r(path);
  const auto c_id = r.column("id");
  const auto c_rate = r.column("frameRate");
  const auto c_loc = r.column("locationId");
  const auto c_upper = r.column("upperLaneMarkings");
  const auto c_lower = r.column("lowerLaneMarkings");
  const bool has_duration = r.has_column("duration");
  const auto c_duration = has_duration ? r.column("duration") : 0;

  if (!r.next()) throw Error(Errc::MalformedRow, path.string() + ": no data row");
  RecordingMeta meta;
  meta.recording_id = static_cast<int>(r.get_int(c_id));
  meta.frame_rate = r.get_double(c_rate);
  meta.location_id = static_cast<int>(r.get_int(c_loc));
  meta.upper_lane_markings = parse_markings(r, c_upper);
  meta.lower_lane_markings = parse_markings(r, c_lower);
  if (has_duration) meta.duration = r.get_double(c_duration);
  if (meta.recording_id != recording_id) {
    throw Error(Errc::InconsistentMeta, path.string() + ": id " + std::to_string(meta.recording_id) +
                                            " does not match file prefix " + std::to_string(recording_id));
  }
  return meta;
}

std::vector<TrackMeta> read_tracks_meta(const fs::path& path, int recording_id) {
  csv::Reader r(path);
  const auto c_id = r.column("id");
  const auto c_w = r.column("width");
  const auto c_h = r.column("height");
  const auto c_first = r.column("initialFrame");
  const auto c_last = r.column("finalFrame");
  const auto c_dir = r.column("drivingDirection");
  const auto c_class = r.column("class");

  std::vector<TrackMeta> out;
  while (r.next()) {
    TrackMeta t;
    t.vehicle_id = static_cast<VehicleId>(r.get_int(c_id));
    t.recording_id = recording_id;
    t.width = r.get_double(c_w);
    t.height = r.get_double(c_h);
    t.initial_frame = static_cast<FrameIndex>(r.get_int(c_first));
    t.final_frame = static_cast<FrameIndex>(r.get_int(c_last));
    const long long dir = r.get_int(c_dir);
    if (dir != 1 && dir != 2) r.fail(c_dir, "drivingDirection must be 1 or 2");
    t.driving_direction = static_cast<DrivingDirection>(dir);
    const std::string_view cls = r.field(c_class);
    if (cls == "Car") {
      t.vehicle_class = VehicleClass::Car;
    } else if (cls == "Truck") {
      t.vehicle_class = VehicleClass::Truck;
    } else {
      r.fail(c_class, "unknown vehicle class '" + std::string(cls) + "'");
    }
    out.push_back(t);
  }
  return out;
}

std::vector<VehicleState> read_tracks(const fs::path& path) {
  csv::Reader r(path);
  const auto c_frame = r.column("frame");
  const auto c_id = r.column("id");
  const auto c_x = r.column("x");
  const auto c_y = r.column("y");
  r.column("width");
  r.column("height");
  const auto c_vx = r.column("xVelocity");
  const auto c_vy = r.column("yVelocity");
  const auto c_lane = r.column("laneId");
  std::array<std::size_t, kSlotCount> c_slots{};
  for (std::size_t k = 0; k < kSlotCount; ++k) c_slots[k] = r.column(kSlotColumns[k]);

  std::vector<VehicleState> out;
  while (r.next()) {
    VehicleState s;
    s.frame = static_cast<FrameIndex>(r.get_int(c_frame));
    s.vehicle_id = static_cast<VehicleId>(r.get_int(c_id));
    s.bbox_x = r.get_double(c_x);
    s.bbox_y = r.get_double(c_y);
    s.x_velocity = r.get_double(c_vx);
    s.y_velocity = r.get_double(c_vy);
    s.lane_id = static_cast<int>(r.get_int(c_lane));
    for (std::size_t k = 0; k < kSlotCount; ++k) {
      const long long v = r.get_int(c_slots[k]);
      if (v < 0) r.fail(c_slots[k], "negative vehicle id");
      if (v != 0) s.surrounding[k] = static_cast<VehicleId>(v);
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace

Recording load_recording(const fs::path& data_dir, int recording_id) {
  const std::string prefix = recording_prefix(recording_id);
  const fs::path meta_path = data_dir / (prefix + "_recordingMeta.csv");
  const fs::path tracks_meta_path = data_dir / (prefix + "_tracksMeta.csv");
  const fs::path tracks_path = data_dir / (prefix + "_tracks.csv");
  for (const fs::path& p : {meta_path, tracks_meta_path, tracks_path}) {
    if (!fs::is_regular_file(p)) throw Error(Errc::MissingFile, p.string());
  }
  RecordingMeta meta = read_recording_meta(meta_path, recording_id);
  std::vector<TrackMeta> tracks = read_tracks_meta(tracks_meta_path, recording_id);
  std::vector<VehicleState> states = read_tracks(tracks_path);
  try {
    return Recording::build(std::move(meta), std::move(tracks), std::move(states));
  } catch (const Error& e) {
    throw Error(e.code(), "recording " + prefix + ": " + std::string(e.what()));
  }
}

std::vector<int> discover_recordings(const fs::path& data_dir) {
  if (!fs::is_directory(data_dir)) throw Error(Errc::MissingFile, data_dir.string() + " is not a directory");
  static const std::regex pattern(R"((\d+)_recordingMeta\.csv)");
  std::vector<int> ids;
  for (const auto& entry : fs::directory_iterator(data_dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && std::regex_match(name, m, pattern)) ids.push_back(std::stoi(m[1].str()));
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<Recording> load_dataset(const fs::path& data_dir, unsigned threads) {
  const std::vector<int> ids = discover_recordings(data_dir);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<Recording> out;
  out.reserve(ids.size());
  for (std::size_t start = 0; start < ids.size(); start += threads) {
    std::vector<std::future<Recording>> batch;
    for (std::size_t i = start; i < std::min(ids.size(), start + threads); ++i) {
      batch.push_back(std::async(std::launch::async, [&data_dir, id = ids[i]] { return load_recording(data_dir, id); }));
    }
    for (auto& f : batch) out.push_back(f.get());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Writing

namespace {

double r2(double v) { return csv::round_to(v, 0.01); }

std::string join_markings(const std::vector<double>& m) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) out += ';';
    out += csv::format_double(m[i]);
  }
  return out;
}

struct Derived {
  double x_acc = 0, y_acc = 0, front_sight = 0, back_sight = 0, dhw = 0, thw = 0, ttc = 0, preceding_vx = 0;
};

}  // namespace

void write_recording(const Recording& rec, const fs::path& data_dir) {
  fs::create_directories(data_dir);
  const std::string prefix = recording_prefix(rec.id());
  const auto fmt = csv::format_double;
  const RecordingMeta& meta = rec.meta();

  double road_min = 0.0, road_max = 0.0;
  bool first = true;
  for (const VehicleState& s : rec.states()) {
    const TrackMeta& t = rec.track(s.vehicle_id);
    road_min = first ? s.bbox_x : std::min(road_min, s.bbox_x);
    road_max = first ? s.bbox_x + t.width : std::max(road_max, s.bbox_x + t.width);
    first = false;
  }

  struct TrackSummary {
    double traveled = 0, min_vx = 0, max_vx = 0, mean_vx = 0, min_dhw = -1, min_thw = -1, min_ttc = -1;
    int lane_changes = 0;
  };
  std::vector<TrackSummary> summaries;

  {
    std::ofstream out(data_dir / (prefix + "_tracks.csv"), std::ios::binary);
    if (!out) throw Error(Errc::MissingFile, "cannot write " + (data_dir / (prefix + "_tracks.csv")).string());
    out << "frame,id,x,y,width,height,xVelocity,yVelocity,xAcceleration,yAcceleration,"
           "frontSightDistance,backSightDistance,dhw,thw,ttc,precedingXVelocity,"
           "precedingId,followingId,leftPrecedingId,leftAlongsideId,leftFollowingId,"
           "rightPrecedingId,rightAlongsideId,rightFollowingId,laneId\n";
    for (const TrackMeta& t : rec.tracks()) {
      const auto states = rec.track_states(t.vehicle_id);
      const double sign = t.driving_direction == DrivingDirection::Lower ? 1.0 : -1.0;
      TrackSummary sum;
      double vx_total = 0.0;
      for (std::size_t i = 0; i < states.size(); ++i) {
        const VehicleState& s = states[i];
        Derived d;
        if (states.size() > 1) {
          const std::size_t a = i == 0 ? 0 : i - 1;
          const std::size_t b = i + 1 == states.size() ? i : i + 1;
          const double dt = static_cast<double>(b - a) / meta.frame_rate;
          d.x_acc = r2((states[b].x_velocity - states[a].x_velocity) / dt);
          d.y_acc = r2((states[b].y_velocity - states[a].y_velocity) / dt);
        }
        d.front_sight = r2(sign > 0 ? road_max - s.center_x : s.center_x - road_min);
        d.back_sight = r2(sign > 0 ? s.center_x - road_min : road_max - s.center_x);
        if (const auto& p = s.neighbor(Slot::Preceding)) {
          const VehicleState& ps = rec.at(*p, s.frame);
          const double gap = std::abs(ps.center_x - s.center_x) - 0.5 * (t.width + rec.track(*p).width);
          const double v = std::abs(s.x_velocity);
          const double closing = v - std::abs(ps.x_velocity);
          d.dhw = r2(std::max(gap, 0.0));
          d.thw = v > 0 ? r2(d.dhw / v) : 0.0;
          d.ttc = closing > 0 ? r2(d.dhw / closing) : 0.0;
          d.preceding_vx = ps.x_velocity;
          sum.min_dhw = sum.min_dhw < 0 ? d.dhw : std::min(sum.min_dhw, d.dhw);
          if (d.thw > 0) sum.min_thw = sum.min_thw < 0 ? d.thw : std::min(sum.min_thw, d.thw);
          if (d.ttc > 0) sum.min_ttc = sum.min_ttc < 0 ? d.ttc : std::min(sum.min_ttc, d.ttc);
        }
        if (i == 0) {
          sum.min_vx = sum.max_vx = s.x_velocity;
        } else {
          sum.min_vx = std::min(sum.min_vx, s.x_velocity);
          sum.max_vx = std::max(sum.max_vx, s.x_velocity);
          if (s.lane_id != states[i - 1].lane_id) ++sum.lane_changes;
        }
        vx_total += s.x_velocity;

        out << s.frame << ',' << s.vehicle_id << ',' << fmt(s.bbox_x) << ',' << fmt(s.bbox_y) << ','
            << fmt(t.width) << ',' << fmt(t.height) << ',' << fmt(s.x_velocity) << ',' << fmt(s.y_velocity) << ','
            << fmt(d.x_acc) << ',' << fmt(d.y_acc) << ',' << fmt(d.front_sight) << ',' << fmt(d.back_sight) << ','
            << fmt(d.dhw) << ',' << fmt(d.thw) << ',' << fmt(d.ttc) << ',' << fmt(d.preceding_vx);
        for (const auto& n : s.surrounding) out << ',' << n.value_or(0);
        out << ',' << s.lane_id << '\n';
      }
      sum.traveled = r2(std::abs(states.back().center_x - states.front().center_x));
      sum.mean_vx = r2(vx_total / static_cast<double>(states.size()));
      summaries.push_back(sum);
    }
  }

  std::size_t cars = 0, trucks = 0;
  double driven_distance = 0.0, driven_time = 0.0;
  {
    std::ofstream out(data_dir / (prefix + "_tracksMeta.csv"), std::ios::binary);
    out << "id,width,height,initialFrame,finalFrame,numFrames,class,drivingDirection,traveledDistance,"
           "minXVelocity,maxXVelocity,meanXVelocity,minDHW,minTHW,minTTC,numLaneChanges\n";
    std::size_t i = 0;
    for (const TrackMeta& t : rec.tracks()) {
      const TrackSummary& s = summaries[i++];
      (t.vehicle_class == VehicleClass::Car ? cars : trucks) += 1;
      driven_distance += s.traveled;
      driven_time += static_cast<double>(t.num_frames()) / meta.frame_rate;
      out << t.vehicle_id << ',' << fmt(t.width) << ',' << fmt(t.height) << ',' << t.initial_frame << ','
          << t.final_frame << ',' << t.num_frames() << ',' << to_string(t.vehicle_class) << ','
          << static_cast<int>(t.driving_direction) << ',' << fmt(s.traveled) << ',' << fmt(s.min_vx) << ','
          << fmt(s.max_vx) << ',' << fmt(s.mean_vx) << ',' << fmt(s.min_dhw) << ',' << fmt(s.min_thw) << ','
          << fmt(s.min_ttc) << ',' << s.lane_changes << '\n';
    }
  }
  {
    std::ofstream out(data_dir / (prefix + "_recordingMeta.csv"), std::ios::binary);
    out << "id,frameRate,locationId,speedLimit,month,weekDay,startTime,duration,totalDrivenDistance,"
           "totalDrivenTime,numVehicles,numCars,numTrucks,upperLaneMarkings,lowerLaneMarkings\n";
    out << meta.recording_id << ',' << fmt(meta.frame_rate) << ',' << meta.location_id << ",-1,01.2000,Mon,00:00,"
        << fmt(meta.duration) << ',' << fmt(r2(driven_distance)) << ',' << fmt(r2(driven_time)) << ','
        << rec.tracks().size() << ',' << cars << ',' << trucks << ',' << join_markings(meta.upper_lane_markings)
        << ',' << join_markings(meta.lower_lane_markings) << '\n';
  }
}

std::string dataset_digest(const fs::path& data_dir) {
  static const std::regex pattern(R"(\d+_(recordingMeta|tracksMeta|tracks)\.csv)");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(data_dir)) {
    if (entry.is_regular_file() && std::regex_match(entry.path().filename().string(), pattern)) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::vector<char> buffer(1 << 16);
  for (const fs::path& p : files) {
    const std::string name = p.filename().string();
    EVP_DigestUpdate(ctx.get(), name.data(), name.size() + 1);
    std::ifstream in(p, std::ios::binary);
    while (in) {
      in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
      if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buffer.data(), static_cast<std::size_t>(in.gcount()));
    }
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

}  // namespace scenefind
