#include "scenefind/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

#include "scenefind/error.hpp"
#include "scenefind/metric.hpp"

namespace scenefind {

const Recording& find_recording(std::span<const Recording> dataset, int recording_id) {
  for (const Recording& r : dataset) {
    if (r.id() == recording_id) return r;
  }
  throw Error(Errc::UnknownScene, "dataset has no recording " + std::to_string(recording_id));
}

namespace {

/// Relative lane per (direction, lane id) for one recording; nullopt = unclassifiable.
class LaneTable {
 public:
  LaneTable(const RecordingMeta& meta, const LaneOverrides& overrides) {
    const int max_id = static_cast<int>(meta.upper_lane_markings.size() + meta.lower_lane_markings.size()) + 2;
    for (int dir = 0; dir < 2; ++dir) {
      auto& row = table_[dir];
      row.resize(static_cast<std::size_t>(max_id) + 1);
      const auto direction = dir == 0 ? DrivingDirection::Upper : DrivingDirection::Lower;
      for (int id = 0; id <= max_id; ++id) {
        try {
          row[static_cast<std::size_t>(id)] = classify_lane(meta, direction, id, overrides);
        } catch (const Error&) {
        }
      }
    }
    meta_ = &meta;
    overrides_ = &overrides;
  }

  std::optional<RelativeLane> classify(DrivingDirection d, int lane_id) const {
    const auto& row = table_[d == DrivingDirection::Upper ? 0 : 1];
    if (lane_id >= 0 && static_cast<std::size_t>(lane_id) < row.size()) return row[static_cast<std::size_t>(lane_id)];
    if (auto o = overrides_->lookup(meta_->location_id, lane_id)) return o;
    return std::nullopt;
  }

 private:
  std::array<std::vector<std::optional<RelativeLane>>, 2> table_;
  const RecordingMeta* meta_ = nullptr;
  const LaneOverrides* overrides_ = nullptr;
};

bool has_neighbors(const VehicleState& s) {
  return std::any_of(s.surrounding.begin(), s.surrounding.end(), [](const auto& v) { return v.has_value(); });
}

}  // namespace

void for_each_candidate(std::span<const Recording> dataset, RelativeLane lane, int stride,
                        const LaneOverrides& overrides, bool include_ego,
                        const std::function<void(const SceneKey&)>& visit, CandidateCounts* counts) {
  if (stride < 1) throw Error(Errc::InvalidArgument, "frame stride must be >= 1");
  CandidateCounts local;
  for (const Recording& rec : dataset) {
    const LaneTable lanes(rec.meta(), overrides);
    for (const TrackMeta& t : rec.tracks()) {
      const auto states = rec.track_states(t.vehicle_id);
      for (std::size_t i = 0; i < states.size(); i += static_cast<std::size_t>(stride)) {
        const VehicleState& s = states[i];
        ++local.enumerated;
        if (lanes.classify(t.driving_direction, s.lane_id) != lane) continue;
        ++local.after_lane_filter;
        if (!include_ego && !has_neighbors(s)) {
          ++local.empty_skipped;
          continue;
        }
        visit(SceneKey{rec.id(), t.vehicle_id, s.frame});
      }
    }
  }
  if (counts != nullptr) *counts = local;
}

std::vector<SceneKey> enumerate_candidates(std::span<const Recording> dataset, RelativeLane lane, int stride,
                                           const LaneOverrides& overrides, bool include_ego,
                                           CandidateCounts* counts) {
  std::vector<SceneKey> out;
  for_each_candidate(dataset, lane, stride, overrides, include_ego, [&](const SceneKey& k) { out.push_back(k); },
                     counts);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

using Ranked = std::pair<double, SceneKey>;

/// Best entry per vehicle, bounded to the N smallest under (distance, key) order.
class TopTable {
 public:
  explicit TopTable(std::size_t capacity) : capacity_(capacity) {}

  void offer(const Ranked& r) {
    std::lock_guard lock(mutex_);
    entries_.insert(r);
    if (entries_.size() > capacity_) entries_.erase(std::prev(entries_.end()));
    if (entries_.size() == capacity_) threshold_.store(std::prev(entries_.end())->first, std::memory_order_relaxed);
  }

  /// Distance any newcomer must not exceed to enter; +inf until the table is full.
  double threshold() const { return threshold_.load(std::memory_order_relaxed); }

  std::vector<Ranked> sorted() const {
    std::lock_guard lock(mutex_);
    return {entries_.begin(), entries_.end()};
  }

 private:
  std::size_t capacity_;
  mutable std::mutex mutex_;
  std::set<Ranked> entries_;
  std::atomic<double> threshold_{std::numeric_limits<double>::infinity()};
};

struct Shard {
  std::size_t recording;
  const TrackMeta* track;
};

}  // namespace

SearchResult search(std::span<const Recording> dataset, const SearchQuery& query, const SearchOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  if (query.top_n < 1) throw Error(Errc::InvalidArgument, "top_n must be >= 1");
  if (query.frame_stride < 1) throw Error(Errc::InvalidArgument, "frame stride must be >= 1");

  const Recording& query_rec = find_recording(dataset, query.example.recording_id);
  SearchResult result;
  result.query = query;
  result.query_context =
      extract_context_set(query_rec, query.example, query.lambda, query.include_ego, options.overrides);
  const RelativeLane lane = result.query_context.relative_lane;
  const std::vector<Point4> query_points = result.query_context.scaled_points();

  std::vector<LaneTable> lane_tables;
  std::vector<Shard> shards;
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    lane_tables.emplace_back(dataset[r].meta(), options.overrides);
    for (const TrackMeta& t : dataset[r].tracks()) shards.push_back({r, &t});
  }

  TopTable table(query.top_n);
  std::atomic<std::size_t> next_shard{0};
  std::mutex stats_mutex;
  SearchStats stats;

  auto worker = [&] {
    SearchStats local;
    std::array<Point4, kMaxContextPoints> buffer;
    for (std::size_t i = next_shard.fetch_add(1); i < shards.size(); i = next_shard.fetch_add(1)) {
      const Recording& rec = dataset[shards[i].recording];
      const TrackMeta& track = *shards[i].track;
      const LaneTable& lanes = lane_tables[shards[i].recording];
      const bool excluded = query.exclude_query_vehicle && rec.id() == query.example.recording_id &&
                            track.vehicle_id == query.example.ego_id;
      const auto states = rec.track_states(track.vehicle_id);

      double best = std::numeric_limits<double>::infinity();
      FrameIndex best_frame = 0;
      for (std::size_t k = 0; k < states.size(); k += static_cast<std::size_t>(query.frame_stride)) {
        const VehicleState& s = states[k];
        ++local.candidates_enumerated;
        if (lanes.classify(track.driving_direction, s.lane_id) != lane) continue;
        ++local.candidates_after_lane_filter;
        if (!query.include_ego && !has_neighbors(s)) {
          ++local.empty_contexts_skipped;
          continue;
        }
        if (excluded) continue;
        const std::size_t n = extract_scaled_points(rec, s, track, query.lambda, query.include_ego, buffer);
        const std::span<const Point4> candidate(buffer.data(), n);
        ++local.distances_computed;
        if (options.prune) {
          const double cutoff = std::min(best, table.threshold());
          const auto d = kernel::hausdorff_bounded(query_points, candidate, cutoff);
          if (!d) {
            ++local.distances_pruned;
            continue;
          }
          if (*d < best) {
            best = *d;
            best_frame = s.frame;
          }
        } else {
          const double d = kernel::hausdorff(query_points, candidate);
          if (d < best) {
            best = d;
            best_frame = s.frame;
          }
        }
      }
      if (std::isfinite(best)) {
        table.offer({best, SceneKey{rec.id(), track.vehicle_id, best_frame}});
      }
    }
    std::lock_guard lock(stats_mutex);
    stats.candidates_enumerated += local.candidates_enumerated;
    stats.candidates_after_lane_filter += local.candidates_after_lane_filter;
    stats.empty_contexts_skipped += local.empty_contexts_skipped;
    stats.distances_computed += local.distances_computed;
    stats.distances_pruned += local.distances_pruned;
  };

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  if (stats.distances_computed == 0) {
    throw Error(Errc::NoCandidates, "no candidate scenes in lane " + std::string(to_string(lane)));
  }

  for (const auto& [distance, key] : table.sorted()) {
    SearchEntry e;
    e.key = key;
    e.distance = distance;
    e.context = extract_context_set(find_recording(dataset, key.recording_id), key, query.lambda, query.include_ego,
                                    options.overrides);
    result.entries.push_back(std::move(e));
  }
  stats.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  result.stats = stats;
  return result;
}

// ---------------------------------------------------------------------------

namespace {

class SpreadAccumulator {
 public:
  void add(const std::array<double, 4>& v) {
    for (std::size_t a = 0; a < 4; ++a) {
      auto& s = spread_.axes[a];
      s.min = spread_.count == 0 ? v[a] : std::min(s.min, v[a]);
      s.max = spread_.count == 0 ? v[a] : std::max(s.max, v[a]);
      sums_[a] += v[a];
    }
    ++spread_.count;
  }

  PointSpread finish() const {
    PointSpread out = spread_;
    for (std::size_t a = 0; a < 4 && out.count > 0; ++a) out.axes[a].mean = sums_[a] / static_cast<double>(out.count);
    return out;
  }

 private:
  PointSpread spread_;
  std::array<double, 4> sums_{};
};

}  // namespace

ContextSpread spread_report(const SearchResult& result) {
  ContextSpread out;
  SpreadAccumulator all;
  std::map<std::size_t, SpreadAccumulator> by_slot;
  const auto& query_points = result.query_context.points;

  for (const SearchEntry& e : result.entries) {
    ++out.cardinality_histogram[e.context.points.size()];
    for (const ContextPoint& p : e.context.points) {
      const std::array<double, 4> raw{p.x, p.y, p.vx, p.vy};
      all.add(raw);
      by_slot[p.slot ? static_cast<std::size_t>(*p.slot) : kSlotCount].add(raw);

      if (query_points.empty()) continue;
      const ContextPoint* nearest = &query_points.front();
      double best = kernel::point_distance(scaled(p), scaled(*nearest));
      for (const ContextPoint& q : query_points) {
        const double d = kernel::point_distance(scaled(p), scaled(q));
        if (d < best) {
          best = d;
          nearest = &q;
        }
      }
      const std::array<double, 4> dev{std::abs(p.x - nearest->x), std::abs(p.y - nearest->y),
                                      std::abs(p.vx - nearest->vx), std::abs(p.vy - nearest->vy)};
      for (std::size_t a = 0; a < 4; ++a) out.max_abs_deviation[a] = std::max(out.max_abs_deviation[a], dev[a]);
    }
  }
  out.all = all.finish();
  for (const auto& [slot, acc] : by_slot) out.by_slot[slot] = acc.finish();
  return out;
}

}  // namespace scenefind
