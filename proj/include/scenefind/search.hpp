#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "scenefind/context.hpp"

namespace scenefind {

struct SearchQuery {
  SceneKey example;
  double lambda = kDefaultLambda;
  std::size_t top_n = 250;
  int frame_stride = 1;
  bool include_ego = false;
  bool exclude_query_vehicle = false;
};

struct SearchOptions {
  unsigned threads = 0;  // 0 = hardware concurrency
  bool prune = true;     // false computes every full distance (reference path)
  LaneOverrides overrides;
};

struct SearchEntry {
  SceneKey key;
  double distance = 0.0;
  ContextSet context;
};

struct SearchStats {
  std::uint64_t candidates_enumerated = 0;
  std::uint64_t candidates_after_lane_filter = 0;
  std::uint64_t empty_contexts_skipped = 0;
  std::uint64_t distances_computed = 0;
  std::uint64_t distances_pruned = 0;
  double wall_time = 0.0;  // s
};

struct SearchResult {
  SearchQuery query;
  ContextSet query_context;
  std::vector<SearchEntry> entries;  // ascending distance, ties by key
  SearchStats stats;
};

const Recording& find_recording(std::span<const Recording> dataset, int recording_id);

struct CandidateCounts {
  std::uint64_t enumerated = 0;
  std::uint64_t after_lane_filter = 0;
  std::uint64_t empty_skipped = 0;
};

/// Visits every (recording, vehicle, frame) with frame = initial_frame (mod stride)
/// whose relative lane equals `lane` and whose context set is non-empty.
void for_each_candidate(std::span<const Recording> dataset, RelativeLane lane, int stride,
                        const LaneOverrides& overrides, bool include_ego,
                        const std::function<void(const SceneKey&)>& visit,
                        CandidateCounts* counts = nullptr);

std::vector<SceneKey> enumerate_candidates(std::span<const Recording> dataset, RelativeLane lane,
                                           int stride, const LaneOverrides& overrides = {},
                                           bool include_ego = false,
                                           CandidateCounts* counts = nullptr);

/// Ranks every candidate scene by Hausdorff distance to the query's context set and
/// keeps the best frame per (recording, vehicle). Results are independent of the
/// thread count. Throws Errc::EmptyContext, Errc::NoCandidates, Errc::UnknownScene.
SearchResult search(std::span<const Recording> dataset, const SearchQuery& query,
                    const SearchOptions& options = {});

struct AxisSpread {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double range() const { return max - min; }
};

/// Spread of the unscaled coordinates (x, y, vx, vy) over a group of points.
struct PointSpread {
  std::size_t count = 0;
  std::array<AxisSpread, 4> axes{};
};

struct ContextSpread {
  PointSpread all;
  /// Keyed by slot index; kSlotCount denotes the ego point.
  std::map<std::size_t, PointSpread> by_slot;
  /// Largest unscaled |difference| between a retrieved point and its nearest
  /// (scaled-metric) point of the query context, per axis.
  std::array<double, 4> max_abs_deviation{};
  /// Number of retrieved sets with each cardinality.
  std::map<std::size_t, std::size_t> cardinality_histogram;
};

ContextSpread spread_report(const SearchResult& result);

}  // namespace scenefind
