// Acceptance suite: one PASS/FAIL/SKIP line per criterion. Exit status is non-zero
// when a gating criterion fails. The two dataset reproductions run only when
// SCENEFIND_HIGHD_DIR points at a highD directory.

#include <sys/wait.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "scenefind/error.hpp"
#include "scenefind/metric.hpp"
#include "scenefind/response.hpp"
#include "scenefind/result_io.hpp"
#include "scenefind/search.hpp"
#include "scenefind/synthetic.hpp"
#include "tmpdir.hpp"

using namespace scenefind;
using Clock = std::chrono::steady_clock;

namespace {

enum class Outcome { Pass, Fail, Skip };

struct Line {
  int id;
  Outcome outcome;
  bool gating;
  std::string detail;
};

std::vector<Line> g_lines;

void report(int id, Outcome outcome, const std::string& detail, bool gating = true) {
  std::cerr << "criterion " << id << " done" << std::endl;
  g_lines.push_back({id, outcome, gating, detail});
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<Point4> as_points(const oracle::Set& s) { return {s.begin(), s.end()}; }

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

// Every search run in this binary is kept for the dedup / lane audit.
std::vector<std::pair<const std::vector<Recording>*, SearchResult>> g_runs;

// ---------------------------------------------------------------------------

void metric_oracle_equivalence() {
  std::mt19937_64 rng(20240101);
  const int pairs = 100'000;
  std::vector<std::pair<oracle::Set, oracle::Set>> data;
  data.reserve(pairs);
  for (int i = 0; i < pairs; ++i) data.emplace_back(oracle::random_set(rng), oracle::random_set(rng));

  const auto t0 = Clock::now();
  std::vector<double> fast(pairs);
  for (int i = 0; i < pairs; ++i) {
    fast[static_cast<std::size_t>(i)] = kernel::hausdorff(as_points(data[static_cast<std::size_t>(i)].first),
                                                          as_points(data[static_cast<std::size_t>(i)].second));
  }
  const double kernel_time = seconds_since(t0);
  int mismatches = 0;
  for (int i = 0; i < pairs; ++i) {
    const auto& [a, b] = data[static_cast<std::size_t>(i)];
    if (fast[static_cast<std::size_t>(i)] != oracle::hausdorff(a, b)) ++mismatches;
  }
  const double total = seconds_since(t0);
  report(1, mismatches == 0 && total < 30.0 ? Outcome::Pass : Outcome::Fail,
         "metric oracle equivalence: " + std::to_string(pairs) + " pairs, " + std::to_string(mismatches) +
             " bitwise mismatches, kernel " + fmt(kernel_time, 3) + " s, with oracle " + fmt(total, 3) +
             " s (limit 30 s)");
}

void metric_axioms() {
  std::mt19937_64 rng(77);
  int symmetry = 0, identity = 0, triangle = 0;
  double worst_slack = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 10'000; ++i) {
    const auto a = as_points(oracle::random_set(rng));
    const auto b = as_points(oracle::random_set(rng));
    const auto c = as_points(oracle::random_set(rng));
    if (kernel::hausdorff(a, b) != kernel::hausdorff(b, a)) ++symmetry;
    auto shuffled = a;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto doubled = a;
    doubled.insert(doubled.end(), a.begin(), a.end());
    if (kernel::hausdorff(a, a) != 0.0 || kernel::hausdorff(a, shuffled) != 0.0 ||
        kernel::hausdorff(a, doubled) != 0.0 || kernel::hausdorff(a, b) == 0.0) {
      ++identity;
    }
    const double slack = kernel::hausdorff(a, c) - (kernel::hausdorff(a, b) + kernel::hausdorff(b, c));
    worst_slack = std::max(worst_slack, slack);
    if (slack > 1e-9) ++triangle;
  }
  report(2, symmetry + identity + triangle == 0 ? Outcome::Pass : Outcome::Fail,
         "metric axioms on 10000 triples: symmetry violations " + std::to_string(symmetry) + ", identity " +
             std::to_string(identity) + ", triangle (1e-9 slack) " + std::to_string(triangle) +
             ", largest d(a,c) - d(a,b) - d(b,c) = " + fmt(worst_slack, 4));
}

// ---------------------------------------------------------------------------

std::vector<Recording> background_dataset(int recordings, int first_id, double min_speed, double max_speed,
                                          std::uint64_t seed) {
  std::vector<Recording> out;
  for (int r = 0; r < recordings; ++r) {
    SynthConfig c;
    c.recording_id = first_id + r;
    c.vehicles = 200;
    c.duration = 120.0;
    c.min_speed = min_speed;
    c.max_speed = max_speed;
    out.push_back(generate_synthetic(c, seed + static_cast<std::uint64_t>(r)));
  }
  return out;
}

std::vector<std::pair<double, SceneKey>> flatten(const SearchResult& r) {
  std::vector<std::pair<double, SceneKey>> out;
  for (const auto& e : r.entries) out.emplace_back(e.distance, e.key);
  return out;
}

void pruned_search_exactness() {
  static const std::vector<Recording> data = background_dataset(4, 1, 22.0, 38.0, 3000);
  SceneKey example{};
  for (const VehicleState& s : data[0].states()) {
    int n = 0;
    for (const auto& id : s.surrounding) n += id.has_value();
    if (n == 4 && relative_lane(data[0], s.vehicle_id, s.frame) == RelativeLane::Right) {
      example = {1, s.vehicle_id, s.frame};
      break;
    }
  }
  SearchQuery q;
  q.example = example;
  q.top_n = 250;
  const auto t0 = Clock::now();
  const SearchResult reference = search(data, q, {.threads = 1, .prune = false});
  const double ref_time = seconds_since(t0);
  g_runs.emplace_back(&data, reference);
  const auto expected = flatten(reference);

  bool identical = true;
  std::ostringstream detail;
  detail << "pruned search vs exhaustive reference on " << reference.stats.distances_computed
         << " candidate scenes (reference " << fmt(ref_time, 3) << " s):";
  for (unsigned workers : {1u, 4u, 8u}) {
    const auto t1 = Clock::now();
    const SearchResult r = search(data, q, {.threads = workers, .prune = true});
    const double elapsed = seconds_since(t1);
    g_runs.emplace_back(&data, r);
    const bool same = flatten(r) == expected;
    identical = identical && same;
    detail << " " << workers << "w " << (same ? "identical" : "DIFFERENT") << " (" << fmt(elapsed, 3) << " s, "
           << r.stats.distances_pruned << " pruned)";
  }
  const bool enough = reference.stats.distances_computed >= 100'000;
  if (!enough) detail << "; fewer than 100000 candidates";
  report(3, identical && enough ? Outcome::Pass : Outcome::Fail, detail.str());
}

// ---------------------------------------------------------------------------
// Planted neighbours: the query scene is an ego in the rightmost lane with a
// preceding car 40 m ahead, a left-lane follower 95 m behind and a same-lane
// follower 128.7 m behind, all at 35 m/s. Each planted recording repeats the
// formation with a small, distinct perturbation; half of them use the opposite
// carriageway. Background traffic drives at 22-28 m/s.

SynthConfig formation(int recording_id, DrivingDirection dir, double dx_follow, double dx_left, double lat_left) {
  const bool lower = dir == DrivingDirection::Lower;
  const double ego_x = lower ? 150.0 : 270.0;
  const double fwd = lower ? 1.0 : -1.0;
  SynthConfig c;
  c.recording_id = recording_id;
  c.vehicles = 0;
  c.duration = 8.0;
  auto vehicle = [&](int lane, double offset, double lateral) {
    ScriptedVehicle v;
    v.direction = dir;
    v.lane_from_right = lane;
    v.start_position = ego_x + fwd * offset;
    v.speed = 35.0;
    v.lateral_offset = lateral;
    v.length = 4.6;
    return v;
  };
  c.scripted = {vehicle(0, 0.0, 0.0), vehicle(0, 40.0, 0.0), vehicle(1, -95.0 + dx_left, lat_left),
                vehicle(0, -128.7 + dx_follow, 0.0)};
  return c;
}

void planted_neighbour_recall() {
  constexpr int K = 25;
  testing_support::TempDir dir("scenefind-accept");
  std::vector<Recording> generated;
  generated.push_back(generate_synthetic(formation(1, DrivingDirection::Lower, 0, 0, 0), 1));
  for (int k = 1; k <= K; ++k) {
    const auto dir_k = k % 2 ? DrivingDirection::Upper : DrivingDirection::Lower;
    // distinct perturbation sizes: ~0.23 m per step in the follower gap plus a lateral nudge
    generated.push_back(generate_synthetic(formation(1 + k, dir_k, -0.23 * k, 0.11 * k, 0.004 * k), 1));
  }
  for (auto& r : background_dataset(4, K + 2, 22.0, 28.0, 5000)) generated.push_back(std::move(r));
  for (const Recording& r : generated) write_recording(r, dir.path());
  static std::vector<Recording> data;
  data = load_dataset(dir.path());

  SearchQuery q;
  q.example = {1, 1, 1};
  q.top_n = 250;
  q.exclude_query_vehicle = true;
  const SearchResult r = search(data, q);
  g_runs.emplace_back(&data, r);

  // Independent recomputation over the raw CSV rows of every recording.
  std::vector<oracle::RawRecording> raw;
  for (const Recording& rec : data) raw.push_back(oracle::read_raw(dir.path(), rec.id()));
  const auto& qraw = raw[0];
  const auto qidx = oracle::index_rows(qraw);
  const auto query_set = oracle::raw_context(qraw, qidx.at({1, 1}), q.lambda, qidx);
  std::map<std::pair<int, int>, std::pair<double, int>> best;  // (rec, vehicle) -> (distance, frame)
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& rec = raw[i];
    const int rid = data[i].id();
    const auto idx = oracle::index_rows(rec);
    for (std::size_t row = 0; row < rec.rows.size(); ++row) {
      const auto& s = rec.rows[row];
      if (rid == 1 && s.id == 1) continue;
      if (oracle::raw_relative_lane(rec, s.lane, rec.direction.at(s.id)) != 0) continue;
      const auto ctx = oracle::raw_context(rec, row, q.lambda, idx);
      if (ctx.empty()) continue;
      const std::pair<double, int> cand{oracle::hausdorff(query_set, ctx), s.frame};
      auto [it, fresh] = best.try_emplace({rid, s.id}, cand);
      if (!fresh && cand < it->second) it->second = cand;
    }
  }
  std::vector<std::pair<double, SceneKey>> ranked;
  for (const auto& [k, v] : best) ranked.push_back({v.first, SceneKey{k.first, k.second, v.second}});
  std::sort(ranked.begin(), ranked.end());

  bool ok = r.entries.size() >= static_cast<std::size_t>(K) && ranked.size() >= static_cast<std::size_t>(K);
  int planted_in_top = 0;
  for (int i = 0; ok && i < K; ++i) {
    const auto& e = r.entries[static_cast<std::size_t>(i)];
    const bool planted = e.key.recording_id >= 2 && e.key.recording_id <= K + 1 && e.key.ego_id == 1;
    planted_in_top += planted;
    ok = ok && planted && e.key == ranked[static_cast<std::size_t>(i)].second &&
         e.distance == ranked[static_cast<std::size_t>(i)].first;
    if (i > 0) ok = ok && e.distance > r.entries[static_cast<std::size_t>(i - 1)].distance;
  }
  const double gap = r.entries.size() > K ? r.entries[K].distance : std::numeric_limits<double>::infinity();
  report(4, ok ? Outcome::Pass : Outcome::Fail,
         "planted-neighbour recall: " + std::to_string(planted_in_top) + "/" + std::to_string(K) +
             " planted scenes in the top " + std::to_string(K) + ", order matches recomputed distances; " +
             std::to_string(r.stats.distances_computed) + " candidates, worst planted distance " +
             fmt(r.entries.empty() ? 0 : r.entries[std::min<std::size_t>(K, r.entries.size()) - 1].distance, 4) +
             ", next " + fmt(gap, 4));
}

void dedup_and_lane_soundness() {
  std::size_t entries = 0, duplicates = 0, lane_errors = 0;
  for (const auto& [data, r] : g_runs) {
    std::set<std::pair<int, VehicleId>> seen;
    for (const SearchEntry& e : r.entries) {
      ++entries;
      if (!seen.insert({e.key.recording_id, e.key.ego_id}).second) ++duplicates;
      const Recording& rec = find_recording(*data, e.key.recording_id);
      if (relative_lane(rec, e.key.ego_id, e.key.frame) != r.query_context.relative_lane) ++lane_errors;
    }
  }
  report(5, duplicates + lane_errors == 0 && entries > 0 ? Outcome::Pass : Outcome::Fail,
         "dedup and lane filter over " + std::to_string(g_runs.size()) + " search runs, " + std::to_string(entries) +
             " entries: " + std::to_string(duplicates) + " duplicate vehicles, " + std::to_string(lane_errors) +
             " lane mismatches");
}

// ---------------------------------------------------------------------------

int run_cli(const std::string& args) {
#ifdef SCENEFIND_CLI
  const std::string cmd = std::string(SCENEFIND_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#else
  (void)args;
  return -1;
#endif
}

void lambda_behaviour() {
  // Ego with a left-preceding car; the second scene moves that car by delta towards the ego's left.
  auto make = [](double delta) {
    RecordingMeta m;
    m.recording_id = 1;
    m.upper_lane_markings = {8.0, 12.0, 16.0};
    m.lower_lane_markings = {20.0, 24.0, 28.0};
    auto track = [](VehicleId id) {
      TrackMeta t;
      t.vehicle_id = id;
      t.recording_id = 1;
      t.initial_frame = t.final_frame = 1;
      t.width = 4.5;
      t.height = 1.9;
      return t;
    };
    VehicleState ego, other, behind;
    ego = {.vehicle_id = 1, .frame = 1, .bbox_x = 100, .bbox_y = 25.05, .x_velocity = 30, .lane_id = 6};
    ego.surrounding[static_cast<std::size_t>(Slot::LeftPreceding)] = 2;
    ego.surrounding[static_cast<std::size_t>(Slot::Following)] = 3;
    other = {.vehicle_id = 2, .frame = 1, .bbox_x = 130, .bbox_y = 21.05 - delta, .x_velocity = 31, .lane_id = 5};
    behind = {.vehicle_id = 3, .frame = 1, .bbox_x = 60, .bbox_y = 25.05, .x_velocity = 29, .lane_id = 6};
    return Recording::build(m, {track(1), track(2), track(3)}, {ego, other, behind});
  };
  double worst = 0.0;
  int cases = 0;
  for (double lambda : {1.0, 5.0, 10.0, 20.0}) {
    for (double delta : {0.05, 0.25, 0.5, 1.0, 1.5}) {
      const ContextSet a = extract_context_set(make(0.0), {1, 1, 1}, lambda);
      const ContextSet b = extract_context_set(make(delta), {1, 1, 1}, lambda);
      const double d = hausdorff(a, b);
      // displaced lateral difference as stored after the center transform
      const double expected = lambda * delta;
      worst = std::max(worst, std::abs(d - expected) / expected);
      ++cases;
    }
  }
  bool manifest_ok = false;
  std::string manifest_note;
  {
    testing_support::TempDir dir("scenefind-lambda");
    const std::string data = (dir / "data").string();
    if (run_cli("synth --seed 42 --out " + data) == 0) {
      const Recording rec = load_recording(data, 1);
      for (const VehicleState& s : rec.states()) {
        if (!s.neighbor(Slot::Preceding)) continue;
        const std::string out = (dir / "r.json").string();
        const int code = run_cli("search --data-dir " + data + " --recording 1 --ego " + std::to_string(s.vehicle_id) +
                                 " --frame " + std::to_string(s.frame) + " --top 5 --out " + out);
        if (code == 0) {
          const auto m = nlohmann::json::parse(testing_support::slurp(dir / "r.manifest.json"));
          manifest_ok = m.at("query").at("lambda").get<double>() == 10.0;
          manifest_note = "manifest lambda " + m.at("query").at("lambda").dump();
        } else {
          manifest_note = "search exited " + std::to_string(code);
        }
        break;
      }
    } else {
      manifest_note = "command-line tool unavailable";
    }
  }
  report(6, worst <= 1e-12 && manifest_ok ? Outcome::Pass : Outcome::Fail,
         "lambda behaviour: " + std::to_string(cases) + " displaced pairs, worst relative error " + fmt(worst, 3) +
             " (limit 1e-12); default run " + manifest_note);
}

void throughput() {
  std::mt19937_64 rng(99);
  constexpr std::size_t kQueries = 64;
  constexpr std::size_t kEvaluations = 1'000'000;
  std::vector<std::vector<Point4>> pool;
  for (std::size_t i = 0; i < 4096; ++i) pool.push_back(as_points(oracle::random_set(rng)));
  std::vector<std::vector<Point4>> queries(pool.begin(), pool.begin() + kQueries);

  std::atomic<std::size_t> next{0};
  std::atomic<std::uint64_t> checksum{0};
  const auto t0 = Clock::now();
  {
    std::vector<std::jthread> workers;
    for (int w = 0; w < 4; ++w) {
      workers.emplace_back([&] {
        constexpr std::size_t kChunk = 4096;
        double local = 0.0;
        for (std::size_t start = next.fetch_add(kChunk); start < kEvaluations; start = next.fetch_add(kChunk)) {
          const std::size_t end = std::min(kEvaluations, start + kChunk);
          for (std::size_t i = start; i < end; ++i) {
            local += kernel::hausdorff(queries[i % kQueries], pool[(i * 2654435761u) % pool.size()]);
          }
        }
        checksum.fetch_add(static_cast<std::uint64_t>(local));
      });
    }
  }
  const double elapsed = seconds_since(t0);
  report(7, elapsed <= 10.0 ? Outcome::Pass : Outcome::Fail,
         "throughput: 1000000 full Hausdorff evaluations (sets of 1-8 points) on 4 worker threads in " +
             fmt(elapsed, 3) + " s (limit 10 s, " + std::to_string(std::thread::hardware_concurrency()) +
             " hardware threads)",
         /*gating=*/false);
}

// ---------------------------------------------------------------------------

LaneOverrides highd_overrides() {
  if (const char* p = std::getenv("SCENEFIND_LANE_OVERRIDES")) return LaneOverrides::load(p);
  return {};
}

void highd_candidate_count(const std::vector<Recording>* highd) {
  if (highd == nullptr) {
    report(8, Outcome::Skip, "right-lane candidate count over highD: SCENEFIND_HIGHD_DIR not set");
    return;
  }
  CandidateCounts counts;
  for_each_candidate(*highd, RelativeLane::Right, 1, highd_overrides(), false, [](const SceneKey&) {}, &counts);
  const std::uint64_t expected = 12'515'286;
  report(8, counts.after_lane_filter == expected && highd->size() == 60 ? Outcome::Pass : Outcome::Fail,
         "right-lane candidate count over " + std::to_string(highd->size()) + " recordings: " +
             std::to_string(counts.after_lane_filter) + " (expected " + std::to_string(expected) + "), " +
             std::to_string(counts.empty_skipped) + " of them with empty context");
}

void highd_case_study(const std::vector<Recording>* highd) {
  if (highd == nullptr) {
    report(9, Outcome::Skip, "highD case study (1, 21, 379): SCENEFIND_HIGHD_DIR not set");
    return;
  }
  SearchQuery q;
  q.example = {1, 21, 379};
  q.lambda = 10.0;
  q.top_n = 250;
  SearchOptions options;
  options.overrides = highd_overrides();
  const SearchResult r = search(*highd, q, options);
  g_runs.emplace_back(highd, r);

  const ContextSpread spread = spread_report(r);
  const auto& hist = spread.cardinality_histogram;
  const bool hist_ok = hist.size() == 2 && hist.count(3) && hist.at(3) == 233 && hist.count(4) && hist.at(4) == 17;

  std::vector<double> behind;
  for (const ContextPoint& p : r.query_context.points)
    if (p.x < 0) behind.push_back(p.x);
  std::sort(behind.begin(), behind.end());
  const bool followers_ok = behind.size() == 2 && std::abs(behind[0] + 128.7) <= 0.1 && std::abs(behind[1] + 95.0) <= 0.1;

  const double dx = spread.max_abs_deviation[0];
  const double dy = spread.max_abs_deviation[1];
  const bool spread_ok = std::abs(dx - 25.0) <= 0.2 * 25.0 && std::abs(dy - 2.0) <= 0.2 * 2.0;

  std::vector<SceneKey> keys;
  for (const auto& e : r.entries) keys.push_back(e.key);
  std::vector<double> hits;
  for (int pct = 30; pct <= 70; ++pct) {
    const auto traj = extract_responses(*highd, keys, {.horizon = 5.0, .threshold_fraction = pct / 100.0});
    const auto n = std::count_if(traj.begin(), traj.end(),
                                 [](const ResponseTrajectory& t) { return t.maneuver != TacticalLabel::LaneKeep; });
    if (n == 19) hits.push_back(pct / 100.0);
  }

  std::ostringstream detail;
  detail << "highD case study: histogram";
  for (const auto& [n, c] : hist) detail << " " << n << ":" << c;
  detail << " (want 3:233 4:17); followers";
  for (double x : behind) detail << " " << fmt(x, 5);
  detail << " (want -128.7 -95.0); max |dx| " << fmt(dx, 4) << " |dy| " << fmt(dy, 4) << " (want ~25, ~2); ";
  detail << "19 lane changes at " << hits.size() << " thresholds in [0.30, 0.70]";
  report(9, hist_ok && followers_ok && spread_ok && !hits.empty() ? Outcome::Pass : Outcome::Fail, detail.str());
}

// ---------------------------------------------------------------------------

void kde_normal_check() {
  std::mt19937_64 rng(2718);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> values(10'000);
  for (double& v : values) v = nd(rng);
  // symmetric grid with a node at 0
  std::vector<double> grid(1201);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = -6.0 + 0.01 * static_cast<double>(i);
  const BehaviorDistribution d = estimate_density(values, grid);
  const double at_zero = d.density[600];
  const double expected = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  const double rel = std::abs(at_zero - expected) / expected;
  const double area = trapezoid(d.evaluation_grid, d.density);
  report(10, rel <= 0.05 && std::abs(area - 1.0) <= 1e-6 ? Outcome::Pass : Outcome::Fail,
         "KDE of 10000 standard-normal draws: density at 0 = " + fmt(at_zero, 5) + " vs " + fmt(expected, 5) +
             " (" + fmt(100 * rel, 3) + "% off, limit 5%), integral " + fmt(area, 10) + ", bandwidth " +
             fmt(d.bandwidth, 4));
}

template <class F>
void guarded(int id, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    report(id, Outcome::Fail, std::string("threw: ") + e.what());
  }
}

}  // namespace

int main() {
  std::cout << "scenefind acceptance suite\n";
  guarded(1, metric_oracle_equivalence);
  guarded(2, metric_axioms);
  guarded(3, pruned_search_exactness);
  guarded(4, planted_neighbour_recall);
  guarded(6, lambda_behaviour);
  guarded(7, throughput);

  std::vector<Recording> highd;
  const char* highd_dir = std::getenv("SCENEFIND_HIGHD_DIR");
  if (highd_dir != nullptr && *highd_dir != '\0') {
    guarded(8, [&] { highd = load_dataset(highd_dir); });
  }
  const std::vector<Recording>* highd_ptr = highd.empty() ? nullptr : &highd;
  guarded(8, [&] { highd_candidate_count(highd_ptr); });
  guarded(9, [&] { highd_case_study(highd_ptr); });
  guarded(10, kde_normal_check);
  guarded(5, dedup_and_lane_soundness);

  std::stable_sort(g_lines.begin(), g_lines.end(), [](const Line& a, const Line& b) { return a.id < b.id; });
  int failed = 0, passed = 0, skipped = 0;
  for (const Line& l : g_lines) {
    const char* tag = l.outcome == Outcome::Pass ? "PASS" : l.outcome == Outcome::Fail ? "FAIL" : "SKIP";
    std::cout << tag << "  criterion " << std::setw(2) << l.id << "  " << l.detail
              << (l.gating ? "" : "  [non-gating]") << "\n";
    if (l.outcome == Outcome::Pass) ++passed;
    if (l.outcome == Outcome::Skip) ++skipped;
    if (l.outcome == Outcome::Fail && l.gating) ++failed;
  }
  std::cout << passed << " passed, " << failed << " failed (gating), " << skipped << " skipped\n";
  return failed == 0 ? 0 : 1;
}
