// scenefind command-line tool.
//
// Exit codes: 0 success, 1 usage or unexpected failure, 2 malformed data or invalid
// synthetic configuration, 3 empty query context, 4 no candidate scenes, 5 result
// file schema mismatch.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "scenefind/context.hpp"
#include "scenefind/dataset.hpp"
#include "scenefind/error.hpp"
#include "scenefind/response.hpp"
#include "scenefind/result_io.hpp"
#include "scenefind/search.hpp"
#include "scenefind/synthetic.hpp"

namespace fs = std::filesystem;
using namespace scenefind;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitBadData = 2;
constexpr int kExitEmptyContext = 3;
constexpr int kExitNoCandidates = 4;
constexpr int kExitSchema = 5;

constexpr const char* kDataDirEnv = "SCENEFIND_DATA_DIR";

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::MissingFile:
    case Errc::MalformedRow:
    case Errc::InconsistentMeta:
    case Errc::InvalidConfig:
    case Errc::UnclassifiableLane:
      return kExitBadData;
    case Errc::EmptyContext: return kExitEmptyContext;
    case Errc::NoCandidates: return kExitNoCandidates;
    case Errc::SchemaMismatch: return kExitSchema;
    default: return kExitFailure;
  }
}

std::string default_data_dir() {
  const char* env = std::getenv(kDataDirEnv);
  return env != nullptr ? env : "";
}

fs::path require_data_dir(const std::string& flag) {
  if (flag.empty()) {
    throw Error(Errc::MissingFile, std::string("no data directory; pass --data-dir or set ") + kDataDirEnv);
  }
  return flag;
}

LaneOverrides overrides_from(const std::string& path) {
  return path.empty() ? LaneOverrides{} : LaneOverrides::load(path);
}

// ---------------------------------------------------------------------------

struct ValidateArgs {
  std::string data_dir = default_data_dir();
  std::string lane_override;
};

int run_validate(const ValidateArgs& args) {
  const fs::path dir = require_data_dir(args.data_dir);
  const LaneOverrides overrides = overrides_from(args.lane_override);
  const std::vector<int> ids = discover_recordings(dir);
  if (ids.empty()) {
    std::cerr << "no recordings found in " << dir << '\n';
    return kExitBadData;
  }
  std::size_t ok = 0;
  for (int id : ids) {
    std::cout << "recording " << recording_prefix(id) << ": ";
    try {
      const Recording rec = load_recording(dir, id);
      std::size_t unclassifiable = 0;
      for (const VehicleState& s : rec.states()) {
        try {
          classify_lane(rec.meta(), rec.track(s.vehicle_id).driving_direction, s.lane_id, overrides);
        } catch (const Error&) {
          ++unclassifiable;
        }
      }
      if (unclassifiable > 0) {
        std::cout << "FAIL " << unclassifiable << " rows with an unclassifiable lane id\n";
        continue;
      }
      std::cout << "OK (" << rec.tracks().size() << " tracks, " << rec.states().size() << " rows)\n";
      ++ok;
    } catch (const Error& e) {
      std::cout << "FAIL " << e.what() << '\n';
    }
  }
  std::cout << ok << '/' << ids.size() << " OK\n";
  return ok == ids.size() ? kExitOk : kExitBadData;
}

// ---------------------------------------------------------------------------

struct ContextArgs {
  std::string data_dir = default_data_dir();
  int recording = 1;
  int ego = 0;
  int frame = 0;
  double lambda = kDefaultLambda;
  bool include_ego = false;
  std::string lane_override;
};

int run_context(const ContextArgs& args) {
  const Recording rec = load_recording(require_data_dir(args.data_dir), args.recording);
  const ContextSet set = extract_context_set(rec, {args.recording, args.ego, args.frame}, args.lambda,
                                             args.include_ego, overrides_from(args.lane_override));
  nlohmann::json out = {{"recording", args.recording}, {"ego", args.ego},           {"frame", args.frame},
                        {"lambda", set.lambda},        {"relative_lane", to_string(set.relative_lane)},
                        {"points", context_points_to_json(set)}};
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SearchArgs {
  std::string data_dir = default_data_dir();
  int recording = 1;
  int ego = 0;
  int frame = 0;
  double lambda = kDefaultLambda;
  std::size_t top = 250;
  int stride = 1;
  std::string lane_override;
  bool include_ego = false;
  bool exclude_query_vehicle = false;
  unsigned threads = 0;
  bool no_prune = false;
  std::string out = "search_result.json";
};

int run_search(const SearchArgs& args) {
  const fs::path dir = require_data_dir(args.data_dir);
  SearchQuery query;
  query.example = {args.recording, args.ego, args.frame};
  query.lambda = args.lambda;
  query.top_n = args.top;
  query.frame_stride = args.stride;
  query.include_ego = args.include_ego;
  query.exclude_query_vehicle = args.exclude_query_vehicle;

  SearchOptions options;
  options.threads = args.threads;
  options.prune = !args.no_prune;
  options.overrides = overrides_from(args.lane_override);

  std::cerr << "loading " << dir << '\n';
  const std::vector<Recording> dataset = load_dataset(dir, args.threads);
  std::cerr << "loaded " << dataset.size() << " recordings; searching\n";
  const SearchResult result = search(dataset, query, options);

  const fs::path out = args.out;
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_json(result_to_json(result), out);

  RunManifest manifest;
  manifest.query = query;
  manifest.threads = args.threads;
  manifest.prune = options.prune;
  manifest.data_dir = fs::absolute(dir).string();
  manifest.lane_override_file = args.lane_override;
  manifest.dataset_digest = dataset_digest(dir);
  manifest.stats = result.stats;
  manifest.timestamp = utc_timestamp_now();
  fs::path manifest_path = out;
  manifest_path.replace_extension(".manifest.json");
  write_json(manifest_to_json(manifest), manifest_path);

  std::cerr << result.stats.candidates_after_lane_filter << " candidates in lane "
            << to_string(result.query_context.relative_lane) << ", " << result.stats.distances_computed
            << " distances (" << result.stats.distances_pruned << " pruned) in " << std::fixed
            << std::setprecision(2) << result.stats.wall_time << " s\n";

  std::cout << std::left << std::setw(6) << "rank" << std::setw(11) << "recording" << std::setw(8) << "ego"
            << std::setw(8) << "frame" << std::setw(8) << "points" << "distance\n";
  for (std::size_t i = 0; i < std::min<std::size_t>(10, result.entries.size()); ++i) {
    const SearchEntry& e = result.entries[i];
    std::cout << std::setw(6) << i + 1 << std::setw(11) << e.key.recording_id << std::setw(8) << e.key.ego_id
              << std::setw(8) << e.key.frame << std::setw(8) << e.context.points.size() << std::setprecision(4)
              << e.distance << '\n';
  }
  std::cerr << "wrote " << out << " and " << manifest_path << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ResponsesArgs {
  std::string results;
  std::string data_dir = default_data_dir();
  double horizon = 5.0;
  std::vector<double> snapshots{1.0, 2.0, 3.0};
  double threshold = 0.5;
  std::size_t grid_points = 256;
  std::string out = "responses";
};

int run_responses(const ResponsesArgs& args) {
  const ResultFile file = read_result_file(args.results);
  const fs::path dir = require_data_dir(args.data_dir);
  std::vector<Recording> dataset;
  std::set<int> needed;
  for (const SceneKey& k : file.keys) needed.insert(k.recording_id);
  for (int id : needed) dataset.push_back(load_recording(dir, id));

  ResponseOptions options;
  options.horizon = args.horizon;
  options.threshold_fraction = args.threshold;
  const auto trajectories = extract_responses(dataset, file.keys, options);
  const auto densities = snapshot_densities(trajectories, args.snapshots, args.grid_points);

  const fs::path out = args.out;
  fs::create_directories(out);
  {
    std::ofstream csv(out / "responses.csv", std::ios::binary);
    write_responses_csv(csv, trajectories);
  }
  write_json(densities_to_json(densities), out / "densities.json");

  std::map<std::string, std::size_t> maneuvers;
  std::size_t truncated = 0;
  nlohmann::json per_scene = nlohmann::json::array();
  for (const ResponseTrajectory& t : trajectories) {
    ++maneuvers[std::string(to_string(t.maneuver))];
    truncated += t.truncated() ? 1 : 0;
    nlohmann::json row = {{"recording", t.key.recording_id}, {"ego", t.key.ego_id},
                          {"frame0", t.key.frame},           {"label", to_string(t.label)},
                          {"maneuver", to_string(t.maneuver)}, {"lane_width", t.lane_width}};
    row["crossing_time"] = t.crossing_time ? nlohmann::json(*t.crossing_time) : nlohmann::json(nullptr);
    per_scene.push_back(row);
  }
  const std::size_t lane_changes = maneuvers["LaneChangeLeft"] + maneuvers["LaneChangeRight"];
  nlohmann::json summary = {{"horizon", args.horizon},
                            {"threshold_fraction", args.threshold},
                            {"trajectories", trajectories.size()},
                            {"truncated", truncated},
                            {"lane_changes", lane_changes},
                            {"maneuver_counts", maneuvers},
                            {"scenes", per_scene}};
  write_json(summary, out / "summary.json");

  std::cout << "trajectories: " << trajectories.size() << " (" << truncated << " truncated)\n";
  for (const auto& [label, count] : maneuvers) std::cout << label << ": " << count << '\n';
  std::cout << "LaneChange: " << lane_changes << '\n';
  std::cerr << "wrote " << out / "responses.csv" << ", " << out / "densities.json" << ", " << out / "summary.json"
            << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  SynthConfig config;
  int recordings = 1;
  std::uint64_t seed = 42;
  std::string out = "synthetic";
};

int run_synth(const SynthArgs& args) {
  if (args.recordings < 1) throw Error(Errc::InvalidConfig, "--recordings must be >= 1");
  const fs::path out = args.out;
  for (int r = 1; r <= args.recordings; ++r) {
    SynthConfig config = args.config;
    config.recording_id = r;
    const std::uint64_t seed = args.seed + 1000003ULL * static_cast<std::uint64_t>(r - 1);
    const Recording rec = generate_synthetic(config, seed);
    write_recording(rec, out);
    std::cerr << "recording " << recording_prefix(r) << ": " << rec.tracks().size() << " tracks, "
              << rec.states().size() << " rows\n";
  }
  std::cout << dataset_digest(out) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Find traffic scenes with a similar surrounding-traffic context in highD-format data"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  ValidateArgs validate;
  auto* cmd_validate = app.add_subcommand("validate", "Load and check every recording in a directory");
  cmd_validate->add_option("--data-dir", validate.data_dir, "highD-format directory (default $SCENEFIND_DATA_DIR)");
  cmd_validate->add_option("--lane-override", validate.lane_override, "Relative-lane override table");

  ContextArgs context;
  auto* cmd_context = app.add_subcommand("context", "Print the context set of one scene as JSON");
  cmd_context->add_option("--data-dir", context.data_dir, "highD-format directory (default $SCENEFIND_DATA_DIR)");
  cmd_context->add_option("--recording", context.recording, "Recording id")->required();
  cmd_context->add_option("--ego", context.ego, "Ego vehicle id")->required();
  cmd_context->add_option("--frame", context.frame, "Frame number")->required();
  cmd_context->add_option("--lambda", context.lambda, "Lateral scaling")->capture_default_str();
  cmd_context->add_flag("--include-ego", context.include_ego, "Add the ego vehicle as a point at the origin");
  cmd_context->add_option("--lane-override", context.lane_override, "Relative-lane override table");

  SearchArgs search_args;
  auto* cmd_search = app.add_subcommand("search", "Rank all scenes by Hausdorff distance to an example scene");
  cmd_search->add_option("--data-dir", search_args.data_dir, "highD-format directory (default $SCENEFIND_DATA_DIR)");
  cmd_search->add_option("--recording", search_args.recording, "Example recording id")->required();
  cmd_search->add_option("--ego", search_args.ego, "Example ego vehicle id")->required();
  cmd_search->add_option("--frame", search_args.frame, "Example frame number")->required();
  cmd_search->add_option("--lambda", search_args.lambda, "Lateral scaling")->capture_default_str();
  cmd_search->add_option("--top", search_args.top, "Number of scenes to keep")->capture_default_str();
  cmd_search->add_option("--stride", search_args.stride, "Frame down-sampling stride")->capture_default_str();
  cmd_search->add_option("--lane-override", search_args.lane_override, "Relative-lane override table");
  cmd_search->add_flag("--include-ego", search_args.include_ego, "Add the ego vehicle as a context point");
  cmd_search->add_flag("--exclude-query-vehicle", search_args.exclude_query_vehicle,
                       "Drop the example's own vehicle from the results");
  cmd_search->add_option("--threads", search_args.threads, "Worker threads (0 = all cores)")->capture_default_str();
  cmd_search->add_flag("--no-prune", search_args.no_prune, "Compute every distance in full");
  cmd_search->add_option("--out", search_args.out, "Result JSON path")->capture_default_str();

  ResponsesArgs responses;
  auto* cmd_responses = app.add_subcommand("responses", "Extract ego trajectories following retrieved scenes");
  cmd_responses->add_option("--results", responses.results, "Search result JSON")->required();
  cmd_responses->add_option("--data-dir", responses.data_dir, "highD-format directory (default $SCENEFIND_DATA_DIR)");
  cmd_responses->add_option("--horizon", responses.horizon, "Seconds after the scene frame")->capture_default_str();
  cmd_responses->add_option("--snapshots", responses.snapshots, "Density snapshot times (s)")
      ->delimiter(',')
      ->capture_default_str();
  cmd_responses->add_option("--threshold", responses.threshold, "Lane-change threshold as a fraction of lane width")
      ->capture_default_str();
  cmd_responses->add_option("--grid-points", responses.grid_points, "Density grid size")->capture_default_str();
  cmd_responses->add_option("--out", responses.out, "Output directory")->capture_default_str();

  SynthArgs synth;
  auto* cmd_synth = app.add_subcommand("synth", "Write a deterministic synthetic dataset in highD format");
  cmd_synth->add_option("--lanes", synth.config.lanes_per_carriageway, "Lanes per carriageway (2-4)")
      ->capture_default_str();
  cmd_synth->add_option("--vehicles", synth.config.vehicles, "Vehicles per recording")->capture_default_str();
  cmd_synth->add_option("--duration", synth.config.duration, "Seconds per recording")->capture_default_str();
  cmd_synth->add_option("--recordings", synth.recordings, "Number of recordings")->capture_default_str();
  cmd_synth->add_option("--frame-rate", synth.config.frame_rate, "Hz")->capture_default_str();
  cmd_synth->add_option("--min-speed", synth.config.min_speed, "m/s")->capture_default_str();
  cmd_synth->add_option("--max-speed", synth.config.max_speed, "m/s")->capture_default_str();
  cmd_synth->add_option("--lane-change-prob", synth.config.lane_change_probability, "Per vehicle")
      ->capture_default_str();
  cmd_synth->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  cmd_synth->add_option("--out", synth.out, "Output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_validate) return run_validate(validate);
    if (*cmd_context) return run_context(context);
    if (*cmd_search) return run_search(search_args);
    if (*cmd_responses) return run_responses(responses);
    if (*cmd_synth) return run_synth(synth);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
