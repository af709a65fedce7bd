#include "scenefind/result_io.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "scenefind/error.hpp"

namespace scenefind {

using nlohmann::json;

json query_to_json(const SearchQuery& q) {
  return {{"recording", q.example.recording_id},
          {"ego", q.example.ego_id},
          {"frame", q.example.frame},
          {"lambda", q.lambda},
          {"top_n", q.top_n},
          {"frame_stride", q.frame_stride},
          {"include_ego", q.include_ego},
          {"exclude_query_vehicle", q.exclude_query_vehicle}};
}

SearchQuery query_from_json(const json& j) {
  SearchQuery q;
  q.example = {j.at("recording").get<int>(), j.at("ego").get<VehicleId>(), j.at("frame").get<FrameIndex>()};
  q.lambda = j.at("lambda").get<double>();
  q.top_n = j.at("top_n").get<std::size_t>();
  q.frame_stride = j.at("frame_stride").get<int>();
  q.include_ego = j.at("include_ego").get<bool>();
  q.exclude_query_vehicle = j.at("exclude_query_vehicle").get<bool>();
  return q;
}

json context_points_to_json(const ContextSet& set) {
  json points = json::array();
  for (const ContextPoint& p : set.points) {
    points.push_back({{"vehicle", p.source_vehicle_id},
                      {"slot", p.slot ? std::string(to_string(*p.slot)) : std::string("ego")},
                      {"x", p.x},
                      {"y", p.y},
                      {"vx", p.vx},
                      {"vy", p.vy}});
  }
  return points;
}

namespace {

json stats_to_json(const SearchStats& s) {
  return {{"candidates_enumerated", s.candidates_enumerated},
          {"candidates_after_lane_filter", s.candidates_after_lane_filter},
          {"empty_contexts_skipped", s.empty_contexts_skipped},
          {"distances_computed", s.distances_computed},
          {"distances_pruned", s.distances_pruned}};
}

}  // namespace

json result_to_json(const SearchResult& result) {
  json entries = json::array();
  std::size_t rank = 1;
  for (const SearchEntry& e : result.entries) {
    entries.push_back({{"rank", rank++},
                       {"recording", e.key.recording_id},
                       {"ego", e.key.ego_id},
                       {"frame", e.key.frame},
                       {"distance", e.distance},
                       {"relative_lane", to_string(e.context.relative_lane)},
                       {"context_points", context_points_to_json(e.context)}});
  }
  // Pruning counts depend on the worker schedule, so only schedule-free stats go here.
  json stats = stats_to_json(result.stats);
  stats.erase("distances_pruned");
  return {{"schema", kResultSchema},
          {"version", kResultSchemaVersion},
          {"query", query_to_json(result.query)},
          {"query_context", {{"relative_lane", to_string(result.query_context.relative_lane)},
                             {"points", context_points_to_json(result.query_context)}}},
          {"stats", stats},
          {"entries", entries}};
}

json manifest_to_json(const RunManifest& m) {
  json stats = stats_to_json(m.stats);
  stats["wall_time_s"] = m.stats.wall_time;
  return {{"schema", kManifestSchema},
          {"version", kManifestSchemaVersion},
          {"tool_version", m.tool_version},
          {"query", query_to_json(m.query)},
          {"threads", m.threads},
          {"prune", m.prune},
          {"data_dir", m.data_dir},
          {"lane_override_file", m.lane_override_file},
          {"dataset_digest", m.dataset_digest},
          {"stats", stats},
          {"timestamp", m.timestamp}};
}

std::string utc_timestamp_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ResultFile parse_result_file(const json& j) {
  try {
    if (!j.is_object() || j.value("schema", "") != kResultSchema) {
      throw Error(Errc::SchemaMismatch, std::string("expected schema '") + kResultSchema + "'");
    }
    if (j.at("version").get<int>() != kResultSchemaVersion) {
      throw Error(Errc::SchemaMismatch, "unsupported result version " + j.at("version").dump());
    }
    ResultFile out;
    out.query = query_from_json(j.at("query"));
    const json& entries = j.at("entries");
    if (!entries.is_array() || entries.empty()) throw Error(Errc::SchemaMismatch, "result file has no entries");
    for (const json& e : entries) {
      out.keys.push_back({e.at("recording").get<int>(), e.at("ego").get<VehicleId>(), e.at("frame").get<FrameIndex>()});
      out.distances.push_back(e.at("distance").get<double>());
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(Errc::SchemaMismatch, e.what());
  }
}

ResultFile read_result_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::MissingFile, path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(Errc::SchemaMismatch, path.string() + ": " + e.what());
  }
  return parse_result_file(j);
}

json densities_to_json(const std::vector<BehaviorDistribution>& densities) {
  json out = json::object();
  for (const BehaviorDistribution& d : densities) {
    char t[32];
    std::snprintf(t, sizeof(t), "%g", d.t);
    out[t][std::string(to_string(d.axis))] = {
        {"bandwidth", d.bandwidth}, {"grid", d.evaluation_grid}, {"density", d.density}};
  }
  return out;
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::MissingFile, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace scenefind
