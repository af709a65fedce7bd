#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scenefind/response.hpp"
#include "scenefind/search.hpp"

namespace scenefind {

inline constexpr const char* kToolVersion = "0.3.0";
inline constexpr const char* kResultSchema = "scenefind.search-result";
inline constexpr int kResultSchemaVersion = 1;
inline constexpr const char* kManifestSchema = "scenefind.run-manifest";
inline constexpr int kManifestSchemaVersion = 1;

nlohmann::json query_to_json(const SearchQuery& query);
SearchQuery query_from_json(const nlohmann::json& j);
nlohmann::json context_points_to_json(const ContextSet& set);

/// Deterministic document: query echo, stats (without wall time), ranked entries.
nlohmann::json result_to_json(const SearchResult& result);

struct RunManifest {
  std::string tool_version = kToolVersion;
  SearchQuery query;
  unsigned threads = 0;
  bool prune = true;
  std::string data_dir;
  std::string lane_override_file;
  std::string dataset_digest;
  SearchStats stats;
  std::string timestamp;  // ISO-8601 UTC
};

nlohmann::json manifest_to_json(const RunManifest& manifest);
std::string utc_timestamp_now();

/// What the responses command needs from a result file.
struct ResultFile {
  SearchQuery query;
  std::vector<SceneKey> keys;
  std::vector<double> distances;
};

/// Throws Errc::SchemaMismatch on unreadable JSON, wrong schema/version, missing
/// fields or an empty entry list.
ResultFile parse_result_file(const nlohmann::json& j);
ResultFile read_result_file(const std::filesystem::path& path);

nlohmann::json densities_to_json(const std::vector<BehaviorDistribution>& densities);

/// Compact pretty-printed dump with a trailing newline.
void write_json(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace scenefind
