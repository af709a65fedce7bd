#pragma once

// Minimal reader/writer for the unquoted comma-separated files used by highD.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "scenefind/error.hpp"

namespace scenefind::csv {

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path);

  /// Index of a required column; throws Errc::MalformedRow naming the column.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const { return index_.contains(std::string(name)); }

  /// Advances to the next non-empty row. Rows with the wrong field count throw.
  bool next();

  std::size_t row_number() const { return line_number_; }
  std::string_view field(std::size_t col) const { return fields_[col]; }

  double get_double(std::size_t col) const;
  long long get_int(std::size_t col) const;

  [[noreturn]] void fail(std::size_t col, std::string_view what) const;

 private:
  std::filesystem::path path_;
  std::string content_;
  std::size_t pos_ = 0;
  std::size_t line_number_ = 0;
  std::vector<std::string> header_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string_view> fields_;
};

void split(std::string_view line, char sep, std::vector<std::string_view>& out);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

inline double round_to(double v, double step) { return std::round(v / step) * step; }

}  // namespace scenefind::csv
