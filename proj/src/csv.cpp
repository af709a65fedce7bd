#include "csv.hpp"

#include <fstream>
#include <sstream>

namespace scenefind::csv {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

void split(std::string_view line, char sep, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(sep, start);
    if (end == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return;
    }
    out.push_back(trim(line.substr(start, end - start)));
    start = end + 1;
  }
}

Reader::Reader(const std::filesystem::path& path) : path_(path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::MissingFile, path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  content_ = buffer.str();

  if (!next()) throw Error(Errc::MalformedRow, path_.string() + ": missing header row");
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    header_.emplace_back(fields_[i]);
    index_.emplace(header_.back(), i);
  }
  fields_.clear();
}

std::size_t Reader::column(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) {
    throw Error(Errc::MalformedRow, path_.string() + ": missing required column '" + std::string(name) + "'");
  }
  return it->second;
}

bool Reader::next() {
  while (pos_ < content_.size()) {
    std::size_t end = content_.find('\n', pos_);
    if (end == std::string::npos) end = content_.size();
    std::string_view line(content_.data() + pos_, end - pos_);
    pos_ = end + 1;
    ++line_number_;
    if (trim(line).empty()) continue;
    split(line, ',', fields_);
    if (!header_.empty() && fields_.size() != header_.size()) {
      throw Error(Errc::MalformedRow, path_.string() + ": row " + std::to_string(line_number_) + " has " +
                                          std::to_string(fields_.size()) + " fields, expected " +
                                          std::to_string(header_.size()));
    }
    return true;
  }
  return false;
}

void Reader::fail(std::size_t col, std::string_view what) const {
  throw Error(Errc::MalformedRow, path_.string() + ": row " + std::to_string(line_number_) + ", column '" +
                                      header_.at(col) + "': " + std::string(what));
}

double Reader::get_double(std::size_t col) const {
  const std::string_view text = fields_[col];
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    fail(col, "expected a finite number, got '" + std::string(text) + "'");
  }
  return value;
}

long long Reader::get_int(std::size_t col) const {
  const std::string_view text = fields_[col];
  long long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    // highD occasionally stores integral values with a trailing ".0"
    const double d = get_double(col);
    if (d != std::floor(d)) fail(col, "expected an integer, got '" + std::string(text) + "'");
    return static_cast<long long>(d);
  }
  return value;
}

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace scenefind::csv
