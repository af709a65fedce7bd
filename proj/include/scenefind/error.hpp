#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scenefind {

enum class Errc {
  MissingFile,
  MalformedRow,
  InconsistentMeta,
  InvalidConfig,
  UnknownScene,
  UnclassifiableLane,
  EmptyContext,
  EmptySet,
  LambdaMismatch,
  NoCandidates,
  DegenerateSample,
  InvalidArgument,
  SchemaMismatch,
};

std::string_view to_string(Errc code);

/// All library failures are reported as scenefind::Error carrying a stable code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace scenefind
