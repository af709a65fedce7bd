#include "scenefind/error.hpp"

namespace scenefind {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::MissingFile: return "MissingFile";
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::InconsistentMeta: return "InconsistentMeta";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::UnknownScene: return "UnknownScene";
    case Errc::UnclassifiableLane: return "UnclassifiableLane";
    case Errc::EmptyContext: return "EmptyContext";
    case Errc::EmptySet: return "EmptySet";
    case Errc::LambdaMismatch: return "LambdaMismatch";
    case Errc::NoCandidates: return "NoCandidates";
    case Errc::DegenerateSample: return "DegenerateSample";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::SchemaMismatch: return "SchemaMismatch";
  }
  return "Unknown";
}

}  // namespace scenefind
