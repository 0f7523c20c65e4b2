#include "nfs/error.hpp"

namespace nfs {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidGrid: return "InvalidGrid";
    case ErrorKind::InvalidField: return "InvalidField";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::NonHermitianInput: return "NonHermitianInput";
    case ErrorKind::BadFieldFile: return "BadFieldFile";
    case ErrorKind::BadDimension: return "BadDimension";
    case ErrorKind::NonPositiveInput: return "NonPositiveInput";
    case ErrorKind::ContractionViolated: return "ContractionViolated";
    case ErrorKind::NonconformingG: return "NonconformingG";
    case ErrorKind::IntervalExceeded: return "IntervalExceeded";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::TrivialSource: return "TrivialSource";
    case ErrorKind::NonDecayingSource: return "NonDecayingSource";
    case ErrorKind::OutsideBall: return "OutsideBall";
    case ErrorKind::Diverged: return "Diverged";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::ConfigSyntax: return "ConfigSyntax";
    case ErrorKind::ConfigUnknownKey: return "ConfigUnknownKey";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::MassLeakage: return "MassLeakage";
    case ErrorKind::TrivialField: return "TrivialField";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigSyntax:
    case ErrorKind::ConfigUnknownKey:
    case ErrorKind::ConfigInvalid:
    case ErrorKind::InvalidGrid:
    case ErrorKind::BadDimension:
    case ErrorKind::NonPositiveInput:
    case ErrorKind::InvalidArgument:
    case ErrorKind::BadFieldFile:
    case ErrorKind::GridMismatch:
      return 2;
    case ErrorKind::NonconformingG:
    case ErrorKind::IntervalExceeded:
    case ErrorKind::TrivialSource:
    case ErrorKind::NonDecayingSource:
    case ErrorKind::OutsideBall:
    case ErrorKind::ContractionViolated:
    case ErrorKind::MassLeakage:
    case ErrorKind::TrivialField:
      return 3;
    case ErrorKind::Diverged:
    case ErrorKind::NotConverged:
      return 4;
    default:
      return 1;
  }
}

}  // namespace nfs
