#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nfs {

enum class ErrorKind {
  // grid-spectral
  InvalidGrid,
  InvalidField,
  GridMismatch,
  NonHermitianInput,
  BadFieldFile,
  // bounds
  BadDimension,
  NonPositiveInput,
  ContractionViolated,
  // nonlinearity
  NonconformingG,
  IntervalExceeded,
  InvalidArgument,
  // linear-poisson
  TrivialSource,
  NonDecayingSource,
  // fixed-point
  OutsideBall,
  Diverged,
  NotConverged,
  // cli-harness
  ConfigSyntax,
  ConfigUnknownKey,
  ConfigInvalid,
  MassLeakage,
  TrivialField,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Process exit code for a failure of the given kind:
/// 2 configuration, 3 assumption violation, 4 non-convergence, 1 otherwise.
int exit_code_for(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nfs
