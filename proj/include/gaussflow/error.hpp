#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gaussflow {

enum class ErrorKind {
  UnsupportedDimension,
  ResolutionTooLow,
  GridMismatch,
  NonFinite,
  ConvexityViolation,
  NonPositiveSupport,
  OriginCollision,
  DegenerateDirection,
  NonPositiveDensity,
  Unnormalized,
  StepFailure,
  Config,
  Io,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Every module reports failures through this exception; `kind()` is the
/// machine-readable reason surfaced by the CLI.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gaussflow
