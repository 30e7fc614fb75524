#include "gaussflow/error.hpp"

namespace gaussflow {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::ResolutionTooLow: return "ResolutionTooLow";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::ConvexityViolation: return "ConvexityViolation";
    case ErrorKind::NonPositiveSupport: return "NonPositiveSupport";
    case ErrorKind::OriginCollision: return "OriginCollision";
    case ErrorKind::DegenerateDirection: return "DegenerateDirection";
    case ErrorKind::NonPositiveDensity: return "NonPositiveDensity";
    case ErrorKind::Unnormalized: return "Unnormalized";
    case ErrorKind::StepFailure: return "StepFailure";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind) {}

}  // namespace gaussflow
