#include "chainkit/error.hpp"

namespace chainkit {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DuplicatePoint: return "DuplicatePoint";
    case ErrorKind::NotAMetric: return "NotAMetric";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::EmptyGrid: return "EmptyGrid";
    case ErrorKind::DegenerateSpace: return "DegenerateSpace";
    case ErrorKind::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorKind::BadParameters: return "BadParameters";
    case ErrorKind::MissingValue: return "MissingValue";
    case ErrorKind::InvalidDelta: return "InvalidDelta";
    case ErrorKind::EmptyRange: return "EmptyRange";
    case ErrorKind::InvalidLevels: return "InvalidLevels";
    case ErrorKind::NonconvergentLog: return "NonconvergentLog";
    case ErrorKind::FactorizationFailure: return "FactorizationFailure";
    case ErrorKind::ParamViolation: return "ParamViolation";
    case ErrorKind::WrongOrder: return "WrongOrder";
    case ErrorKind::InputError: return "InputError";
  }
  return "Unknown";
}

bool is_numeric(ErrorKind kind) noexcept {
  return kind == ErrorKind::NonconvergentLog || kind == ErrorKind::FactorizationFailure;
}

Error::Error(ErrorKind kind, std::string module, const std::string& message)
    : std::runtime_error("[" + module + "] " + std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      module_(std::move(module)) {}

}  // namespace chainkit
