#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chainkit {

enum class ErrorKind {
  DuplicatePoint,
  NotAMetric,
  TooFewPoints,
  TooLarge,
  EmptyGrid,
  DegenerateSpace,
  LevelOutOfRange,
  BadParameters,
  MissingValue,
  InvalidDelta,
  EmptyRange,
  InvalidLevels,
  NonconvergentLog,
  FactorizationFailure,
  ParamViolation,
  WrongOrder,
  InputError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Numeric failures surface as exit code 3 in the CLI, everything else as 2.
bool is_numeric(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

}  // namespace chainkit
