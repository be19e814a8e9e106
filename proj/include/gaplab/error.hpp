#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gaplab {

enum class ErrorKind {
  InvalidSize,
  InvalidDimension,
  InvalidArgument,
  DomainError,
  TooLarge,
  NumericError,
  ShapeError,
  NotNegativeSemidefinite,
  OrderError,
  ReversibilityViolation,
  InvalidPath,
  InconsistentInput,
  HypothesisFailed,
  InvalidRate,
  NoFit,
  DegenerateObservable,
  SimulationAbort,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gaplab
