#include "gaplab/error.hpp"

namespace gaplab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidSize: return "invalid-size";
    case ErrorKind::InvalidDimension: return "invalid-dimension";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::DomainError: return "domain-error";
    case ErrorKind::TooLarge: return "too-large";
    case ErrorKind::NumericError: return "numeric-error";
    case ErrorKind::ShapeError: return "shape-error";
    case ErrorKind::NotNegativeSemidefinite: return "not-negative-semidefinite";
    case ErrorKind::OrderError: return "order-error";
    case ErrorKind::ReversibilityViolation: return "reversibility-violation";
    case ErrorKind::InvalidPath: return "invalid-path";
    case ErrorKind::InconsistentInput: return "inconsistent-input";
    case ErrorKind::HypothesisFailed: return "hypothesis-failed";
    case ErrorKind::InvalidRate: return "invalid-rate";
    case ErrorKind::NoFit: return "no-fit";
    case ErrorKind::DegenerateObservable: return "degenerate-observable";
    case ErrorKind::SimulationAbort: return "simulation-abort";
  }
  return "unknown";
}

}  // namespace gaplab
