#include "symplectic/error.hpp"

#include <sstream>

namespace symplectic {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::non_finite: return "non-finite";
    case ErrorCode::wrong_system_kind: return "wrong system kind";
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::unknown_name: return "unknown name";
    case ErrorCode::solver_failure: return "solver failure";
    case ErrorCode::unavailable: return "unavailable";
    case ErrorCode::unresolved: return "unresolved";
    case ErrorCode::degenerate_polygon: return "degenerate polygon";
    case ErrorCode::non_convergent_extrapolation: return "non-convergent extrapolation";
  }
  return "unknown";
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "CONVERGED";
    case SolveStatus::max_iter_exceeded: return "MAX_ITER_EXCEEDED";
    case SolveStatus::divergence: return "DIVERGENCE";
    case SolveStatus::singular_jacobian: return "SINGULAR_JACOBIAN";
  }
  return "UNKNOWN";
}

namespace {

std::string solver_message(const std::string& stage, SolveStatus status, int iterations,
                           double residual, std::optional<std::size_t> step_index) {
  std::ostringstream os;
  os << "implicit stage '" << stage << "' failed: " << to_string(status) << " after "
     << iterations << " iterations, last residual " << residual;
  if (step_index) os << " (step " << *step_index << ")";
  return os.str();
}

}  // namespace

SolverError::SolverError(std::string stage, SolveStatus status, int iterations, double residual,
                         std::optional<std::size_t> step_index)
    : Error(ErrorCode::solver_failure,
            solver_message(stage, status, iterations, residual, step_index)),
      stage_(std::move(stage)),
      status_(status),
      iterations_(iterations),
      residual_(residual),
      step_index_(step_index) {}

}  // namespace symplectic
