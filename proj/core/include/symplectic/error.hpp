#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace symplectic {

enum class ErrorCode {
  dimension_mismatch,
  non_finite,
  wrong_system_kind,
  invalid_argument,
  unknown_name,
  solver_failure,
  unavailable,
  unresolved,
  degenerate_polygon,
  non_convergent_extrapolation,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class SolveStatus { converged, max_iter_exceeded, divergence, singular_jacobian };

std::string_view to_string(SolveStatus status);

/// Raised when an implicit sub-step cannot be solved. Carries the stage
/// that failed, the iteration count and the last residual, and (once
/// propagated through the driver) the step index.
class SolverError : public Error {
 public:
  SolverError(std::string stage, SolveStatus status, int iterations, double residual,
              std::optional<std::size_t> step_index = std::nullopt);

  const std::string& stage() const noexcept { return stage_; }
  SolveStatus status() const noexcept { return status_; }
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }
  std::optional<std::size_t> step_index() const noexcept { return step_index_; }

  SolverError at_step(std::size_t index) const {
    return SolverError(stage_, status_, iterations_, residual_, index);
  }

 private:
  std::string stage_;
  SolveStatus status_;
  int iterations_;
  double residual_;
  std::optional<std::size_t> step_index_;
};

}  // namespace symplectic
