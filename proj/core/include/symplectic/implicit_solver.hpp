#pragma once

#include <functional>
#include <string_view>

#include "symplectic/error.hpp"
#include "symplectic/phase_space.hpp"

namespace symplectic {

enum class SolverMethod { fixed_point, aitken, newton };

std::string_view to_string(SolverMethod method);
/// Accepts "fixed", "aitken" and "newton".
SolverMethod parse_solver_method(std::string_view name);

struct SolverPolicy {
  SolverMethod method = SolverMethod::fixed_point;
  double tol = 1e-12;  // absolute, infinity norm
  int max_iter = 50;
  double jacobian_step = kCbrtEpsilon;  // Newton only
};

void validate(const SolverPolicy& policy);

struct SolveOutcome {
  SolveStatus status = SolveStatus::converged;
  Vector solution;
  int iterations = 0;
  double final_residual = 0.0;
  /// Ratio of the last two correction norms (0 when fewer than two).
  double contraction_estimate = 0.0;

  bool converged() const noexcept { return status == SolveStatus::converged; }
};

using VectorMap = std::function<Vector(const Vector&)>;

/// Simple iteration x <- map(x). Residual is |map(x) - x|_inf. Stops with
/// DIVERGENCE once the residual exceeds 10x its running minimum.
SolveOutcome solve_fixed_point(const VectorMap& map, const Vector& x0, const SolverPolicy& policy);

/// Steffensen cycle: two plain iterates then a componentwise Aitken
/// delta-squared extrapolation. A zero denominator skips the extrapolation
/// for that component. `iterations` counts map evaluations.
SolveOutcome solve_aitken(const VectorMap& map, const Vector& x0, const SolverPolicy& policy);

/// Newton's method on residual(x) = 0 with a central-difference Jacobian.
/// No globalization.
SolveOutcome solve_newton(const VectorMap& residual, const Vector& x0, const SolverPolicy& policy);

/// Solves x = map(x) with the method selected in `policy`.
SolveOutcome solve(const VectorMap& map, const Vector& x0, const SolverPolicy& policy);

/// |h| * ||d(dH/dp)/dq||_inf at (q, p, t0 + alpha h): the simple iteration
/// of the first order implicit step contracts when this is below 1.
double contraction_bound(const SystemDef& sys, const PhaseState& s, double h, double alpha);

}  // namespace symplectic
