#include "symplectic/implicit_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace symplectic {

namespace {

double inf_norm_diff(const Vector& a, const Vector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double inf_norm(const Vector& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

bool finite(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Tracks successive correction norms for the contraction estimate and the
// divergence test shared by the iteration schemes.
struct History {
  double min_residual = std::numeric_limits<double>::infinity();
  double last = -1.0;
  double previous = -1.0;

  void push(double r) {
    previous = last;
    last = r;
    min_residual = std::min(min_residual, r);
  }
  bool diverging() const { return !std::isfinite(last) || last > 10.0 * min_residual; }
  double ratio() const { return (previous > 0.0 && last >= 0.0) ? last / previous : 0.0; }
};

SolveOutcome finish(SolveStatus status, Vector x, int iterations, const History& hist) {
  return SolveOutcome{status, std::move(x), iterations, hist.last < 0.0 ? 0.0 : hist.last,
                      hist.ratio()};
}

}  // namespace

std::string_view to_string(SolverMethod method) {
  switch (method) {
    case SolverMethod::fixed_point: return "fixed";
    case SolverMethod::aitken: return "aitken";
    case SolverMethod::newton: return "newton";
  }
  return "fixed";
}

SolverMethod parse_solver_method(std::string_view name) {
  if (name == "fixed" || name == "fixed-point") return SolverMethod::fixed_point;
  if (name == "aitken") return SolverMethod::aitken;
  if (name == "newton") return SolverMethod::newton;
  throw Error(ErrorCode::unknown_name,
              "unknown solver '" + std::string(name) + "'; available: fixed aitken newton");
}

void validate(const SolverPolicy& policy) {
  if (!(policy.tol > 0.0)) throw Error(ErrorCode::invalid_argument, "solver tol must be > 0");
  if (policy.max_iter < 1) throw Error(ErrorCode::invalid_argument, "solver max_iter must be >= 1");
  if (!(policy.jacobian_step > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "solver jacobian_step must be > 0");
  }
}

SolveOutcome solve_fixed_point(const VectorMap& map, const Vector& x0, const SolverPolicy& policy) {
  validate(policy);
  History hist;
  Vector x = x0;
  for (int k = 1; k <= policy.max_iter; ++k) {
    Vector next = map(x);
    const double r = finite(next) ? inf_norm_diff(next, x) : std::numeric_limits<double>::infinity();
    hist.push(r);
    if (r <= policy.tol) return finish(SolveStatus::converged, std::move(next), k, hist);
    if (hist.diverging()) return finish(SolveStatus::divergence, std::move(x), k, hist);
    x = std::move(next);
  }
  return finish(SolveStatus::max_iter_exceeded, std::move(x), policy.max_iter, hist);
}

SolveOutcome solve_aitken(const VectorMap& map, const Vector& x0, const SolverPolicy& policy) {
  validate(policy);
  History hist;
  Vector x = x0;
  int evals = 0;

  // Returns true when iteration must stop (converged or diverging).
  auto advance = [&](Vector& from, Vector& to) {
    to = map(from);
    ++evals;
    const double r = finite(to) ? inf_norm_diff(to, from) : std::numeric_limits<double>::infinity();
    hist.push(r);
    return r <= policy.tol || hist.diverging();
  };

  while (evals < policy.max_iter) {
    Vector x1, x2;
    if (advance(x, x1)) {
      return hist.last <= policy.tol ? finish(SolveStatus::converged, std::move(x1), evals, hist)
                                     : finish(SolveStatus::divergence, std::move(x), evals, hist);
    }
    if (evals >= policy.max_iter) {
      x = std::move(x1);
      break;
    }
    if (advance(x1, x2)) {
      return hist.last <= policy.tol ? finish(SolveStatus::converged, std::move(x2), evals, hist)
                                     : finish(SolveStatus::divergence, std::move(x1), evals, hist);
    }
    Vector accel = x2;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d1 = x1[i] - x[i];
      const double denom = x2[i] - 2.0 * x1[i] + x[i];
      if (denom != 0.0 && std::isfinite(denom)) {
        const double candidate = x[i] - d1 * d1 / denom;
        if (std::isfinite(candidate)) accel[i] = candidate;
      }
    }
    x = std::move(accel);
  }
  return finish(SolveStatus::max_iter_exceeded, std::move(x), evals, hist);
}

SolveOutcome solve_newton(const VectorMap& residual, const Vector& x0, const SolverPolicy& policy) {
  validate(policy);
  const std::size_t n = x0.size();
  Vector x = x0;
  Vector r = residual(x);
  double rnorm = inf_norm(r);
  History steps;
  if (rnorm <= policy.tol) return SolveOutcome{SolveStatus::converged, x, 0, rnorm, 0.0};

  double min_rnorm = rnorm;
  for (int k = 1; k <= policy.max_iter; ++k) {
    Eigen::MatrixXd jac(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      const double xj = x[j];
      const double dx = policy.jacobian_step * std::max(1.0, std::abs(xj));
      x[j] = xj + dx;
      const Vector rp = residual(x);
      x[j] = xj - dx;
      const Vector rm = residual(x);
      x[j] = xj;
      for (std::size_t i = 0; i < n; ++i) jac(i, j) = (rp[i] - rm[i]) / (2.0 * dx);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    if (!jac.allFinite() || !lu.isInvertible()) {
      return SolveOutcome{SolveStatus::singular_jacobian, x, k, rnorm, steps.ratio()};
    }
    const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd delta = lu.solve(rhs);
    for (std::size_t i = 0; i < n; ++i) x[i] -= delta[static_cast<Eigen::Index>(i)];
    steps.push(delta.cwiseAbs().maxCoeff());

    r = residual(x);
    rnorm = finite(r) ? inf_norm(r) : std::numeric_limits<double>::infinity();
    if (rnorm <= policy.tol) return SolveOutcome{SolveStatus::converged, x, k, rnorm, steps.ratio()};
    if (!std::isfinite(rnorm) || rnorm > 10.0 * min_rnorm) {
      return SolveOutcome{SolveStatus::divergence, x, k, rnorm, steps.ratio()};
    }
    min_rnorm = std::min(min_rnorm, rnorm);
  }
  return SolveOutcome{SolveStatus::max_iter_exceeded, x, policy.max_iter, rnorm, steps.ratio()};
}

SolveOutcome solve(const VectorMap& map, const Vector& x0, const SolverPolicy& policy) {
  switch (policy.method) {
    case SolverMethod::fixed_point: return solve_fixed_point(map, x0, policy);
    case SolverMethod::aitken: return solve_aitken(map, x0, policy);
    case SolverMethod::newton: {
      auto residual = [&map](const Vector& x) {
        Vector r = map(x);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = x[i] - r[i];
        return r;
      };
      return solve_newton(residual, x0, policy);
    }
  }
  return solve_fixed_point(map, x0, policy);
}

double contraction_bound(const SystemDef& sys, const PhaseState& s, double h, double alpha) {
  if (h == 0.0) return 0.0;
  if (is_separable(sys.kind)) return 0.0;
  const double t = s.t + alpha * h;
  if (sys.dim == 1 && sys.flow_jet) {
    return std::abs(h) * std::abs(sys.flow_jet(s.q[0], s.p[0], t).f.dx);
  }
  // Row-sum norm of the central-difference Jacobian of dH/dp w.r.t. q.
  const std::size_t n = sys.dim;
  Vector row_sums(n, 0.0);
  Vector q = s.q;
  for (std::size_t j = 0; j < n; ++j) {
    const double qj = q[j];
    const double dq = kCbrtEpsilon * std::max(1.0, std::abs(qj));
    q[j] = qj + dq;
    const Vector up = eval_dH_dp(sys, q, s.p, t);
    q[j] = qj - dq;
    const Vector down = eval_dH_dp(sys, q, s.p, t);
    q[j] = qj;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = (up[i] - down[i]) / (2.0 * dq);
      if (!std::isfinite(d)) throw Error(ErrorCode::non_finite, "non-finite derivative of dH/dp");
      row_sums[i] += std::abs(d);
    }
  }
  return std::abs(h) * *std::max_element(row_sums.begin(), row_sums.end());
}

}  // namespace symplectic
