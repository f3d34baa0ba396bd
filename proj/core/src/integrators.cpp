#include "symplectic/integrators.hpp"

#include <string>
#include <utility>

#include "symplectic/error.hpp"
#include "symplectic/reference.hpp"

namespace symplectic {

namespace {

void require_dim(const SystemDef& sys, const PhaseState& s) {
  if (s.q.size() != sys.dim || s.p.size() != sys.dim) {
    throw Error(ErrorCode::dimension_mismatch,
                "state dimension " + std::to_string(s.q.size()) + " does not match system '" +
                    sys.name + "' (" + std::to_string(sys.dim) + ")");
  }
}

void require_scalar(const SystemDef& sys, const PhaseState& s, std::string_view scheme) {
  if (!is_separable(sys.kind) || sys.dim != 1) {
    throw Error(ErrorCode::wrong_system_kind, std::string(scheme) + " needs an x'' = f(x, t) system; '" +
                                                  sys.name + "' is not one");
  }
  require_dim(sys, s);
}

double force(const SystemDef& sys, double x, double t) { return eval_force(sys, {x}, t)[0]; }

// Solves q = q0 + c dH/dp(q, p, tau). Explicit when dH/dp does not depend on q.
Vector position_stage(const SystemDef& sys, const Vector& q0, const Vector& p, double tau, double c,
                      const SolverPolicy& policy, const char* stage) {
  auto map = [&](const Vector& q) {
    Vector v = eval_dH_dp(sys, q, p, tau);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = q0[i] + c * v[i];
    return v;
  };
  Vector predictor = map(q0);
  if (is_separable(sys.kind)) return predictor;
  SolveOutcome out = solve(map, predictor, policy);
  if (!out.converged()) throw SolverError(stage, out.status, out.iterations, out.final_residual);
  return std::move(out.solution);
}

// Solves P = p0 - c dH/dq(q, P, tau). Explicit when dH/dq does not depend on p.
Vector momentum_stage(const SystemDef& sys, const Vector& q, const Vector& p0, double tau, double c,
                      const SolverPolicy& policy, const char* stage) {
  auto map = [&](const Vector& p) {
    Vector g = eval_dH_dq(sys, q, p, tau);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = p0[i] - c * g[i];
    return g;
  };
  Vector predictor = map(p0);
  if (is_separable(sys.kind)) return predictor;
  SolveOutcome out = solve(map, predictor, policy);
  if (!out.converged()) throw SolverError(stage, out.status, out.iterations, out.final_residual);
  return std::move(out.solution);
}

// q + c dH/dp(q_eval, p, tau)
Vector drift(const SystemDef& sys, const Vector& q, const Vector& q_eval, const Vector& p, double tau,
             double c) {
  Vector v = eval_dH_dp(sys, q_eval, p, tau);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = q[i] + c * v[i];
  return v;
}

// p - c dH/dq(q, p_eval, tau)
Vector kick(const SystemDef& sys, const Vector& q, const Vector& p, const Vector& p_eval, double tau,
            double c) {
  Vector g = eval_dH_dq(sys, q, p_eval, tau);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = p[i] - c * g[i];
  return g;
}

}  // namespace

PhaseState step_euler_a(const SystemDef& sys, const PhaseState& s, double h, double alpha) {
  require_scalar(sys, s, "euler-a-3.1");
  const double x1 = s.q[0] + h * s.p[0];
  const double v1 = s.p[0] + h * force(sys, x1, s.t + alpha * h);
  return PhaseState{{x1}, {v1}, s.t + h};
}

PhaseState step_euler_b(const SystemDef& sys, const PhaseState& s, double h, double alpha) {
  require_scalar(sys, s, "euler-b-3.3");
  const double v1 = s.p[0] + h * force(sys, s.q[0], s.t + alpha * h);
  const double x1 = s.q[0] + h * v1;
  return PhaseState{{x1}, {v1}, s.t + h};
}

PhaseState step_second_41(const SystemDef& sys, const PhaseState& s, double h, double alpha) {
  require_scalar(sys, s, "second-4.1");
  const double v1 = s.p[0] + 0.5 * h * force(sys, s.q[0], s.t + alpha * h);
  const double x2 = s.q[0] + h * v1;
  const double v2 = v1 + 0.5 * h * force(sys, x2, s.t + (1.0 - alpha) * h);
  return PhaseState{{x2}, {v2}, s.t + h};
}

PhaseState step_second_43(const SystemDef& sys, const PhaseState& s, double h) {
  require_scalar(sys, s, "second-4.3");
  const double x1 = s.q[0] + 0.5 * h * s.p[0];
  const double v2 = s.p[0] + h * force(sys, x1, s.t + 0.5 * h);
  const double x2 = x1 + 0.5 * h * v2;
  return PhaseState{{x2}, {v2}, s.t + h};
}

PhaseState step_implicit1_51(const SystemDef& sys, const PhaseState& s, double h, double alpha,
                             const SolverPolicy& solver, bool swap_xy) {
  require_dim(sys, s);
  const double tau = s.t + alpha * h;
  if (!swap_xy) {
    Vector q1 = position_stage(sys, s.q, s.p, tau, h, solver, "implicit q");
    Vector p1 = kick(sys, q1, s.p, s.p, tau, h);
    return PhaseState{std::move(q1), std::move(p1), s.t + h};
  }
  Vector p1 = momentum_stage(sys, s.q, s.p, tau, h, solver, "implicit p (swapped)");
  Vector q1 = drift(sys, s.q, s.q, p1, tau, h);
  return PhaseState{std::move(q1), std::move(p1), s.t + h};
}

PhaseState step_implicit2_61(const SystemDef& sys, const PhaseState& s, double h, double alpha,
                             const SolverPolicy& solver, bool swap_xy) {
  require_dim(sys, s);
  const double tau1 = s.t + alpha * h;
  const double tau2 = s.t + (1.0 - alpha) * h;
  const double half = 0.5 * h;
  if (!swap_xy) {
    Vector q1 = position_stage(sys, s.q, s.p, tau1, half, solver, "first half step, implicit q");
    Vector p1 = kick(sys, q1, s.p, s.p, tau1, half);
    Vector p2 = momentum_stage(sys, q1, p1, tau2, half, solver, "second half step, implicit p");
    Vector q2 = drift(sys, q1, q1, p2, tau2, half);
    return PhaseState{std::move(q2), std::move(p2), s.t + h};
  }
  Vector p1 = momentum_stage(sys, s.q, s.p, tau1, half, solver, "first half step, implicit p");
  Vector q1 = drift(sys, s.q, s.q, p1, tau1, half);
  Vector q2 = position_stage(sys, q1, p1, tau2, half, solver, "second half step, implicit q");
  Vector p2 = kick(sys, q2, p1, p1, tau2, half);
  return PhaseState{std::move(q2), std::move(p2), s.t + h};
}

PhaseState step_ndof1_73(const SystemDef& sys, const PhaseState& s, double h, double alpha,
                         const SolverPolicy& solver) {
  return step_implicit1_51(sys, s, h, alpha, solver, false);
}

PhaseState step_ndof2_74(const SystemDef& sys, const PhaseState& s, double h, double alpha,
                         const SolverPolicy& solver) {
  return step_implicit2_61(sys, s, h, alpha, solver, false);
}

PhaseState step_leapfrog_75(const SystemDef& sys, const PhaseState& s, double h) {
  if (!is_separable(sys.kind)) {
    throw Error(ErrorCode::wrong_system_kind,
                "leapfrog-7.5 needs H = |p|^2/2 + U(q, t); '" + sys.name + "' is not separable");
  }
  require_dim(sys, s);
  const std::size_t n = s.dim();
  Vector q_mid(n);
  for (std::size_t i = 0; i < n; ++i) q_mid[i] = s.q[i] + 0.5 * h * s.p[i];
  const Vector f = eval_force(sys, q_mid, s.t + 0.5 * h);
  Vector p1(n), q1(n);
  for (std::size_t i = 0; i < n; ++i) {
    p1[i] = s.p[i] + h * f[i];
    q1[i] = q_mid[i] + 0.5 * h * p1[i];
  }
  return PhaseState{std::move(q1), std::move(p1), s.t + h};
}

PhaseState step(const SystemDef& sys, const PhaseState& s, const MethodSpec& method, double h) {
  switch (method.scheme) {
    case Scheme::euler_a_31: return step_euler_a(sys, s, h, method.alpha);
    case Scheme::euler_b_33: return step_euler_b(sys, s, h, method.alpha);
    case Scheme::second_41: return step_second_41(sys, s, h, method.alpha);
    case Scheme::second_43: return step_second_43(sys, s, h);
    case Scheme::implicit1_51:
      return step_implicit1_51(sys, s, h, method.alpha, method.solver, method.swap_xy);
    case Scheme::implicit2_61:
      return step_implicit2_61(sys, s, h, method.alpha, method.solver, method.swap_xy);
    case Scheme::ndof1_73: return step_ndof1_73(sys, s, h, method.alpha, method.solver);
    case Scheme::ndof2_74: return step_ndof2_74(sys, s, h, method.alpha, method.solver);
    case Scheme::leapfrog_75: return step_leapfrog_75(sys, s, h);
    case Scheme::baseline_euler: return step_explicit_euler(sys, s, h);
    case Scheme::baseline_rk4: return step_rk4(sys, s, h);
  }
  throw Error(ErrorCode::invalid_argument, "unknown scheme");
}

Trajectory integrate(const SystemDef& sys, const PhaseState& s0, const MethodSpec& method, double h,
                     std::size_t n_steps) {
  validate(method);
  require_dim(sys, s0);
  if (n_steps > 0 && (!std::isfinite(h) || h == 0.0)) {
    throw Error(ErrorCode::invalid_argument, "step size must be finite and nonzero");
  }
  Trajectory traj;
  traj.method = method;
  traj.h = h;
  traj.numeric_gradient_fallback = !sys.has_analytic_gradients();
  traj.states.reserve(n_steps + 1);
  traj.energies.reserve(n_steps + 1);
  traj.states.push_back(s0);
  traj.energies.push_back(eval_energy(sys, s0));
  for (std::size_t k = 1; k <= n_steps; ++k) {
    PhaseState next;
    try {
      next = step(sys, traj.states.back(), method, h);
    } catch (const SolverError& e) {
      throw e.at_step(k);
    }
    next.t = s0.t + static_cast<double>(k) * h;
    traj.energies.push_back(eval_energy(sys, next));
    traj.states.push_back(std::move(next));
  }
  return traj;
}

OneStepMap make_stepper(const SystemDef& sys, const MethodSpec& method) {
  validate(method);
  return [sys, method](const PhaseState& s, double h) { return step(sys, s, method, h); };
}

}  // namespace symplectic
