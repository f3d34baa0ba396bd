#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "symplectic/method.hpp"
#include "symplectic/phase_space.hpp"

namespace symplectic {

// One-step maps. Each returns the state at s.t + h; h may have either sign
// and h == 0 returns s unchanged. The first four require an x'' = f(x, t)
// system (q is x, p is dx/dt).

/// x1 = x0 + h v0;  v1 = v0 + h f(x1, t0 + alpha h).
PhaseState step_euler_a(const SystemDef& sys, const PhaseState& s, double h, double alpha);

/// v1 = v0 + h f(x0, t0 + alpha h);  x1 = x0 + h v1.
///
/// The position update uses the freshly computed velocity v1. Reading it as
/// the exact velocity at t0 + h is not implementable and would neither keep
/// the unit Jacobian nor give the +h^2 f / 2 position error.
PhaseState step_euler_b(const SystemDef& sys, const PhaseState& s, double h, double alpha);

/// Half kick at t0 + alpha h, drift, half kick at t0 + (1 - alpha) h.
PhaseState step_second_41(const SystemDef& sys, const PhaseState& s, double h, double alpha);

/// Half drift, kick at t0 + h/2, half drift. One force evaluation.
PhaseState step_second_43(const SystemDef& sys, const PhaseState& s, double h);

/// First order map for general H, with tau = t0 + alpha h:
///   q1 = q0 + h dH/dp(q1, p0, tau)   (implicit)
///   p1 = p0 - h dH/dq(q1, p0, tau)
/// With swap_xy the roles of q and p are exchanged: p1 is implicit and q1
/// explicit. Applies componentwise for any dimension.
PhaseState step_implicit1_51(const SystemDef& sys, const PhaseState& s, double h, double alpha,
                             const SolverPolicy& solver, bool swap_xy = false);

/// Second order map for general H: an implicit-in-q half step at
/// t0 + alpha h followed by an implicit-in-p half step at t0 + (1 - alpha) h.
/// swap_xy exchanges q and p throughout.
PhaseState step_implicit2_61(const SystemDef& sys, const PhaseState& s, double h, double alpha,
                             const SolverPolicy& solver, bool swap_xy = false);

/// n degree of freedom first order map (same map as step_implicit1_51 with
/// the time argument t0 + alpha h).
PhaseState step_ndof1_73(const SystemDef& sys, const PhaseState& s, double h, double alpha,
                         const SolverPolicy& solver);

/// n degree of freedom second order map; product of two canonical half
/// steps. For separable H both implicit stages are explicit.
PhaseState step_ndof2_74(const SystemDef& sys, const PhaseState& s, double h, double alpha,
                         const SolverPolicy& solver);

/// Leapfrog for H = |p|^2/2 + U(q, t): q_mid = q0 + h p0 / 2,
/// p1 = p0 - h grad U(q_mid, t0 + h/2), q1 = q_mid + h p1 / 2.
///
/// The middle line is the velocity update (p1), not a second position.
PhaseState step_leapfrog_75(const SystemDef& sys, const PhaseState& s, double h);

/// Dispatches on method.scheme (including the two baselines).
PhaseState step(const SystemDef& sys, const PhaseState& s, const MethodSpec& method, double h);

struct Trajectory {
  std::vector<PhaseState> states;
  std::vector<double> energies;
  MethodSpec method;
  double h = 0.0;
  /// True when the system lacks analytic gradients and central differences
  /// were used.
  bool numeric_gradient_fallback = false;
};

/// Fixed-step driver. states[k].t == t0 + k h exactly. Solver failures are
/// rethrown with the step index attached.
Trajectory integrate(const SystemDef& sys, const PhaseState& s0, const MethodSpec& method, double h,
                     std::size_t n_steps);

/// Step map bound to a system and method, as used by the verification code.
using OneStepMap = std::function<PhaseState(const PhaseState&, double h)>;

OneStepMap make_stepper(const SystemDef& sys, const MethodSpec& method);

}  // namespace symplectic
