#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "symplectic/phase_space.hpp"

namespace symplectic {

/// Explicit Euler on the first-order system, both derivatives taken at the
/// old state. Not area preserving: det J = 1 + h^2 on the oscillator.
PhaseState step_explicit_euler(const SystemDef& sys, const PhaseState& s, double h);

/// Classical four-stage Runge-Kutta on (dq/dt, dp/dt) = (dH/dp, -dH/dq).
PhaseState step_rk4(const SystemDef& sys, const PhaseState& s, double h);

/// Solution operator of a system: maps an initial state to the state at
/// time t. At t == s0.t it returns s0 exactly.
struct ExactSolution {
  std::string system;
  std::function<PhaseState(const PhaseState& s0, double t)> evolve;
  std::string validity;
};

/// Rotation of (q, p) by the angle t - t0; H = (p^2 + q^2) / 2.
PhaseState exact_oscillator(const PhaseState& s0, double t);
PhaseState exact_free_particle(const PhaseState& s0, double t);
/// q'' = -q + A cos(w t) with the parameters of systems::driven_oscillator.
PhaseState exact_driven_oscillator(const PhaseState& s0, double t);

/// Closed-form solution for the registry systems that have one.
std::optional<ExactSolution> exact_solution(std::string_view system);

/// Tiny-step RK4 reference: the interval to t is split into equal steps of
/// at most h_ref.
ExactSolution rk4_reference(SystemDef sys, double h_ref = 1e-4);

/// Closed form when available, RK4 reference otherwise.
ExactSolution reference_solution(const SystemDef& sys, double h_ref = 1e-4);

}  // namespace symplectic
