#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "symplectic/phase_space.hpp"

namespace symplectic::systems {

// Built-in test Hamiltonians. All have analytic gradients; the one degree of
// freedom ones also carry analytic flow jets.

/// H = (p^2 + q^2) / 2
SystemDef harmonic_oscillator();
/// H = p^2 / 2
SystemDef free_particle();
/// H = p^2 / 2 - cos q
SystemDef pendulum();
/// H = p^2 / 2 + q^4 / 4
SystemDef quartic_oscillator();

inline constexpr double kDrivenAmplitude = 0.5;
inline constexpr double kDrivenFrequency = 2.0;
/// H = (p^2 + q^2) / 2 - A q cos(w t), A = 0.5, w = 2.
SystemDef driven_oscillator();

/// H = (p1^2 + p2^2) / 2 + (q1^2 + q2^2) / 2 + q1^2 q2 - q2^3 / 3
SystemDef henon_heiles();

/// Non-separable, one degree of freedom: H = sin(q) p^2 / 2 + q^2 / 2,
/// so dq/dt = sin(q) p.
SystemDef sine_coupled();

/// Non-separable, one degree of freedom: H = q p^2 / 2, so dq/dt = q p is
/// linear in q with slope p.
SystemDef bilinear();

/// Non-separable, coupled two degrees of freedom:
/// H = (1 + q2^2/4) p1^2 / 2 + p2^2 / 2 + (q1^2 + q2^2) / 2 + q1 q2 / 4
SystemDef coupled_2dof();

/// Registry lookup by name. Throws Error(unknown_name) listing the
/// available names.
SystemDef find(std::string_view name);

std::vector<std::string> names();

}  // namespace symplectic::systems
