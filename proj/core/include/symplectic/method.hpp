#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "symplectic/implicit_solver.hpp"

namespace symplectic {

enum class Scheme {
  euler_a_31,     // x'' = f(x, t), first order, drift then kick
  euler_b_33,     // x'' = f(x, t), first order, kick then drift
  second_41,      // x'' = f(x, t), second order, half kick / drift / half kick
  second_43,      // x'' = f(x, t), second order, one force evaluation
  implicit1_51,   // general H, first order, implicit in q
  implicit2_61,   // general H, second order, two implicit stages
  ndof1_73,       // n degrees of freedom, first order
  ndof2_74,       // n degrees of freedom, second order
  leapfrog_75,    // separable H, drift / kick / drift
  baseline_euler, // explicit Euler, not symplectic
  baseline_rk4,   // classical Runge-Kutta, not symplectic
};

/// Stable names used by the CLI and config files, e.g. "euler-a-3.1".
std::string_view scheme_name(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view name);
const std::vector<Scheme>& all_schemes();
/// The nine area-preserving schemes (everything except the baselines).
const std::vector<Scheme>& symplectic_schemes();

int nominal_order(Scheme scheme);
bool is_symplectic(Scheme scheme);
/// Whether the time offset parameter alpha enters the scheme.
bool uses_alpha(Scheme scheme);
/// Schemes restricted to x'' = f(x, t) systems.
bool requires_scalar_second_order(Scheme scheme);
bool requires_separable(Scheme scheme);
bool supports_swap(Scheme scheme);
double default_alpha(Scheme scheme);

struct MethodSpec {
  Scheme scheme = Scheme::leapfrog_75;
  double alpha = 0.0;
  SolverPolicy solver;
  bool swap_xy = false;
};

/// MethodSpec with the scheme's suggested alpha and default solver.
MethodSpec make_method(Scheme scheme);

void validate(const MethodSpec& method);

}  // namespace symplectic
