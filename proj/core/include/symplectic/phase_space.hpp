#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace symplectic {

using Vector = std::vector<double>;

/// Point (q, p) of phase space at time t. Use make_state to get a
/// validated instance.
struct PhaseState {
  Vector q;
  Vector p;
  double t = 0.0;

  std::size_t dim() const noexcept { return q.size(); }

  friend bool operator==(const PhaseState&, const PhaseState&) = default;
};

PhaseState make_state(Vector q, Vector p, double t);

/// scalar_second_order is the x'' = f(x, t) case: a one degree of freedom
/// separable system. Anything scalar_second_order is also separable.
enum class SystemKind { general, separable, scalar_second_order };

inline bool is_separable(SystemKind kind) { return kind != SystemKind::general; }

/// Value and partial derivatives (up to second order) of one component of
/// the one degree of freedom flow, in the variables x = q, y = p and t.
struct FieldJet {
  double value = 0.0;
  double dx = 0.0, dy = 0.0, dt = 0.0;
  double dxx = 0.0, dyy = 0.0, dtt = 0.0;
  double dxy = 0.0, dxt = 0.0, dyt = 0.0;
};

/// f = dH/dp and g = -dH/dq of a one degree of freedom system.
struct FlowJet {
  FieldJet f;
  FieldJet g;
};

using ScalarField = std::function<double(const Vector& q, const Vector& p, double t)>;
using VectorField = std::function<Vector(const Vector& q, const Vector& p, double t)>;
using JetField = std::function<FlowJet(double q, double p, double t)>;
using Potential = std::function<double(const Vector& q, double t)>;
using PotentialGradient = std::function<Vector(const Vector& q, double t)>;

/// Hamiltonian system definition. Gradients are optional; when absent the
/// central-difference fallback is used. `flow_jet` supplies the analytic
/// first and second derivatives of f and g for one degree of freedom
/// systems (used only by the local error analysis).
struct SystemDef {
  std::string name;
  std::size_t dim = 1;
  SystemKind kind = SystemKind::general;
  ScalarField hamiltonian;
  VectorField dH_dq;
  VectorField dH_dp;
  JetField flow_jet;
  // separable kinds only: H = 1/2 |p|^2 + U(q, t)
  Potential potential;
  PotentialGradient potential_grad;

  bool has_analytic_gradients() const { return dH_dq && dH_dp; }
};

/// Checks the structural invariants of `sys` at a handful of sample points
/// (separable form, x'' = f(x, t) form). Throws Error on violation.
void validate_system(const SystemDef& sys);

double eval_energy(const SystemDef& sys, const PhaseState& s);

struct Gradients {
  Vector dH_dq;
  Vector dH_dp;
};

inline const double kCbrtEpsilon = std::cbrt(std::numeric_limits<double>::epsilon());

/// Central differences of H with absolute step rel_step * max(1, |z_i|).
Gradients numeric_gradients(const SystemDef& sys, const PhaseState& s,
                            double rel_step = kCbrtEpsilon);

// Gradient evaluation used by the integrators: analytic when supplied,
// central differences otherwise.
Vector eval_dH_dq(const SystemDef& sys, const Vector& q, const Vector& p, double t);
Vector eval_dH_dp(const SystemDef& sys, const Vector& q, const Vector& p, double t);

/// Force of the x'' = f(x, t) form, i.e. -dU/dq for separable systems.
Vector eval_force(const SystemDef& sys, const Vector& q, double t);

/// f and g with their derivatives at (q, p, t) for a one degree of freedom
/// system; finite differences of dH/dp and -dH/dq when no jet is supplied.
FlowJet eval_flow_jet(const SystemDef& sys, double q, double p, double t);

}  // namespace symplectic
