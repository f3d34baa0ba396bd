#include "symplectic/phase_space.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "symplectic/error.hpp"

namespace symplectic {

namespace {

bool all_finite(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void require_dim(const SystemDef& sys, const PhaseState& s) {
  if (s.q.size() != sys.dim || s.p.size() != sys.dim) {
    throw Error(ErrorCode::dimension_mismatch,
                "state has dimension " + std::to_string(s.q.size()) + ", system '" + sys.name +
                    "' expects " + std::to_string(sys.dim));
  }
}

double fd_step(double rel_step, double x) { return rel_step * std::max(1.0, std::abs(x)); }

// Sample points used by validate_system; fixed so validation is reproducible.
constexpr std::array<std::array<double, 3>, 4> kSamples{{
    {0.3, -0.7, 0.0},
    {-1.1, 0.4, 0.5},
    {0.9, 1.3, 2.0},
    {-0.2, -1.6, -1.0},
}};

}  // namespace

PhaseState make_state(Vector q, Vector p, double t) {
  if (q.size() != p.size()) {
    throw Error(ErrorCode::dimension_mismatch, "q has " + std::to_string(q.size()) +
                                                   " components but p has " +
                                                   std::to_string(p.size()));
  }
  if (q.empty()) throw Error(ErrorCode::dimension_mismatch, "state dimension must be >= 1");
  if (!all_finite(q) || !all_finite(p) || !std::isfinite(t)) {
    throw Error(ErrorCode::non_finite, "state has a non-finite component");
  }
  return PhaseState{std::move(q), std::move(p), t};
}

double eval_energy(const SystemDef& sys, const PhaseState& s) {
  require_dim(sys, s);
  return sys.hamiltonian(s.q, s.p, s.t);
}

Gradients numeric_gradients(const SystemDef& sys, const PhaseState& s, double rel_step) {
  if (!(rel_step > 0.0)) throw Error(ErrorCode::invalid_argument, "rel_step must be > 0");
  require_dim(sys, s);
  const std::size_t n = sys.dim;
  Gradients out{Vector(n), Vector(n)};

  Vector q = s.q;
  Vector p = s.p;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = q[i];
    const double dx = fd_step(rel_step, x);
    q[i] = x + dx;
    const double hp = sys.hamiltonian(q, p, s.t);
    q[i] = x - dx;
    const double hm = sys.hamiltonian(q, p, s.t);
    q[i] = x;
    if (!std::isfinite(hp) || !std::isfinite(hm)) {
      throw Error(ErrorCode::non_finite, "non-finite H inside the difference stencil");
    }
    out.dH_dq[i] = (hp - hm) / (2.0 * dx);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double y = p[i];
    const double dy = fd_step(rel_step, y);
    p[i] = y + dy;
    const double hp = sys.hamiltonian(q, p, s.t);
    p[i] = y - dy;
    const double hm = sys.hamiltonian(q, p, s.t);
    p[i] = y;
    if (!std::isfinite(hp) || !std::isfinite(hm)) {
      throw Error(ErrorCode::non_finite, "non-finite H inside the difference stencil");
    }
    out.dH_dp[i] = (hp - hm) / (2.0 * dy);
  }
  return out;
}

Vector eval_dH_dq(const SystemDef& sys, const Vector& q, const Vector& p, double t) {
  if (sys.dH_dq) return sys.dH_dq(q, p, t);
  return numeric_gradients(sys, PhaseState{q, p, t}).dH_dq;
}

Vector eval_dH_dp(const SystemDef& sys, const Vector& q, const Vector& p, double t) {
  if (sys.dH_dp) return sys.dH_dp(q, p, t);
  return numeric_gradients(sys, PhaseState{q, p, t}).dH_dp;
}

Vector eval_force(const SystemDef& sys, const Vector& q, double t) {
  if (!is_separable(sys.kind)) {
    throw Error(ErrorCode::wrong_system_kind,
                "system '" + sys.name + "' is not of the form H = |p|^2/2 + U(q, t)");
  }
  Vector grad = sys.potential_grad ? sys.potential_grad(q, t)
                                   : eval_dH_dq(sys, q, Vector(q.size(), 0.0), t);
  for (double& v : grad) v = -v;
  return grad;
}

FlowJet eval_flow_jet(const SystemDef& sys, double q, double p, double t) {
  if (sys.dim != 1) {
    throw Error(ErrorCode::dimension_mismatch, "flow jets are defined for one degree of freedom");
  }
  if (sys.flow_jet) return sys.flow_jet(q, p, t);

  // Central differences of f = dH/dp and g = -dH/dq. Second derivatives use
  // a larger step (eps^(1/4)) than first derivatives (eps^(1/3)).
  auto f = [&](double x, double y, double tt) { return eval_dH_dp(sys, {x}, {y}, tt)[0]; };
  auto g = [&](double x, double y, double tt) { return -eval_dH_dq(sys, {x}, {y}, tt)[0]; };
  const double e1 = kCbrtEpsilon;
  const double e2 = std::sqrt(std::sqrt(std::numeric_limits<double>::epsilon()));

  auto jet = [&](auto&& fn) {
    FieldJet j;
    const double hx = fd_step(e1, q), hy = fd_step(e1, p), ht = fd_step(e1, t);
    j.value = fn(q, p, t);
    j.dx = (fn(q + hx, p, t) - fn(q - hx, p, t)) / (2 * hx);
    j.dy = (fn(q, p + hy, t) - fn(q, p - hy, t)) / (2 * hy);
    j.dt = (fn(q, p, t + ht) - fn(q, p, t - ht)) / (2 * ht);
    const double kx = fd_step(e2, q), ky = fd_step(e2, p), kt = fd_step(e2, t);
    j.dxx = (fn(q + kx, p, t) - 2 * j.value + fn(q - kx, p, t)) / (kx * kx);
    j.dyy = (fn(q, p + ky, t) - 2 * j.value + fn(q, p - ky, t)) / (ky * ky);
    j.dtt = (fn(q, p, t + kt) - 2 * j.value + fn(q, p, t - kt)) / (kt * kt);
    auto mixed = [&](double ax, double ay, double at, double bx, double by, double bt, double da,
                     double db) {
      return (fn(q + ax + bx, p + ay + by, t + at + bt) - fn(q + ax - bx, p + ay - by, t + at - bt) -
              fn(q - ax + bx, p - ay + by, t - at + bt) + fn(q - ax - bx, p - ay - by, t - at - bt)) /
             (4 * da * db);
    };
    j.dxy = mixed(kx, 0, 0, 0, ky, 0, kx, ky);
    j.dxt = mixed(kx, 0, 0, 0, 0, kt, kx, kt);
    j.dyt = mixed(0, ky, 0, 0, 0, kt, ky, kt);
    return j;
  };
  return FlowJet{jet(f), jet(g)};
}

void validate_system(const SystemDef& sys) {
  if (sys.dim == 0) throw Error(ErrorCode::invalid_argument, "system dimension must be >= 1");
  if (!sys.hamiltonian) throw Error(ErrorCode::invalid_argument, "system has no Hamiltonian");
  if (sys.kind == SystemKind::scalar_second_order && sys.dim != 1) {
    throw Error(ErrorCode::wrong_system_kind, "x'' = f(x, t) systems must have dim == 1");
  }
  for (const auto& [a, b, t] : kSamples) {
    Vector q(sys.dim), p(sys.dim);
    for (std::size_t i = 0; i < sys.dim; ++i) {
      q[i] = a + 0.1 * static_cast<double>(i);
      p[i] = b - 0.2 * static_cast<double>(i);
    }
    if (is_separable(sys.kind)) {
      if (!sys.potential) {
        throw Error(ErrorCode::invalid_argument, "separable system '" + sys.name + "' has no potential");
      }
      double kinetic = 0.0;
      for (double v : p) kinetic += 0.5 * v * v;
      const double expected = kinetic + sys.potential(q, t);
      if (std::abs(sys.hamiltonian(q, p, t) - expected) > 1e-12) {
        throw Error(ErrorCode::wrong_system_kind,
                    "system '" + sys.name + "' is not H = |p|^2/2 + U(q, t) at a sample point");
      }
      const Vector v = eval_dH_dp(sys, q, p, t);
      for (std::size_t i = 0; i < sys.dim; ++i) {
        if (std::abs(v[i] - p[i]) > 1e-6 * std::max(1.0, std::abs(p[i]))) {
          throw Error(ErrorCode::wrong_system_kind,
                      "system '" + sys.name + "' violates dH/dp == p at a sample point");
        }
      }
    }
  }
}

}  // namespace symplectic
