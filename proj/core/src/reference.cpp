#include "symplectic/reference.hpp"

#include <cmath>
#include <utility>

#include "symplectic/error.hpp"
#include "symplectic/systems.hpp"

namespace symplectic {

namespace {

void require_dim(const SystemDef& sys, const PhaseState& s) {
  if (s.dim() != sys.dim || s.p.size() != sys.dim) {
    throw Error(ErrorCode::dimension_mismatch, "state dimension does not match system '" + sys.name + "'");
  }
}

void require_scalar(const PhaseState& s, std::string_view what) {
  if (s.dim() != 1) {
    throw Error(ErrorCode::dimension_mismatch, std::string(what) + " is one degree of freedom");
  }
}

// y + c * k, componentwise over both halves of the state.
PhaseState axpy(const PhaseState& s, double c, const Vector& kq, const Vector& kp, double dt) {
  PhaseState out = s;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    out.q[i] += c * kq[i];
    out.p[i] += c * kp[i];
  }
  out.t += dt;
  return out;
}

}  // namespace

PhaseState step_explicit_euler(const SystemDef& sys, const PhaseState& s, double h) {
  require_dim(sys, s);
  const Vector v = eval_dH_dp(sys, s.q, s.p, s.t);
  const Vector gq = eval_dH_dq(sys, s.q, s.p, s.t);
  PhaseState out = s;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    out.q[i] += h * v[i];
    out.p[i] -= h * gq[i];
  }
  out.t = s.t + h;
  return out;
}

PhaseState step_rk4(const SystemDef& sys, const PhaseState& s, double h) {
  require_dim(sys, s);
  const std::size_t n = s.dim();
  auto rhs = [&](const PhaseState& x, Vector& kq, Vector& kp) {
    kq = eval_dH_dp(sys, x.q, x.p, x.t);
    kp = eval_dH_dq(sys, x.q, x.p, x.t);
    for (double& v : kp) v = -v;
  };
  Vector q1, p1, q2, p2, q3, p3, q4, p4;
  rhs(s, q1, p1);
  rhs(axpy(s, 0.5 * h, q1, p1, 0.5 * h), q2, p2);
  rhs(axpy(s, 0.5 * h, q2, p2, 0.5 * h), q3, p3);
  rhs(axpy(s, h, q3, p3, h), q4, p4);
  PhaseState out = s;
  for (std::size_t i = 0; i < n; ++i) {
    out.q[i] += h / 6.0 * (q1[i] + 2.0 * q2[i] + 2.0 * q3[i] + q4[i]);
    out.p[i] += h / 6.0 * (p1[i] + 2.0 * p2[i] + 2.0 * p3[i] + p4[i]);
  }
  out.t = s.t + h;
  return out;
}

PhaseState exact_oscillator(const PhaseState& s0, double t) {
  require_scalar(s0, "exact_oscillator");
  if (t == s0.t) return s0;
  const double tau = t - s0.t;
  const double c = std::cos(tau), s = std::sin(tau);
  return PhaseState{{c * s0.q[0] + s * s0.p[0]}, {-s * s0.q[0] + c * s0.p[0]}, t};
}

PhaseState exact_free_particle(const PhaseState& s0, double t) {
  if (t == s0.t) return s0;
  PhaseState out = s0;
  for (std::size_t i = 0; i < s0.dim(); ++i) out.q[i] += (t - s0.t) * s0.p[i];
  out.t = t;
  return out;
}

PhaseState exact_driven_oscillator(const PhaseState& s0, double t) {
  require_scalar(s0, "exact_driven_oscillator");
  if (t == s0.t) return s0;
  constexpr double a = systems::kDrivenAmplitude;
  constexpr double w = systems::kDrivenFrequency;
  // Particular solution K cos(w t); the remainder is a free rotation.
  const double k = a / (1.0 - w * w);
  auto xp = [&](double tt) { return k * std::cos(w * tt); };
  auto vp = [&](double tt) { return -k * w * std::sin(w * tt); };
  const double u0 = s0.q[0] - xp(s0.t);
  const double w0 = s0.p[0] - vp(s0.t);
  const double tau = t - s0.t;
  const double c = std::cos(tau), s = std::sin(tau);
  return PhaseState{{c * u0 + s * w0 + xp(t)}, {-s * u0 + c * w0 + vp(t)}, t};
}

std::optional<ExactSolution> exact_solution(std::string_view system) {
  if (system == "oscillator") {
    return ExactSolution{"oscillator", exact_oscillator, "all t"};
  }
  if (system == "free-particle") {
    return ExactSolution{"free-particle", exact_free_particle, "all t"};
  }
  if (system == "driven-oscillator") {
    return ExactSolution{"driven-oscillator", exact_driven_oscillator, "all t"};
  }
  return std::nullopt;
}

ExactSolution rk4_reference(SystemDef sys, double h_ref) {
  if (!(h_ref > 0.0)) throw Error(ErrorCode::invalid_argument, "h_ref must be > 0");
  std::string name = sys.name;
  auto evolve = [sys = std::move(sys), h_ref](const PhaseState& s0, double t) {
    if (t == s0.t) return s0;
    const double span = t - s0.t;
    const auto steps = static_cast<long>(std::ceil(std::abs(span) / h_ref));
    const double h = span / static_cast<double>(steps);
    PhaseState s = s0;
    for (long k = 0; k < steps; ++k) {
      s = step_rk4(sys, s, h);
      s.t = s0.t + static_cast<double>(k + 1) * h;
    }
    s.t = t;
    return s;
  };
  return ExactSolution{std::move(name), std::move(evolve),
                       "RK4 with step <= " + std::to_string(h_ref)};
}

ExactSolution reference_solution(const SystemDef& sys, double h_ref) {
  if (auto exact = exact_solution(sys.name)) return *exact;
  return rk4_reference(sys, h_ref);
}

}  // namespace symplectic
