#include "symplectic/systems.hpp"

#include <cmath>
#include <functional>
#include <utility>

#include "symplectic/error.hpp"

namespace symplectic::systems {

namespace {

// Builds a one degree of freedom separable system from U(q, t), U'(q, t)
// and the derivatives of the force F = -U' needed for the flow jet.
struct ScalarPotential {
  std::function<double(double, double)> u;
  std::function<double(double, double)> du;
  std::function<FieldJet(double, double)> force_jet;  // value and x/t derivatives of -U'
};

SystemDef scalar_separable(std::string name, ScalarPotential pot) {
  SystemDef sys;
  sys.name = std::move(name);
  sys.dim = 1;
  sys.kind = SystemKind::scalar_second_order;
  sys.hamiltonian = [u = pot.u](const Vector& q, const Vector& p, double t) {
    return 0.5 * p[0] * p[0] + u(q[0], t);
  };
  sys.dH_dq = [du = pot.du](const Vector& q, const Vector&, double t) { return Vector{du(q[0], t)}; };
  sys.dH_dp = [](const Vector&, const Vector& p, double) { return Vector{p[0]}; };
  sys.potential = [u = pot.u](const Vector& q, double t) { return u(q[0], t); };
  sys.potential_grad = [du = pot.du](const Vector& q, double t) { return Vector{du(q[0], t)}; };
  sys.flow_jet = [fj = pot.force_jet](double q, double p, double t) {
    FlowJet jet;
    jet.f.value = p;
    jet.f.dy = 1.0;
    jet.g = fj(q, t);
    return jet;
  };
  return sys;
}

}  // namespace

SystemDef harmonic_oscillator() {
  return scalar_separable(
      "oscillator",
      {[](double q, double) { return 0.5 * q * q; }, [](double q, double) { return q; },
       [](double q, double) {
         FieldJet g;
         g.value = -q;
         g.dx = -1.0;
         return g;
       }});
}

SystemDef free_particle() {
  return scalar_separable("free-particle", {[](double, double) { return 0.0; },
                                            [](double, double) { return 0.0; },
                                            [](double, double) { return FieldJet{}; }});
}

SystemDef pendulum() {
  return scalar_separable(
      "pendulum",
      {[](double q, double) { return -std::cos(q); }, [](double q, double) { return std::sin(q); },
       [](double q, double) {
         FieldJet g;
         g.value = -std::sin(q);
         g.dx = -std::cos(q);
         g.dxx = std::sin(q);
         return g;
       }});
}

SystemDef quartic_oscillator() {
  return scalar_separable(
      "quartic",
      {[](double q, double) { return 0.25 * q * q * q * q; },
       [](double q, double) { return q * q * q; },
       [](double q, double) {
         FieldJet g;
         g.value = -q * q * q;
         g.dx = -3.0 * q * q;
         g.dxx = -6.0 * q;
         return g;
       }});
}

SystemDef driven_oscillator() {
  constexpr double a = kDrivenAmplitude;
  constexpr double w = kDrivenFrequency;
  return scalar_separable(
      "driven-oscillator",
      {[](double q, double t) { return 0.5 * q * q - a * q * std::cos(w * t); },
       [](double q, double t) { return q - a * std::cos(w * t); },
       [](double q, double t) {
         FieldJet g;
         g.value = -q + a * std::cos(w * t);
         g.dx = -1.0;
         g.dt = -a * w * std::sin(w * t);
         g.dtt = -a * w * w * std::cos(w * t);
         return g;
       }});
}

SystemDef henon_heiles() {
  SystemDef sys;
  sys.name = "henon-heiles";
  sys.dim = 2;
  sys.kind = SystemKind::separable;
  sys.potential = [](const Vector& q, double) {
    return 0.5 * (q[0] * q[0] + q[1] * q[1]) + q[0] * q[0] * q[1] - q[1] * q[1] * q[1] / 3.0;
  };
  sys.potential_grad = [](const Vector& q, double) {
    return Vector{q[0] + 2.0 * q[0] * q[1], q[1] + q[0] * q[0] - q[1] * q[1]};
  };
  sys.hamiltonian = [u = sys.potential](const Vector& q, const Vector& p, double t) {
    return 0.5 * (p[0] * p[0] + p[1] * p[1]) + u(q, t);
  };
  sys.dH_dq = [du = sys.potential_grad](const Vector& q, const Vector&, double t) { return du(q, t); };
  sys.dH_dp = [](const Vector&, const Vector& p, double) { return p; };
  return sys;
}

SystemDef sine_coupled() {
  SystemDef sys;
  sys.name = "sine-coupled";
  sys.dim = 1;
  sys.kind = SystemKind::general;
  sys.hamiltonian = [](const Vector& q, const Vector& p, double) {
    return 0.5 * std::sin(q[0]) * p[0] * p[0] + 0.5 * q[0] * q[0];
  };
  sys.dH_dq = [](const Vector& q, const Vector& p, double) {
    return Vector{0.5 * std::cos(q[0]) * p[0] * p[0] + q[0]};
  };
  sys.dH_dp = [](const Vector& q, const Vector& p, double) { return Vector{std::sin(q[0]) * p[0]}; };
  sys.flow_jet = [](double x, double y, double) {
    const double s = std::sin(x), c = std::cos(x);
    FlowJet jet;
    jet.f = {s * y, c * y, s, 0.0, -s * y, 0.0, 0.0, c, 0.0, 0.0};
    jet.g = {-0.5 * c * y * y - x, 0.5 * s * y * y - 1.0, -c * y, 0.0, 0.5 * c * y * y, -c, 0.0,
             s * y, 0.0, 0.0};
    return jet;
  };
  return sys;
}

SystemDef bilinear() {
  SystemDef sys;
  sys.name = "bilinear";
  sys.dim = 1;
  sys.kind = SystemKind::general;
  sys.hamiltonian = [](const Vector& q, const Vector& p, double) { return 0.5 * q[0] * p[0] * p[0]; };
  sys.dH_dq = [](const Vector&, const Vector& p, double) { return Vector{0.5 * p[0] * p[0]}; };
  sys.dH_dp = [](const Vector& q, const Vector& p, double) { return Vector{q[0] * p[0]}; };
  sys.flow_jet = [](double x, double y, double) {
    FlowJet jet;
    jet.f = {x * y, y, x, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0};
    jet.g = {-0.5 * y * y, 0.0, -y, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0};
    return jet;
  };
  return sys;
}

SystemDef coupled_2dof() {
  SystemDef sys;
  sys.name = "coupled-2dof";
  sys.dim = 2;
  sys.kind = SystemKind::general;
  sys.hamiltonian = [](const Vector& q, const Vector& p, double) {
    const double m = 1.0 + 0.25 * q[1] * q[1];
    return 0.5 * m * p[0] * p[0] + 0.5 * p[1] * p[1] + 0.5 * (q[0] * q[0] + q[1] * q[1]) +
           0.25 * q[0] * q[1];
  };
  sys.dH_dq = [](const Vector& q, const Vector& p, double) {
    return Vector{q[0] + 0.25 * q[1], 0.25 * q[1] * p[0] * p[0] + q[1] + 0.25 * q[0]};
  };
  sys.dH_dp = [](const Vector& q, const Vector& p, double) {
    return Vector{(1.0 + 0.25 * q[1] * q[1]) * p[0], p[1]};
  };
  return sys;
}

namespace {

struct Entry {
  std::string_view name;
  SystemDef (*make)();
};

constexpr Entry kRegistry[] = {
    {"oscillator", harmonic_oscillator},
    {"free-particle", free_particle},
    {"pendulum", pendulum},
    {"quartic", quartic_oscillator},
    {"driven-oscillator", driven_oscillator},
    {"henon-heiles", henon_heiles},
    {"sine-coupled", sine_coupled},
    {"bilinear", bilinear},
    {"coupled-2dof", coupled_2dof},
};

}  // namespace

SystemDef find(std::string_view name) {
  for (const auto& e : kRegistry) {
    if (e.name == name) return e.make();
  }
  std::string msg = "unknown system '" + std::string(name) + "'; available:";
  for (const auto& e : kRegistry) msg += " " + std::string(e.name);
  throw Error(ErrorCode::unknown_name, msg);
}

std::vector<std::string> names() {
  std::vector<std::string> out;
  for (const auto& e : kRegistry) out.emplace_back(e.name);
  return out;
}

}  // namespace symplectic::systems
