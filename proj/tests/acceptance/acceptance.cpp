// Acceptance suite: one PASS/FAIL line per criterion.
//
// Usage: symplectic_acceptance [AC1 ... AC8]
// With no arguments every criterion runs. Exit status is 0 iff every
// selected criterion passed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "symplectic/error.hpp"
#include "symplectic/implicit_solver.hpp"
#include "symplectic/integrators.hpp"
#include "symplectic/reference.hpp"
#include "symplectic/systems.hpp"
#include "symplectic/verification.hpp"

using namespace symplectic;

namespace {

// Pinned tolerances and budgets -----------------------------------------------

constexpr double kDetTol = 1e-7;
constexpr double kSympTol = 1e-6;
constexpr double kOrderTol = 0.1;
constexpr double kErrorConstantTol = 0.05;
constexpr double kCoefficientFloor = 1e-6;
constexpr double kBracketTol = 1e-6;
constexpr double kRk4BracketFloor = 1e-4;
constexpr double kRatioSlack = 0.05;
constexpr int kContractionMaxIter = 1000;
constexpr double kReductionTol = 1e-12;
constexpr double kLeapfrogEnergyCalibration = 1e-3;
constexpr double kEulerEnergyFactor = 100.0;
constexpr double kPolygonTol = 1e-4;
constexpr double kHandTol = 1e-15;

constexpr std::uint64_t kSeed = 20240611;
const std::vector<double> kProbeH{0.5, 0.1, 0.02};
const std::vector<double> kOrderH{0.1, 0.05, 0.025, 0.0125, 0.00625};
const SolverPolicy kNewton{SolverMethod::newton, 1e-14, 50};

struct Outcome {
  bool passed = true;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string title;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

PhaseState random_state(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0), time(0.0, 1.0);
  PhaseState s{Vector(n), Vector(n), 0.0};
  for (auto& v : s.q) v = coord(rng);
  for (auto& v : s.p) v = coord(rng);
  s.t = time(rng);
  return s;
}

double state_diff(const PhaseState& a, const PhaseState& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    m = std::max({m, std::abs(a.q[i] - b.q[i]), std::abs(a.p[i] - b.p[i])});
  }
  return m;
}

MethodSpec method_for(Scheme scheme) {
  MethodSpec m = make_method(scheme);
  m.solver = kNewton;
  return m;
}

// Three systems per scheme, all accepted by it and at least one nonlinear
// or time dependent.
std::vector<SystemDef> systems_for(Scheme scheme) {
  switch (scheme) {
    case Scheme::euler_a_31:
    case Scheme::euler_b_33:
    case Scheme::second_41:
    case Scheme::second_43:
      return {systems::pendulum(), systems::driven_oscillator(), systems::quartic_oscillator()};
    case Scheme::implicit1_51:
    case Scheme::implicit2_61:
      return {systems::pendulum(), systems::driven_oscillator(), systems::sine_coupled()};
    case Scheme::ndof1_73:
    case Scheme::ndof2_74:
      return {systems::henon_heiles(), systems::coupled_2dof(), systems::sine_coupled()};
    default:
      return {systems::pendulum(), systems::driven_oscillator(), systems::henon_heiles()};
  }
}

Outcome ac1_symplecticity() {
  std::mt19937_64 rng(kSeed);
  double worst_det = 0.0, worst_symp = 0.0;
  std::string worst_where;
  std::size_t probes = 0;
  for (Scheme scheme : symplectic_schemes()) {
    for (const SystemDef& sys : systems_for(scheme)) {
      const OneStepMap stepper = make_stepper(sys, method_for(scheme));
      for (int k = 0; k < 20; ++k) {
        const PhaseState s = random_state(rng, sys.dim);
        for (double h : kProbeH) {
          const Eigen::MatrixXd jac = step_jacobian(stepper, s, h);
          const double det = std::abs(jac.determinant() - 1.0);
          const double symp = symplectic_defect(jac);
          if (det > worst_det || symp > worst_symp) {
            worst_where = std::string(scheme_name(scheme)) + "/" + sys.name;
          }
          worst_det = std::max(worst_det, det);
          worst_symp = std::max(worst_symp, symp);
          ++probes;
        }
      }
    }
  }
  Outcome out;
  out.passed = worst_det <= kDetTol && worst_symp <= kSympTol;
  out.detail = std::to_string(probes) + " probes, max|detJ-1|=" + fmt(worst_det) + " (<= " + fmt(kDetTol) +
               "), max defect=" + fmt(worst_symp) + " (<= " + fmt(kSympTol) + "), worst at " + worst_where;
  return out;
}

Outcome ac2_order() {
  const SystemDef sys = systems::driven_oscillator();
  const ExactSolution exact = *exact_solution(sys.name);
  const PhaseState s0{{0.5}, {0.3}, 0.0};
  Outcome out;
  std::ostringstream os;
  double worst = 0.0;
  for (Scheme scheme : symplectic_schemes()) {
    const OrderFit fit = measured_order(make_stepper(sys, method_for(scheme)), s0, exact, kOrderH);
    const double dev = std::abs(fit.slope - nominal_order(scheme));
    worst = std::max(worst, dev);
    if (dev > kOrderTol) out.passed = false;
    os << scheme_name(scheme) << "=" << fmt(fit.slope) << " ";
  }
  out.detail = os.str() + "(max |slope - p| = " + fmt(worst) + " <= " + fmt(kOrderTol) + ")";
  return out;
}

Outcome ac3_error_constants() {
  const std::vector<Scheme> schemes{Scheme::euler_a_31, Scheme::euler_b_33,   Scheme::second_41,
                                    Scheme::second_43,  Scheme::implicit1_51, Scheme::implicit2_61};
  const SystemDef driven = systems::driven_oscillator();
  const SystemDef sine = systems::sine_coupled();
  const ExactSolution driven_exact = *exact_solution(driven.name);
  const ExactSolution sine_ref = rk4_reference(sine);
  std::mt19937_64 rng(kSeed + 3);
  Outcome out;
  double worst = 0.0;
  std::size_t compared = 0, skipped = 0;
  std::string worst_where;
  auto check = [&](const SystemDef& sys, const ExactSolution& ref, Scheme scheme, const PhaseState& s) {
    const MethodSpec m = method_for(scheme);
    const LocalErrorCoefficients an = analytic_local_error(m, sys, s);
    const Vector emp = local_error_constant(make_stepper(sys, m), s, an.order, ref, kOrderH);
    for (std::size_t c = 0; c < an.coefficients.size(); ++c) {
      if (std::abs(an.coefficients[c]) < kCoefficientFloor) {
        ++skipped;
        continue;
      }
      const double dev = std::abs(emp[c] / an.coefficients[c] - 1.0);
      if (dev > worst) {
        worst = dev;
        worst_where = std::string(scheme_name(scheme)) + "/" + sys.name;
      }
      ++compared;
    }
  };
  for (int k = 0; k < 5; ++k) {
    const PhaseState s = random_state(rng, 1);
    for (Scheme scheme : schemes) check(driven, driven_exact, scheme, s);
    // The general schemes also on a system where the implicit stage is genuine.
    check(sine, sine_ref, Scheme::implicit1_51, s);
    check(sine, sine_ref, Scheme::implicit2_61, s);
  }
  out.passed = worst <= kErrorConstantTol;
  out.detail = std::to_string(compared) + " components compared, " + std::to_string(skipped) +
               " below floor, max |empirical/analytic - 1| = " + fmt(worst) + " (<= " + fmt(kErrorConstantTol) +
               ") at " + worst_where;
  return out;
}

Outcome ac4_brackets() {
  const SystemDef sys = systems::coupled_2dof();
  std::mt19937_64 rng(kSeed + 4);
  double worst = 0.0;
  for (Scheme scheme : {Scheme::ndof1_73, Scheme::ndof2_74}) {
    const OneStepMap stepper = make_stepper(sys, method_for(scheme));
    for (int k = 0; k < 20; ++k) {
      const PhaseState s = random_state(rng, 2);
      for (double h : kProbeH) worst = std::max(worst, poisson_brackets(stepper, s, h).max());
    }
  }
  const double rk4 = poisson_brackets(make_stepper(systems::pendulum(), make_method(Scheme::baseline_rk4)),
                                      PhaseState{{0.0}, {0.0}, 0.0}, 0.5)
                         .max();
  Outcome out;
  out.passed = worst <= kBracketTol && rk4 > kRk4BracketFloor;
  out.detail = "ndof max residual=" + fmt(worst) + " (<= " + fmt(kBracketTol) + "), rk4 pendulum h=0.5 residual=" +
               fmt(rk4) + " (> " + fmt(kRk4BracketFloor) + ")";
  return out;
}

// For H = q p^2 / 2 the position stage is q = q0 + h p0 q, whose iteration
// contracts by exactly |h p0|, so p0 = bound / h dials the bound. A ratio of
// 0.9 needs about 260 iterations to reach 1e-12 from the predictor, hence
// the larger budget.
Outcome ac5_contraction() {
  const SystemDef sys = systems::bilinear();
  const double h = 0.1, q0 = 1.0;
  const SolverPolicy plain{SolverMethod::fixed_point, 1e-12, kContractionMaxIter};
  Outcome out;
  std::ostringstream os;
  for (double bound : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const PhaseState s{{q0}, {bound / h}, 0.0};
    const double predicted = contraction_bound(sys, s, h, 0.5);
    const VectorMap stage = [&](const Vector& q) { return Vector{q0 + h * sys.dH_dp(q, s.p, s.t + 0.5 * h)[0]}; };
    const SolveOutcome r = solve_fixed_point(stage, stage({q0}), plain);
    const bool ok = r.converged() && r.contraction_estimate <= predicted + kRatioSlack;
    if (!ok) out.passed = false;
    os << "bound " << fmt(predicted) << ": ratio " << fmt(r.contraction_estimate) << " in " << r.iterations
       << " it" << (ok ? "" : " FAIL") << "; ";
  }
  for (double bound : {1.5, 2.0, 3.0}) {
    const PhaseState s{{q0}, {bound / h}, 0.0};
    bool flagged = false;
    try {
      step_implicit1_51(sys, s, h, 0.5, plain);
    } catch (const SolverError& e) {
      flagged = e.status() == SolveStatus::divergence;
    }
    if (!flagged) out.passed = false;
    os << "bound " << fmt(contraction_bound(sys, s, h, 0.5)) << ": " << (flagged ? "divergent" : "NOT flagged")
       << "; ";
  }
  out.detail = os.str();
  out.detail.resize(out.detail.size() - 2);
  return out;
}

Outcome ac6_reductions() {
  std::mt19937_64 rng(kSeed + 6);
  const double h = 0.1;
  double lf_vs_74 = 0.0, n1 = 0.0, reverse = 0.0;
  for (const SystemDef& sys : {systems::pendulum(), systems::henon_heiles(), systems::driven_oscillator(),
                               systems::quartic_oscillator()}) {
    for (int k = 0; k < 20; ++k) {
      const PhaseState s = random_state(rng, sys.dim);
      lf_vs_74 = std::max(lf_vs_74, state_diff(step_ndof2_74(sys, s, h, 0.5, kNewton), step_leapfrog_75(sys, s, h)));
    }
  }
  for (const SystemDef& sys : {systems::sine_coupled(), systems::bilinear(), systems::pendulum()}) {
    for (int k = 0; k < 20; ++k) {
      PhaseState s = random_state(rng, 1);
      if (sys.name == "bilinear") s.p[0] *= 0.5;
      n1 = std::max(n1, state_diff(step_ndof1_73(sys, s, h, 0.5, kNewton), step_implicit1_51(sys, s, h, 0.5, kNewton)));
      n1 = std::max(n1, state_diff(step_ndof2_74(sys, s, h, 0.0, kNewton), step_implicit2_61(sys, s, h, 0.0, kNewton)));
    }
  }
  for (const SystemDef& sys : {systems::pendulum(), systems::henon_heiles(), systems::quartic_oscillator()}) {
    for (int k = 0; k < 20; ++k) {
      const PhaseState s = random_state(rng, sys.dim);
      reverse = std::max(reverse, state_diff(step_leapfrog_75(sys, step_leapfrog_75(sys, s, h), -h), s));
    }
  }
  Outcome out;
  out.passed = lf_vs_74 <= kReductionTol && n1 <= kReductionTol && reverse <= kReductionTol;
  out.detail = "7.4 vs 7.5=" + fmt(lf_vs_74) + ", n=1 ndof vs one-dof=" + fmt(n1) + ", leapfrog h/-h=" +
               fmt(reverse) + " (all <= " + fmt(kReductionTol) + ")";
  return out;
}

Outcome ac7_long_run() {
  const SystemDef sys = systems::pendulum();
  const PhaseState s0{{1.0}, {0.0}, 0.0};
  const std::size_t n = 100000;
  auto max_drift = [&](Scheme scheme) {
    const Trajectory tr = integrate(sys, s0, make_method(scheme), 0.1, n);
    double m = 0.0;
    for (double e : tr.energies) m = std::max(m, std::abs(e - tr.energies.front()));
    return m;
  };
  const double lf = max_drift(Scheme::leapfrog_75);
  const double eu = max_drift(Scheme::baseline_euler);
  auto polygon_dev = [&](std::size_t vertices) {
    const auto ratios = polygon_area_drift(make_stepper(sys, make_method(Scheme::leapfrog_75)),
                                           regular_polygon(s0, 0.1, vertices), 0.1, 1000);
    return std::abs(ratios.back() - 1.0);
  };
  const double area64 = polygon_dev(64);
  const bool energy_ok = lf < kLeapfrogEnergyCalibration && eu >= kEulerEnergyFactor * lf;
  const bool area_ok = area64 <= kPolygonTol;
  Outcome out;
  out.passed = energy_ok && area_ok;
  out.detail = "leapfrog max|dH|=" + fmt(lf) + " (< " + fmt(kLeapfrogEnergyCalibration) + "), euler max|dH|=" +
               fmt(eu) + " (ratio " + fmt(eu / lf) + " >= " + fmt(kEulerEnergyFactor) + ")" +
               (energy_ok ? "" : " ENERGY FAIL") + "; 64-gon r=0.1 area ratio |r-1|=" + fmt(area64) + " (<= " +
               fmt(kPolygonTol) + ")" + (area_ok ? "" : " AREA FAIL");
  if (!area_ok) {
    // Show that the deviation is the polygon's, not the map's: it falls as
    // the square of the vertex count.
    out.detail += "; 256-gon " + fmt(polygon_dev(256)) + ", 1024-gon " + fmt(polygon_dev(1024));
  }
  return out;
}

Outcome ac8_hand_steps() {
  const SystemDef osc = systems::harmonic_oscillator();
  const PhaseState s0{{1.0}, {0.0}, 0.0};
  const double h = 0.1;
  struct Case {
    const char* name;
    PhaseState got;
    double q, p;
  };
  const std::vector<Case> cases{
      {"3.1", step_euler_a(osc, s0, h, 0.5), 1.0, -0.1},
      {"3.3", step_euler_b(osc, s0, h, 0.5), 0.99, -0.1},
      {"4.1", step_second_41(osc, s0, h, 1.0 / 3.0), 0.995, -0.09975},
      {"4.3", step_second_43(osc, s0, h), 0.995, -0.1},
      {"6.1", step_implicit2_61(osc, s0, h, 0.0, SolverPolicy{}), 0.995, -0.1},
      {"7.5", step_leapfrog_75(osc, s0, h), 0.995, -0.1},
  };
  Outcome out;
  double worst = 0.0;
  std::ostringstream os;
  for (const auto& c : cases) {
    const double d = std::max(std::abs(c.got.q[0] - c.q), std::abs(c.got.p[0] - c.p));
    worst = std::max(worst, d);
    if (d > kHandTol) {
      out.passed = false;
      os << c.name << " off by " << fmt(d) << "; ";
    }
  }
  out.detail = os.str() + "6 cases, max deviation " + fmt(worst) + " (<= " + fmt(kHandTol) + ")";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"AC1", "symplecticity battery", 30.0, ac1_symplecticity},
      {"AC2", "order battery", 60.0, ac2_order},
      {"AC3", "error-constant battery", 60.0, ac3_error_constants},
      {"AC4", "Poisson brackets", 10.0, ac4_brackets},
      {"AC5", "contraction criterion", 5.0, ac5_contraction},
      {"AC6", "reduction identities", 5.0, ac6_reductions},
      {"AC7", "long-run contrast", 60.0, ac7_long_run},
      {"AC8", "hand-step oracles", 1.0, ac8_hand_steps},
  };
  std::vector<std::string> selected(argv + 1, argv + argc);
  bool all_passed = true;
  for (const auto& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = secs < c.budget_s;
    const bool passed = out.passed && in_budget;
    all_passed = all_passed && passed;
    std::printf("%s %s %s: %s [%.2f s, budget %.0f s%s]\n", c.id.c_str(), passed ? "PASS" : "FAIL", c.title.c_str(),
                out.detail.c_str(), secs, c.budget_s, in_budget ? "" : ", OVER BUDGET");
    std::fflush(stdout);
  }
  return all_passed ? 0 : 1;
}
