#include "symplectic/reference.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "symplectic/integrators.hpp"
#include "symplectic/systems.hpp"
#include "symplectic/verification.hpp"
#include "test_support.hpp"

namespace symplectic {
namespace {

using testing::max_abs_diff;
using testing::random_state;
using testing::scalar_state;

TEST(ExplicitEuler, OscillatorStep) {
  const PhaseState s = step_explicit_euler(systems::harmonic_oscillator(), scalar_state(1.0, 0.0), 0.1);
  EXPECT_DOUBLE_EQ(s.q[0], 1.0);
  EXPECT_DOUBLE_EQ(s.p[0], -0.1);
  EXPECT_DOUBLE_EQ(s.t, 0.1);
}

TEST(ExplicitEuler, ZeroStep) {
  const PhaseState s = scalar_state(0.3, -0.2, 1.0);
  EXPECT_EQ(step_explicit_euler(systems::pendulum(), s, 0.0), s);
}

TEST(ExplicitEuler, OscillatorJacobianDeterminant) {
  const OneStepMap stepper = [](const PhaseState& s, double h) {
    return step_explicit_euler(systems::harmonic_oscillator(), s, h);
  };
  EXPECT_NEAR(step_jacobian(stepper, scalar_state(0.2, 0.7), 0.1).determinant(), 1.01, 1e-9);
}

TEST(Rk4, ZeroStep) {
  const PhaseState s = scalar_state(0.3, -0.2, 1.0);
  EXPECT_EQ(step_rk4(systems::pendulum(), s, 0.0), s);
}

TEST(Rk4, OscillatorStep) {
  const PhaseState s = step_rk4(systems::harmonic_oscillator(), scalar_state(1.0, 0.0), 0.1);
  EXPECT_NEAR(s.q[0], std::cos(0.1), 1e-7);
  EXPECT_NEAR(s.p[0], -std::sin(0.1), 1e-7);
}

TEST(Rk4, FourthOrder) {
  const SystemDef osc = systems::harmonic_oscillator();
  const OrderFit fit = measured_order(make_stepper(osc, make_method(Scheme::baseline_rk4)), scalar_state(1.0, 0.0),
                                      *exact_solution("oscillator"), {0.2, 0.1, 0.05, 0.025});
  EXPECT_NEAR(fit.slope, 4.0, 0.15);
}

TEST(ExactOscillator, QuarterPeriod) {
  const PhaseState s = exact_oscillator(scalar_state(1.0, 0.0), std::numbers::pi / 2);
  EXPECT_NEAR(s.q[0], 0.0, 1e-15);
  EXPECT_NEAR(s.p[0], -1.0, 1e-15);
}

TEST(ExactOscillator, IdentityAtStart) {
  const PhaseState s0 = scalar_state(0.4, 0.9, 2.5);
  EXPECT_EQ(exact_oscillator(s0, 2.5), s0);
  EXPECT_EQ(exact_free_particle(s0, 2.5), s0);
  EXPECT_EQ(exact_driven_oscillator(s0, 2.5), s0);
  EXPECT_EQ(rk4_reference(systems::pendulum()).evolve(s0, 2.5), s0);
}

TEST(ExactOscillator, ShortTime) {
  const PhaseState s = exact_oscillator(scalar_state(1.0, 0.0), 0.1);
  EXPECT_NEAR(s.q[0], 0.995004165278, 1e-12);
  EXPECT_NEAR(s.p[0], -0.099833416647, 1e-12);
}

TEST(ExactOscillator, ConservesEnergy) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> time(-100.0, 100.0);
  const SystemDef osc = systems::harmonic_oscillator();
  for (int k = 0; k < 200; ++k) {
    const PhaseState s0 = random_state(rng, 1, 1.0, 0.0);
    const PhaseState s = exact_oscillator(s0, time(rng));
    EXPECT_LE(std::abs(eval_energy(osc, s) - eval_energy(osc, s0)), 1e-14);
  }
}

TEST(ExactDriven, SatisfiesEquationOfMotion) {
  // Compare against the tiny-step reference over a unit interval.
  const PhaseState s0 = scalar_state(0.3, -0.4, 0.7);
  const PhaseState exact = exact_driven_oscillator(s0, 1.7);
  const PhaseState approx = rk4_reference(systems::driven_oscillator()).evolve(s0, 1.7);
  EXPECT_LE(max_abs_diff(exact, approx), 1e-12);
}

TEST(ExactFreeParticle, Drift) {
  const PhaseState s = exact_free_particle(scalar_state(7.0, 2.0, 1.0), 3.0);
  EXPECT_DOUBLE_EQ(s.q[0], 11.0);
  EXPECT_DOUBLE_EQ(s.p[0], 2.0);
}

TEST(Registry, ExactSolutionsAvailable) {
  EXPECT_TRUE(exact_solution("oscillator").has_value());
  EXPECT_TRUE(exact_solution("free-particle").has_value());
  EXPECT_TRUE(exact_solution("driven-oscillator").has_value());
  EXPECT_FALSE(exact_solution("pendulum").has_value());
  EXPECT_EQ(reference_solution(systems::pendulum()).system, "pendulum");
}

// RK4 loses energy steadily on the pendulum while leapfrog stays bounded.
TEST(LongRun, Rk4DriftIsSecularLeapfrogIsBounded) {
  const SystemDef sys = systems::pendulum();
  const PhaseState s0 = scalar_state(1.0, 0.0);
  const Trajectory rk = integrate(sys, s0, make_method(Scheme::baseline_rk4), 0.1, 10000);
  const Trajectory lf = integrate(sys, s0, make_method(Scheme::leapfrog_75), 0.1, 10000);
  const double h0 = rk.energies[0];
  double prev = std::abs(rk.energies[1000] - h0);
  for (std::size_t k = 2000; k <= 10000; k += 1000) {
    const double cur = std::abs(rk.energies[k] - h0);
    EXPECT_GT(cur, prev) << k;
    prev = cur;
  }
  double lf_first = 0.0, lf_last = 0.0;
  for (std::size_t k = 0; k <= 10000; ++k) {
    const double d = std::abs(lf.energies[k] - h0);
    (k <= 1000 ? lf_first : lf_last) = std::max(k <= 1000 ? lf_first : lf_last, d);
  }
  EXPECT_LE(lf_last, 1.1 * lf_first);
}

}  // namespace
}  // namespace symplectic
