#include "symplectic/phase_space.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "symplectic/error.hpp"
#include "symplectic/systems.hpp"
#include "test_support.hpp"

namespace symplectic {
namespace {

using testing::random_state;
using testing::scalar_state;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::invalid_argument;
}

TEST(MakeState, EchoesInput) {
  const PhaseState s = make_state({1.0}, {0.0}, 0.0);
  EXPECT_EQ(s, (PhaseState{{1.0}, {0.0}, 0.0}));
  EXPECT_EQ(s.dim(), 1u);
}

TEST(MakeState, RejectsDimensionMismatch) {
  EXPECT_EQ(code_of([] { make_state({1.0, 2.0}, {3.0}, 0.0); }), ErrorCode::dimension_mismatch);
  EXPECT_EQ(code_of([] { make_state({}, {}, 0.0); }), ErrorCode::dimension_mismatch);
}

TEST(MakeState, RejectsNonFinite) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(code_of([&] { make_state({nan}, {0.0}, 0.0); }), ErrorCode::non_finite);
  EXPECT_EQ(code_of([&] { make_state({0.0}, {inf}, 0.0); }), ErrorCode::non_finite);
  EXPECT_EQ(code_of([&] { make_state({0.0}, {0.0}, nan); }), ErrorCode::non_finite);
}

TEST(EvalEnergy, HandSubstitution) {
  EXPECT_DOUBLE_EQ(eval_energy(systems::harmonic_oscillator(), scalar_state(1.0, 0.0)), 0.5);
  EXPECT_DOUBLE_EQ(eval_energy(systems::free_particle(), scalar_state(7.0, 2.0)), 2.0);
  EXPECT_DOUBLE_EQ(eval_energy(systems::pendulum(), scalar_state(0.0, 0.0)), -1.0);
}

TEST(EvalEnergy, DimensionMismatch) {
  const PhaseState two{{1.0, 2.0}, {0.0, 0.0}, 0.0};
  EXPECT_EQ(code_of([&] { eval_energy(systems::pendulum(), two); }), ErrorCode::dimension_mismatch);
}

TEST(EvalEnergy, BitIdenticalOnRepeat) {
  std::mt19937_64 rng(7);
  for (const auto& name : systems::names()) {
    const SystemDef sys = systems::find(name);
    const PhaseState s = random_state(rng, sys.dim, 2.0);
    const double a = eval_energy(sys, s);
    const double b = eval_energy(sys, s);
    EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0) << name;
  }
}

TEST(NumericGradients, OscillatorAtUnitDisplacement) {
  const Gradients g = numeric_gradients(systems::harmonic_oscillator(), scalar_state(1.0, 0.0), 1e-5);
  EXPECT_NEAR(g.dH_dq[0], 1.0, 1e-9);
  EXPECT_NEAR(g.dH_dp[0], 0.0, 1e-9);
}

TEST(NumericGradients, FreeParticleHasNoForce) {
  const Gradients g = numeric_gradients(systems::free_particle(), scalar_state(3.7, -1.2));
  EXPECT_EQ(g.dH_dq[0], 0.0);
}

TEST(NumericGradients, ZeroAtOrigin) {
  const Gradients g = numeric_gradients(systems::harmonic_oscillator(), scalar_state(0.0, 0.0));
  EXPECT_EQ(g.dH_dq[0], 0.0);
  EXPECT_EQ(g.dH_dp[0], 0.0);
}

TEST(NumericGradients, RejectsNonPositiveStep) {
  EXPECT_EQ(code_of([] { numeric_gradients(systems::pendulum(), scalar_state(0, 0), 0.0); }),
            ErrorCode::invalid_argument);
}

TEST(NumericGradients, NonFiniteInsideStencil) {
  SystemDef sys;
  sys.name = "cliff";
  sys.hamiltonian = [](const Vector& q, const Vector& p, double) {
    return q[0] < 1.0 ? 0.5 * p[0] * p[0] : std::numeric_limits<double>::quiet_NaN();
  };
  EXPECT_EQ(code_of([&] { numeric_gradients(sys, scalar_state(1.0 - 1e-7, 0.0)); }),
            ErrorCode::non_finite);
}

// Central differences agree with the analytic gradients of every built-in
// system at random states in [-2, 2]^n.
TEST(NumericGradients, AgreeWithAnalyticGradients) {
  std::mt19937_64 rng(2024);
  for (const auto& name : systems::names()) {
    const SystemDef sys = systems::find(name);
    for (int k = 0; k < 100; ++k) {
      const PhaseState s = random_state(rng, sys.dim, 2.0, 3.0);
      const Gradients num = numeric_gradients(sys, s);
      const Vector dq = sys.dH_dq(s.q, s.p, s.t);
      const Vector dp = sys.dH_dp(s.q, s.p, s.t);
      for (std::size_t i = 0; i < sys.dim; ++i) {
        EXPECT_LE(std::abs(num.dH_dq[i] - dq[i]), 1e-6 * std::max(1.0, std::abs(dq[i]))) << name;
        EXPECT_LE(std::abs(num.dH_dp[i] - dp[i]), 1e-6 * std::max(1.0, std::abs(dp[i]))) << name;
      }
    }
  }
}

TEST(NumericGradients, FallbackWhenAnalyticMissing) {
  SystemDef sys = systems::henon_heiles();
  sys.dH_dq = nullptr;
  sys.dH_dp = nullptr;
  EXPECT_FALSE(sys.has_analytic_gradients());
  const Vector q{0.3, -0.4}, p{0.1, 0.2};
  const Vector dq = eval_dH_dq(sys, q, p, 0.0);
  const Vector exact = systems::henon_heiles().dH_dq(q, p, 0.0);
  EXPECT_NEAR(dq[0], exact[0], 1e-9);
  EXPECT_NEAR(dq[1], exact[1], 1e-9);
}

TEST(FlowJet, FiniteDifferenceFallbackMatchesAnalyticJet) {
  SystemDef sys = systems::sine_coupled();
  const FlowJet exact = sys.flow_jet(0.7, -0.4, 0.2);
  sys.flow_jet = nullptr;
  const FlowJet approx = eval_flow_jet(sys, 0.7, -0.4, 0.2);
  auto close = [](const FieldJet& a, const FieldJet& b) {
    EXPECT_NEAR(a.value, b.value, 1e-14);
    EXPECT_NEAR(a.dx, b.dx, 1e-8);
    EXPECT_NEAR(a.dy, b.dy, 1e-8);
    EXPECT_NEAR(a.dt, b.dt, 1e-8);
    EXPECT_NEAR(a.dxx, b.dxx, 1e-5);
    EXPECT_NEAR(a.dyy, b.dyy, 1e-5);
    EXPECT_NEAR(a.dxy, b.dxy, 1e-5);
    EXPECT_NEAR(a.dtt, b.dtt, 1e-5);
  };
  close(exact.f, approx.f);
  close(exact.g, approx.g);
}

TEST(ValidateSystem, BuiltInsPass) {
  for (const auto& name : systems::names()) {
    EXPECT_NO_THROW(validate_system(systems::find(name))) << name;
  }
}

TEST(ValidateSystem, SeparableClaimIsChecked) {
  SystemDef sys = systems::sine_coupled();
  sys.kind = SystemKind::separable;
  sys.potential = [](const Vector& q, double) { return 0.5 * q[0] * q[0]; };
  EXPECT_EQ(code_of([&] { validate_system(sys); }), ErrorCode::wrong_system_kind);
}

TEST(ValidateSystem, ScalarSecondOrderMustBeOneDimensional) {
  SystemDef sys = systems::henon_heiles();
  sys.kind = SystemKind::scalar_second_order;
  EXPECT_EQ(code_of([&] { validate_system(sys); }), ErrorCode::wrong_system_kind);
}

TEST(Registry, UnknownNameListsAvailable) {
  try {
    systems::find("nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unknown_name);
    EXPECT_NE(std::string(e.what()).find("pendulum"), std::string::npos);
  }
}

}  // namespace
}  // namespace symplectic
