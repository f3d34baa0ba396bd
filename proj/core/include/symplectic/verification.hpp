#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "symplectic/integrators.hpp"
#include "symplectic/method.hpp"
#include "symplectic/phase_space.hpp"
#include "symplectic/reference.hpp"

namespace symplectic {

// Structural checks ---------------------------------------------------------

/// Central-difference Jacobian d(q1, p1)/d(q0, p0) of one step, 2n x 2n,
/// with absolute perturbation fd_step * max(1, |z_j|).
Eigen::MatrixXd step_jacobian(const OneStepMap& stepper, const PhaseState& s, double h,
                              double fd_step = kCbrtEpsilon);

/// Standard skew form [[0, I], [-I, 0]] of size 2n.
Eigen::MatrixXd symplectic_form(std::size_t n);

/// max |J^T Omega J - Omega|. Zero iff J is symplectic.
double symplectic_defect(const Eigen::MatrixXd& jacobian);

/// Residuals of the canonical bracket relations of the stepped (q, p) with
/// respect to the initial (q0, p0):
///   |[p_i, p_k]|, |[q_i, q_k]|, |[p_i, q_k] - delta_ik|
/// with [u, v] = sum_k (du/dp0_k dv/dq0_k - du/dq0_k dv/dp0_k), the sign
/// under which the identity map gives [p_i, q_k] = delta_ik.
struct BracketResiduals {
  Eigen::MatrixXd pp;
  Eigen::MatrixXd qq;
  Eigen::MatrixXd pq;

  double max() const;
};

BracketResiduals brackets_from_jacobian(const Eigen::MatrixXd& jacobian);

BracketResiduals poisson_brackets(const OneStepMap& stepper, const PhaseState& s, double h,
                                  double fd_step = kCbrtEpsilon);

/// Vertices of a regular polygon around (q, p) = center (one degree of freedom).
std::vector<PhaseState> regular_polygon(const PhaseState& center, double radius, std::size_t vertices);

double shoelace_area(std::span<const PhaseState> polygon);

/// Area of the evolved vertex polygon divided by the initial area, after
/// each of n_steps steps (element 0 is 1).
std::vector<double> polygon_area_drift(const OneStepMap& stepper, std::vector<PhaseState> polygon,
                                       double h, std::size_t n_steps);

// Accuracy checks -----------------------------------------------------------

struct OrderFit {
  std::vector<double> h;      // decreasing
  std::vector<double> error;  // infinity norm over (q, p) at the horizon
  double slope = 0.0;
  double stderr_slope = 0.0;
  std::size_t points_used = 0;
};

inline constexpr double kErrorFloor = 1e-13;

/// Least-squares slope of log(error) against log(h), where error is the
/// global error after round(horizon / h) steps. Needs at least four step
/// sizes (sorted internally). Points whose error is below kErrorFloor are
/// dropped; Error(unresolved) when fewer than three remain.
OrderFit measured_order(const OneStepMap& stepper, const PhaseState& s, const ExactSolution& reference,
                        std::vector<double> h_list, double horizon = 1.0);

/// Richardson-extrapolated limit, per component (q then p), of
/// (stepped - exact) / h^(order + 1) as h -> 0. h_list must have a constant
/// ratio between consecutive entries. Error(non_convergent_extrapolation)
/// when the two finest extrapolated estimates of a component differ by more
/// than 5% of their magnitude and by more than 1e-6 in absolute terms.
Vector local_error_constant(const OneStepMap& stepper, const PhaseState& s, int order,
                            const ExactSolution& reference, std::vector<double> h_list);

enum class PhiTarget { f, g };

/// Action of the second order error operator on f (target f) or g
/// (target g) at s, for time offset alpha. This is the h^3 coefficient of
/// the position (resp. momentum) error of the second order general scheme:
///
///   Phi = -1/24 f^2 d_xx + 1/12 g^2 d_yy + ((a^2 - a)/2 + 1/12) d_tt
///         + (1/6 - a/2) g d_yt - 1/12 f d_xt - 1/12 f g d_xy
///         + 1/12 g_t d_y + (a/2 - 1/6) f_t d_x + 1/12 f g_x d_y
///         + 1/12 f f_x d_x + 1/12 g g_y d_y - 1/6 g f_y d_x
///
/// Derivatives come from the system's flow jet, or from finite differences
/// when allow_fd_fallback is set (Error(unavailable) otherwise).
double phi_operator_eval(const SystemDef& sys, const PhaseState& s, double alpha, PhiTarget target,
                         bool allow_fd_fallback = true);

struct LocalErrorCoefficients {
  int order = 0;        // the h^(order + 1) coefficient is reported
  Vector coefficients;  // q component then p component
};

/// Closed-form leading local error coefficients for a one degree of freedom
/// system. Error(unavailable) for the baselines and for n > 1.
LocalErrorCoefficients analytic_local_error(const MethodSpec& method, const SystemDef& sys,
                                            const PhaseState& s);

// Certification -------------------------------------------------------------

struct Tolerances {
  double det = 1e-7;
  double symplectic = 1e-6;
  double bracket = 1e-6;
  double order = 0.1;
  double order_high = 0.15;  // fourth order baseline
  double error_constant = 0.05;
  double coefficient_floor = 1e-6;
};

struct CertifyOptions {
  std::uint64_t seed = 1;
  std::size_t probes = 20;
  std::vector<double> probe_h{0.5, 0.1, 0.02};
  double box = 1.0;  // probe states uniform in [-box, box]^(2n), t in [0, 1]
  std::vector<double> order_h{0.1, 0.05, 0.025, 0.0125, 0.00625};
  std::vector<double> error_h{0.1, 0.05, 0.025, 0.0125, 0.00625};
  double fd_step = kCbrtEpsilon;
  /// Defaults to is_symplectic(scheme).
  std::optional<bool> expect_symplectic;
  Tolerances tolerances;
};

struct CheckResult {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool passed = false;
  std::string detail;
};

struct CertReport {
  std::string system;
  MethodSpec method;
  double det_defect = 0.0;
  double symp_defect = 0.0;
  BracketResiduals bracket_residuals;  // worst probe
  std::optional<OrderFit> order;
  std::optional<double> error_constant_ratio;  // worst component, empirical / analytic
  Vector empirical_constants;
  Vector analytic_constants;
  std::string probes_used;
  std::vector<std::string> warnings;
  std::vector<CheckResult> checks;

  bool passed() const;
};

/// Runs the full battery for one scheme on one system; `s0` anchors the
/// order and error-constant measurements.
CertReport certify(const SystemDef& sys, const MethodSpec& method, const PhaseState& s0,
                   const CertifyOptions& options = {});

}  // namespace symplectic
