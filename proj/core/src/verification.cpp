#include "symplectic/verification.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "symplectic/error.hpp"

namespace symplectic {

namespace {

Eigen::VectorXd pack(const PhaseState& s) {
  const auto n = static_cast<Eigen::Index>(s.dim());
  Eigen::VectorXd z(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    z[i] = s.q[static_cast<std::size_t>(i)];
    z[n + i] = s.p[static_cast<std::size_t>(i)];
  }
  return z;
}

PhaseState unpack(const Eigen::VectorXd& z, double t) {
  const auto n = z.size() / 2;
  PhaseState s{Vector(static_cast<std::size_t>(n)), Vector(static_cast<std::size_t>(n)), t};
  for (Eigen::Index i = 0; i < n; ++i) {
    s.q[static_cast<std::size_t>(i)] = z[i];
    s.p[static_cast<std::size_t>(i)] = z[n + i];
  }
  return s;
}

double state_error(const PhaseState& a, const PhaseState& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    m = std::max({m, std::abs(a.q[i] - b.q[i]), std::abs(a.p[i] - b.p[i])});
  }
  return m;
}

FieldJet swap_xy(const FieldJet& j) {
  return FieldJet{j.value, j.dy, j.dx, j.dt, j.dyy, j.dxx, j.dtt, j.dxy, j.dyt, j.dxt};
}

// Corrected operator applied to the target jet u, with f and g the flow.
double apply_phi(const FieldJet& f, const FieldJet& g, const FieldJet& u, double a) {
  const double f0 = f.value, g0 = g.value;
  const double second = -f0 * f0 * u.dxx / 24.0 + g0 * g0 * u.dyy / 12.0 +
                        ((a * a - a) / 2.0 + 1.0 / 12.0) * u.dtt +
                        (1.0 / 6.0 - a / 2.0) * g0 * u.dyt - f0 * u.dxt / 12.0 -
                        f0 * g0 * u.dxy / 12.0;
  const double along_x = (a / 2.0 - 1.0 / 6.0) * f.dt + f0 * f.dx / 12.0 - g0 * f.dy / 6.0;
  const double along_y = g.dt / 12.0 + f0 * g.dx / 12.0 + g0 * g.dy / 12.0;
  return second + along_x * u.dx + along_y * u.dy;
}

// h^2 coefficients of the first order general scheme (q then p).
Vector first_order_general(const FieldJet& f, const FieldJet& g, double a) {
  const double d_fg_dy = f.dy * g.value + f.value * g.dy;
  const double d_fg_dx = f.dx * g.value + f.value * g.dx;
  return {-0.5 * d_fg_dy + (a - 0.5) * f.dt, 0.5 * d_fg_dx + (a - 0.5) * g.dt};
}

void require_positive_sorted(std::vector<double>& h_list, std::size_t min_count, const char* what) {
  if (h_list.size() < min_count) {
    throw Error(ErrorCode::invalid_argument, std::string(what) + " needs at least " +
                                                 std::to_string(min_count) + " step sizes");
  }
  for (double h : h_list) {
    if (!(h > 0.0) || !std::isfinite(h)) {
      throw Error(ErrorCode::invalid_argument, std::string(what) + ": step sizes must be positive");
    }
  }
  std::sort(h_list.begin(), h_list.end(), std::greater<>());
  if (std::adjacent_find(h_list.begin(), h_list.end()) != h_list.end()) {
    throw Error(ErrorCode::invalid_argument, std::string(what) + ": step sizes must be distinct");
  }
}

}  // namespace

Eigen::MatrixXd step_jacobian(const OneStepMap& stepper, const PhaseState& s, double h, double fd_step) {
  if (!(fd_step > 0.0)) throw Error(ErrorCode::invalid_argument, "fd_step must be > 0");
  const Eigen::VectorXd z = pack(s);
  const auto m = z.size();
  Eigen::MatrixXd jac(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double dz = fd_step * std::max(1.0, std::abs(z[j]));
    Eigen::VectorXd zp = z, zm = z;
    zp[j] += dz;
    zm[j] -= dz;
    const Eigen::VectorXd up = pack(stepper(unpack(zp, s.t), h));
    const Eigen::VectorXd down = pack(stepper(unpack(zm, s.t), h));
    jac.col(j) = (up - down) / (2.0 * dz);
  }
  if (!jac.allFinite()) throw Error(ErrorCode::non_finite, "step Jacobian has non-finite entries");
  return jac;
}

Eigen::MatrixXd symplectic_form(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * k, 2 * k);
  omega.topRightCorner(k, k) = Eigen::MatrixXd::Identity(k, k);
  omega.bottomLeftCorner(k, k) = -Eigen::MatrixXd::Identity(k, k);
  return omega;
}

double symplectic_defect(const Eigen::MatrixXd& jacobian) {
  if (jacobian.rows() != jacobian.cols() || jacobian.rows() % 2 != 0 || jacobian.rows() == 0) {
    throw Error(ErrorCode::dimension_mismatch, "symplectic defect needs a square matrix of even size");
  }
  const Eigen::MatrixXd omega = symplectic_form(static_cast<std::size_t>(jacobian.rows() / 2));
  return (jacobian.transpose() * omega * jacobian - omega).cwiseAbs().maxCoeff();
}

double BracketResiduals::max() const {
  return std::max({pp.size() ? pp.maxCoeff() : 0.0, qq.size() ? qq.maxCoeff() : 0.0,
                   pq.size() ? pq.maxCoeff() : 0.0});
}

BracketResiduals brackets_from_jacobian(const Eigen::MatrixXd& jacobian) {
  if (jacobian.rows() != jacobian.cols() || jacobian.rows() % 2 != 0) {
    throw Error(ErrorCode::dimension_mismatch, "bracket residuals need a square matrix of even size");
  }
  const Eigen::Index n = jacobian.rows() / 2;
  // Rows: q_i then p_i; columns: derivatives w.r.t. q0 then p0.
  auto dq0 = [&](Eigen::Index row) { return jacobian.block(row, 0, 1, n); };
  auto dp0 = [&](Eigen::Index row) { return jacobian.block(row, n, 1, n); };
  auto bracket = [&](Eigen::Index u, Eigen::Index v) {
    return (dp0(u).array() * dq0(v).array() - dq0(u).array() * dp0(v).array()).sum();
  };
  BracketResiduals out{Eigen::MatrixXd(n, n), Eigen::MatrixXd(n, n), Eigen::MatrixXd(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) {
      out.pp(i, k) = std::abs(bracket(n + i, n + k));
      out.qq(i, k) = std::abs(bracket(i, k));
      out.pq(i, k) = std::abs(bracket(n + i, k) - (i == k ? 1.0 : 0.0));
    }
  }
  return out;
}

BracketResiduals poisson_brackets(const OneStepMap& stepper, const PhaseState& s, double h,
                                  double fd_step) {
  return brackets_from_jacobian(step_jacobian(stepper, s, h, fd_step));
}

std::vector<PhaseState> regular_polygon(const PhaseState& center, double radius, std::size_t vertices) {
  if (center.dim() != 1) throw Error(ErrorCode::dimension_mismatch, "polygons need one degree of freedom");
  if (vertices < 3) throw Error(ErrorCode::invalid_argument, "a polygon needs at least 3 vertices");
  std::vector<PhaseState> out;
  out.reserve(vertices);
  const double two_pi = 2.0 * std::acos(-1.0);
  for (std::size_t k = 0; k < vertices; ++k) {
    const double phi = two_pi * static_cast<double>(k) / static_cast<double>(vertices);
    out.push_back(PhaseState{{center.q[0] + radius * std::cos(phi)},
                             {center.p[0] + radius * std::sin(phi)}, center.t});
  }
  return out;
}

double shoelace_area(std::span<const PhaseState> polygon) {
  double twice = 0.0;
  for (std::size_t k = 0; k < polygon.size(); ++k) {
    const auto& a = polygon[k];
    const auto& b = polygon[(k + 1) % polygon.size()];
    twice += a.q[0] * b.p[0] - b.q[0] * a.p[0];
  }
  return 0.5 * std::abs(twice);
}

std::vector<double> polygon_area_drift(const OneStepMap& stepper, std::vector<PhaseState> polygon,
                                       double h, std::size_t n_steps) {
  if (polygon.size() < 3) throw Error(ErrorCode::invalid_argument, "a polygon needs at least 3 vertices");
  for (const auto& v : polygon) {
    if (v.dim() != 1) throw Error(ErrorCode::dimension_mismatch, "polygons need one degree of freedom");
  }
  const double initial = shoelace_area(polygon);
  if (initial < 1e-14) throw Error(ErrorCode::degenerate_polygon, "polygon area is below 1e-14");
  std::vector<double> ratios;
  ratios.reserve(n_steps + 1);
  ratios.push_back(1.0);
  for (std::size_t k = 0; k < n_steps; ++k) {
    for (auto& v : polygon) v = stepper(v, h);
    ratios.push_back(shoelace_area(polygon) / initial);
  }
  return ratios;
}

OrderFit measured_order(const OneStepMap& stepper, const PhaseState& s, const ExactSolution& reference,
                        std::vector<double> h_list, double horizon) {
  require_positive_sorted(h_list, 4, "order fit");
  if (!(horizon > 0.0)) throw Error(ErrorCode::invalid_argument, "horizon must be > 0");
  OrderFit fit;
  std::vector<double> xs, ys;
  for (double h : h_list) {
    const auto steps = std::max<long long>(1, std::llround(horizon / h));
    PhaseState x = s;
    for (long long k = 0; k < steps; ++k) {
      x = stepper(x, h);
      x.t = s.t + static_cast<double>(k + 1) * h;
    }
    const double err = state_error(x, reference.evolve(s, x.t));
    fit.h.push_back(h);
    fit.error.push_back(err);
    if (err >= kErrorFloor && std::isfinite(err)) {
      xs.push_back(std::log(h));
      ys.push_back(std::log(err));
    }
  }
  fit.points_used = xs.size();
  if (xs.size() < 3) {
    throw Error(ErrorCode::unresolved, "order fit UNRESOLVED: errors at the roundoff floor");
  }
  const double m = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / m;
    my += ys[i] / m;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  const double intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + fit.slope * xs[i]);
    ssr += r * r;
  }
  fit.stderr_slope = std::sqrt(ssr / (m - 2.0) / sxx);
  return fit;
}

Vector local_error_constant(const OneStepMap& stepper, const PhaseState& s, int order,
                            const ExactSolution& reference, std::vector<double> h_list) {
  if (order < 1) throw Error(ErrorCode::invalid_argument, "order must be >= 1");
  require_positive_sorted(h_list, 3, "local error extrapolation");
  const double ratio = h_list[0] / h_list[1];
  for (std::size_t k = 1; k + 1 < h_list.size(); ++k) {
    if (std::abs(h_list[k] / h_list[k + 1] - ratio) > 1e-9 * ratio) {
      throw Error(ErrorCode::invalid_argument, "local error extrapolation needs a geometric h list");
    }
  }
  const std::size_t comps = 2 * s.dim();
  std::vector<Vector> table;  // table[k][c]
  for (double h : h_list) {
    const PhaseState approx = stepper(s, h);
    const PhaseState exact = reference.evolve(s, s.t + h);
    const double scale = std::pow(h, order + 1);
    Vector row(comps);
    for (std::size_t i = 0; i < s.dim(); ++i) {
      row[i] = (approx.q[i] - exact.q[i]) / scale;
      row[s.dim() + i] = (approx.p[i] - exact.p[i]) / scale;
    }
    table.push_back(std::move(row));
  }
  // Each level removes the next power of h from the expansion.
  const std::size_t levels = std::min<std::size_t>(2, h_list.size() - 2);
  for (std::size_t j = 1; j <= levels; ++j) {
    const double w = std::pow(ratio, static_cast<double>(j));
    std::vector<Vector> next;
    for (std::size_t k = 0; k + 1 < table.size(); ++k) {
      Vector row(comps);
      for (std::size_t c = 0; c < comps; ++c) row[c] = (w * table[k + 1][c] - table[k][c]) / (w - 1.0);
      next.push_back(std::move(row));
    }
    table = std::move(next);
  }
  const Vector& a = table[table.size() - 2];
  const Vector& b = table.back();
  for (std::size_t c = 0; c < comps; ++c) {
    const double allowed = std::max(0.05 * std::max(std::abs(a[c]), std::abs(b[c])), 1e-6);
    if (std::abs(a[c] - b[c]) > allowed) {
      std::ostringstream os;
      os << "extrapolated error constant of component " << c << " did not settle (" << a[c] << " vs "
         << b[c] << ")";
      throw Error(ErrorCode::non_convergent_extrapolation, os.str());
    }
  }
  return b;
}

double phi_operator_eval(const SystemDef& sys, const PhaseState& s, double alpha, PhiTarget target,
                         bool allow_fd_fallback) {
  if (sys.dim != 1 || s.dim() != 1) {
    throw Error(ErrorCode::dimension_mismatch, "the error operator is defined for one degree of freedom");
  }
  if (!sys.flow_jet && !allow_fd_fallback) {
    throw Error(ErrorCode::unavailable, "system '" + sys.name + "' has no analytic second derivatives");
  }
  const FlowJet jet = eval_flow_jet(sys, s.q[0], s.p[0], s.t);
  return apply_phi(jet.f, jet.g, target == PhiTarget::f ? jet.f : jet.g, alpha);
}

LocalErrorCoefficients analytic_local_error(const MethodSpec& method, const SystemDef& sys,
                                            const PhaseState& s) {
  if (sys.dim != 1 || s.dim() != 1) {
    throw Error(ErrorCode::unavailable, "no closed-form local error for more than one degree of freedom");
  }
  const double a = method.alpha;
  const FlowJet jet = eval_flow_jet(sys, s.q[0], s.p[0], s.t);
  const FieldJet& f = jet.f;
  const FieldJet& g = jet.g;
  // For x'' = F(x, t): F is g and the velocity is f = p.
  const double v = s.p[0];
  const FieldJet& force = g;

  auto require_scalar = [&] {
    if (!is_separable(sys.kind)) {
      throw Error(ErrorCode::wrong_system_kind, "scheme needs an x'' = f(x, t) system");
    }
  };
  auto midpoint_second_order = [&] {
    return Vector{(force.dx * v + force.dt) / 12.0,
                  -(0.5 * force.dxx * v * v + force.dxt * v + 0.5 * force.dtt +
                    2.0 * force.dx * force.value) /
                      12.0};
  };

  switch (method.scheme) {
    case Scheme::euler_a_31:
      require_scalar();
      return {1, {-0.5 * force.value, 0.5 * v * force.dx + (a - 0.5) * force.dt}};
    case Scheme::euler_b_33:
      require_scalar();
      return {1, {0.5 * force.value, -0.5 * v * force.dx + (a - 0.5) * force.dt}};
    case Scheme::second_41:
      require_scalar();
      return {2,
              {-v * force.dx / 6.0 + (a / 2.0 - 1.0 / 6.0) * force.dt,
               force.dxx * v * v / 12.0 + (1.0 / 6.0 - a / 2.0) * force.dxt * v +
                   ((a * a - a) / 2.0 + 1.0 / 12.0) * force.dtt + force.value * force.dx / 12.0}};
    case Scheme::second_43:
      require_scalar();
      return {2, midpoint_second_order()};
    case Scheme::leapfrog_75:
      require_scalar();
      return {2, midpoint_second_order()};
    case Scheme::implicit1_51:
    case Scheme::ndof1_73:
      if (method.swap_xy) {
        // Same formula in the exchanged variables.
        const Vector c = first_order_general(swap_xy(g), swap_xy(f), a);
        return {1, {c[1], c[0]}};
      }
      return {1, first_order_general(f, g, a)};
    case Scheme::implicit2_61:
    case Scheme::ndof2_74:
      if (method.swap_xy) {
        const FieldJet fs = swap_xy(g), gs = swap_xy(f);
        return {2, {apply_phi(fs, gs, gs, a), apply_phi(fs, gs, fs, a)}};
      }
      return {2, {apply_phi(f, g, f, a), apply_phi(f, g, g, a)}};
    case Scheme::baseline_euler:
    case Scheme::baseline_rk4:
      break;
  }
  throw Error(ErrorCode::unavailable,
              "no closed-form local error for " + std::string(scheme_name(method.scheme)));
}

bool CertReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

CertReport certify(const SystemDef& sys, const MethodSpec& method, const PhaseState& s0,
                   const CertifyOptions& options) {
  validate(method);
  const Tolerances& tol = options.tolerances;
  const bool expect = options.expect_symplectic.value_or(is_symplectic(method.scheme));
  CertReport report;
  report.system = sys.name;
  report.method = method;
  if (!sys.has_analytic_gradients()) {
    report.warnings.push_back("analytic gradients missing; central differences used");
  }

  // Jacobian probes need the implicit stages solved well below the
  // finite-difference perturbation.
  MethodSpec probe_method = method;
  probe_method.solver.tol = std::min(probe_method.solver.tol, 1e-14);
  const OneStepMap probe_stepper = make_stepper(sys, probe_method);

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> coord(-options.box, options.box);
  std::uniform_real_distribution<double> time(0.0, 1.0);
  std::size_t solver_failures = 0;
  double worst_bracket = -1.0;
  for (std::size_t k = 0; k < options.probes; ++k) {
    PhaseState s{Vector(sys.dim), Vector(sys.dim), 0.0};
    for (auto& v : s.q) v = coord(rng);
    for (auto& v : s.p) v = coord(rng);
    s.t = time(rng);
    for (double h : options.probe_h) {
      try {
        const Eigen::MatrixXd jac = step_jacobian(probe_stepper, s, h, options.fd_step);
        report.det_defect = std::max(report.det_defect, std::abs(jac.determinant() - 1.0));
        report.symp_defect = std::max(report.symp_defect, symplectic_defect(jac));
        BracketResiduals br = brackets_from_jacobian(jac);
        if (br.max() > worst_bracket) {
          worst_bracket = br.max();
          report.bracket_residuals = std::move(br);
        }
      } catch (const SolverError& e) {
        ++solver_failures;
        report.warnings.push_back(std::string("probe solver failure: ") + e.what());
      }
    }
  }
  {
    std::ostringstream os;
    os << options.probes << " states uniform in [-" << options.box << ", " << options.box << "]^"
       << 2 * sys.dim << ", t in [0, 1], seed " << options.seed << ", h in {";
    for (std::size_t i = 0; i < options.probe_h.size(); ++i) os << (i ? ", " : "") << options.probe_h[i];
    os << "}, fd_step " << options.fd_step << ", probe solver tol " << probe_method.solver.tol;
    report.probes_used = os.str();
  }
  if (solver_failures > 0) {
    report.checks.push_back({"probe_solver", static_cast<double>(solver_failures), 0.0, false,
                             "implicit stage failed at some probes"});
  }
  if (expect) {
    report.checks.push_back({"det_defect", report.det_defect, tol.det, report.det_defect <= tol.det, ""});
    report.checks.push_back({"symplectic_defect", report.symp_defect, tol.symplectic,
                             report.symp_defect <= tol.symplectic, ""});
    const double br = std::max(worst_bracket, 0.0);
    report.checks.push_back({"poisson_brackets", br, tol.bracket, br <= tol.bracket, ""});
  }

  const ExactSolution reference = reference_solution(sys);
  const OneStepMap stepper = make_stepper(sys, method);
  const int nominal = nominal_order(method.scheme);
  const double order_tol = nominal >= 4 ? tol.order_high : tol.order;
  try {
    report.order = measured_order(stepper, s0, reference, options.order_h);
    const double slope = report.order->slope;
    report.checks.push_back({"order", slope, order_tol, std::abs(slope - nominal) <= order_tol,
                             "expected " + std::to_string(nominal)});
  } catch (const Error& e) {
    if (e.code() == ErrorCode::invalid_argument) throw;
    report.checks.push_back({"order", 0.0, order_tol, false, e.what()});
  }

  try {
    const LocalErrorCoefficients analytic = analytic_local_error(method, sys, s0);
    report.analytic_constants = analytic.coefficients;
    report.empirical_constants =
        local_error_constant(stepper, s0, analytic.order, reference, options.error_h);
    double worst = 1.0;
    bool any = false;
    for (std::size_t c = 0; c < analytic.coefficients.size(); ++c) {
      if (std::abs(analytic.coefficients[c]) <= tol.coefficient_floor) continue;
      const double r = report.empirical_constants[c] / analytic.coefficients[c];
      if (!any || std::abs(r - 1.0) > std::abs(worst - 1.0)) worst = r;
      any = true;
    }
    if (any) {
      report.error_constant_ratio = worst;
      report.checks.push_back({"error_constant", worst, tol.error_constant,
                               std::abs(worst - 1.0) <= tol.error_constant, "empirical / analytic"});
    } else {
      report.warnings.push_back("all analytic error coefficients below floor; ratio not checked");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::non_convergent_extrapolation) {
      report.checks.push_back({"error_constant", 0.0, tol.error_constant, false, e.what()});
    } else if (e.code() == ErrorCode::unavailable || e.code() == ErrorCode::wrong_system_kind) {
      report.warnings.push_back(std::string("error constant not checked: ") + e.what());
    } else {
      throw;
    }
  }
  return report;
}

}  // namespace symplectic
