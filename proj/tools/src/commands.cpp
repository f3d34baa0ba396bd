#include "symplectic_cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <cstdio>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "symplectic/error.hpp"
#include "symplectic/integrators.hpp"
#include "symplectic/reference.hpp"
#include "symplectic/systems.hpp"
#include "symplectic/verification.hpp"
#include "symplectic_cli/config.hpp"

namespace symplectic::cli {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

using nlohmann::json;

// Command-line values; each is applied on top of the config file only when
// the flag was given.
struct Flags {
  std::string config;
  RunConfig values;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overrides;
  bool expect_symplectic = false;
};

void add_common(CLI::App& cmd, Flags& f) {
  RunConfig& v = f.values;
  auto bind = [&f](CLI::Option* opt, std::function<void(RunConfig&)> apply) {
    f.overrides.emplace_back(opt, std::move(apply));
  };
  cmd.add_option("--config", f.config, "JSON config file; flags override its values")->check(CLI::ExistingFile);
  bind(cmd.add_option("--system", v.system, "system name (" + [] {
         std::string s;
         for (const auto& n : systems::names()) s += (s.empty() ? "" : ", ") + n;
         return s;
       }() + ")"),
       [&v](RunConfig& c) { c.system = v.system; });
  bind(cmd.add_option("--method", v.method, "scheme name, e.g. leapfrog-7.5"),
       [&v](RunConfig& c) { c.method = v.method; });
  bind(cmd.add_option("--alpha", v.alpha, "time offset parameter in [0, 1]"),
       [&v](RunConfig& c) { c.alpha = v.alpha; });
  bind(cmd.add_flag("--swap-xy", v.swap_xy, "exchange the roles of q and p (first-5.1, second-6.1)"),
       [&v](RunConfig& c) { c.swap_xy = v.swap_xy; });
  bind(cmd.add_option("--h", v.h, "step size"), [&v](RunConfig& c) { c.h = v.h; });
  bind(cmd.add_option("--steps", v.steps, "number of steps"), [&v](RunConfig& c) { c.steps = v.steps; });
  bind(cmd.add_option("--q0", v.q0, "initial positions, comma separated")->delimiter(','),
       [&v](RunConfig& c) { c.q0 = v.q0; });
  bind(cmd.add_option("--p0", v.p0, "initial momenta, comma separated")->delimiter(','),
       [&v](RunConfig& c) { c.p0 = v.p0; });
  bind(cmd.add_option("--t0", v.t0, "initial time"), [&v](RunConfig& c) { c.t0 = v.t0; });
  bind(cmd.add_option("--solver", v.solver, "implicit solver: fixed, aitken or newton")
           ->check(CLI::IsMember({"fixed", "aitken", "newton"})),
       [&v](RunConfig& c) { c.solver = v.solver; });
  bind(cmd.add_option("--tol", v.tol, "implicit solver tolerance"), [&v](RunConfig& c) { c.tol = v.tol; });
  bind(cmd.add_option("--max-iter", v.max_iter, "implicit solver iteration budget"),
       [&v](RunConfig& c) { c.max_iter = v.max_iter; });
  bind(cmd.add_option("--out", v.out, "output file (default: standard output)"),
       [&v](RunConfig& c) { c.out = v.out; });
  bind(cmd.add_option("--seed", v.seed, "seed for random probe states"), [&v](RunConfig& c) { c.seed = v.seed; });
}

void add_h_list(CLI::App& cmd, Flags& f) {
  RunConfig& v = f.values;
  auto* opt = cmd.add_option("--h-list", v.h_list, "step sizes, comma separated")->delimiter(',');
  f.overrides.emplace_back(opt, [&v](RunConfig& c) { c.h_list = v.h_list; });
}

RunConfig effective(const Flags& f) {
  RunConfig cfg = f.config.empty() ? RunConfig{} : load_config_file(f.config);
  for (const auto& [opt, apply] : f.overrides) {
    if (opt->count() > 0) apply(cfg);
  }
  return cfg;
}

// Primary artifact goes to --out (or stdout); secondary text goes to stdout
// when --out is set and to stderr otherwise.
class Sinks {
 public:
  Sinks(const RunConfig& cfg, std::ostream& out, std::ostream& err) : out_(out), err_(err), to_file_(!cfg.out.empty()) {
    if (to_file_) {
      file_.open(cfg.out, std::ios::binary | std::ios::trunc);
      if (!file_) throw ConfigError("cannot open output file '" + cfg.out + "'");
    }
  }
  std::ostream& primary() { return to_file_ ? file_ : out_; }
  std::ostream& secondary() { return to_file_ ? out_ : err_; }

 private:
  std::ostream& out_;
  std::ostream& err_;
  bool to_file_;
  std::ofstream file_;
};

json method_json(const MethodSpec& m) {
  return json{{"scheme", std::string(scheme_name(m.scheme))},
              {"alpha", m.alpha},
              {"swap_xy", m.swap_xy},
              {"solver", {{"method", std::string(to_string(m.solver.method))}, {"tol", m.solver.tol},
                          {"max_iter", m.solver.max_iter}}}};
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

// printf-style formatting for the human-readable tables.
template <typename... Args>
std::string short_text(const char* format, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

void write_rows(std::ostream& os, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << format_double(values[i]);
  os << '\n';
}

int cmd_integrate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SystemDef sys = resolve_system(cfg);
  const MethodSpec method = resolve_method(cfg, cfg.method);
  const PhaseState s0 = resolve_state(cfg, sys);
  if (cfg.steps > 0 && (!std::isfinite(cfg.h) || cfg.h == 0.0)) {
    throw ConfigError("h must be finite and nonzero when steps > 0");
  }
  Trajectory tr;
  try {
    tr = integrate(sys, s0, method, cfg.h, cfg.steps);
  } catch (const SolverError& e) {
    err << "error: solver failure at step " << e.step_index().value_or(0) << ": " << e.what() << '\n';
    return kExitSolver;
  }
  Sinks sinks(cfg, out, err);
  std::ostream& os = sinks.primary();
  os << "# config: " << to_json(cfg) << '\n';
  os << 't';
  for (std::size_t i = 0; i < sys.dim; ++i) os << ",q_" << i;
  for (std::size_t i = 0; i < sys.dim; ++i) os << ",p_" << i;
  os << ",H\n";
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    const PhaseState& s = tr.states[k];
    std::vector<double> row{s.t};
    row.insert(row.end(), s.q.begin(), s.q.end());
    row.insert(row.end(), s.p.begin(), s.p.end());
    row.push_back(tr.energies[k]);
    write_rows(os, row);
  }
  return kExitOk;
}

int cmd_certify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SystemDef sys = resolve_system(cfg);
  const MethodSpec method = resolve_method(cfg, cfg.method);
  const PhaseState s0 = resolve_state(cfg, sys);
  if (cfg.h_list.size() < 4) throw ConfigError("the order fit needs at least 4 step sizes");
  CertifyOptions options;
  options.seed = cfg.seed;
  options.probes = cfg.probes;
  options.order_h = cfg.h_list;
  options.error_h = cfg.h_list;
  options.expect_symplectic = cfg.expect_symplectic;
  CertReport report;
  try {
    report = certify(sys, method, s0, options);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::invalid_argument) throw ConfigError(e.what());
    throw;
  }

  json doc;
  doc["config"] = json::parse(to_json(cfg));
  doc["system"] = report.system;
  doc["method"] = method_json(report.method);
  doc["det_defect"] = report.det_defect;
  doc["symp_defect"] = report.symp_defect;
  doc["bracket_residuals"] = {{"pp", matrix_json(report.bracket_residuals.pp)},
                              {"qq", matrix_json(report.bracket_residuals.qq)},
                              {"pq", matrix_json(report.bracket_residuals.pq)},
                              {"max", report.bracket_residuals.pp.size() ? report.bracket_residuals.max() : 0.0}};
  if (report.order) {
    doc["measured_order"] = {{"slope", report.order->slope}, {"stderr", report.order->stderr_slope},
                             {"points_used", report.order->points_used}, {"h", report.order->h},
                             {"error", report.order->error}};
  } else {
    doc["measured_order"] = nullptr;
  }
  doc["error_constant_ratio"] = report.error_constant_ratio ? json(*report.error_constant_ratio) : json(nullptr);
  doc["empirical_constants"] = report.empirical_constants;
  doc["analytic_constants"] = report.analytic_constants;
  doc["probes_used"] = report.probes_used;
  doc["warnings"] = report.warnings;
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"passed", c.passed},
                      {"detail", c.detail}});
  }
  doc["checks"] = checks;
  doc["passed"] = report.passed();

  Sinks sinks(cfg, out, err);
  sinks.primary() << doc.dump(2) << '\n';
  std::ostream& table = sinks.secondary();
  table << "certify " << scheme_name(method.scheme) << " on " << sys.name << '\n';
  table << short_text("%-20s %-12s %-12s %s\n", "check", "value", "limit", "result");
  for (const auto& c : report.checks) {
    table << short_text("%-20s %-12.4g %-12.4g %s", c.name.c_str(), c.value, c.limit, c.passed ? "PASS" : "FAIL");
    if (!c.detail.empty()) table << "  (" << c.detail << ")";
    table << '\n';
  }
  for (const auto& w : report.warnings) table << "warning: " << w << '\n';
  table << (report.passed() ? "certified\n" : "NOT certified\n");
  return report.passed() ? kExitOk : kExitCertification;
}

int cmd_order(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SystemDef sys = resolve_system(cfg);
  const MethodSpec method = resolve_method(cfg, cfg.method);
  const PhaseState s0 = resolve_state(cfg, sys);
  if (cfg.h_list.size() < 4) throw ConfigError("the order fit needs at least 4 step sizes");
  OrderFit fit;
  try {
    fit = measured_order(make_stepper(sys, method), s0, reference_solution(sys), cfg.h_list, cfg.horizon);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::invalid_argument) throw ConfigError(e.what());
    if (e.code() == ErrorCode::unresolved) {
      err << "error: " << e.what() << '\n';
      return kExitCertification;
    }
    throw;
  }
  Sinks sinks(cfg, out, err);
  std::ostream& os = sinks.primary();
  os << "# config: " << to_json(cfg) << '\n';
  os << "h,error_inf\n";
  for (std::size_t i = 0; i < fit.h.size(); ++i) write_rows(os, {fit.h[i], fit.error[i]});
  const json summary{{"slope", fit.slope},
                     {"stderr", fit.stderr_slope},
                     {"points_used", fit.points_used},
                     {"nominal_order", nominal_order(method.scheme)}};
  sinks.secondary() << summary.dump() << '\n';
  return kExitOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.methods.size() < 2) throw ConfigError("compare needs at least 2 methods");
  const SystemDef sys = resolve_system(cfg);
  const PhaseState s0 = resolve_state(cfg, sys);
  std::vector<MethodSpec> methods;
  for (const auto& name : cfg.methods) methods.push_back(resolve_method(cfg, name));
  if (cfg.steps == 0) throw ConfigError("compare needs steps > 0");
  if (!std::isfinite(cfg.h) || cfg.h == 0.0) throw ConfigError("h must be finite and nonzero");
  const std::size_t every = cfg.sample_every > 0 ? cfg.sample_every : std::max<std::size_t>(1, cfg.steps / 1000);
  std::vector<std::size_t> samples;
  for (std::size_t k = 0; k <= cfg.steps; k += every) samples.push_back(k);
  if (samples.back() != cfg.steps) samples.push_back(cfg.steps);

  json doc;
  doc["config"] = json::parse(to_json(cfg));
  doc["system"] = sys.name;
  doc["sample_steps"] = samples;
  doc["methods"] = json::array();
  bool any_failed = false;
  for (const MethodSpec& m : methods) {
    json entry;
    entry["method"] = method_json(m);
    std::vector<double> drift{0.0};
    const double h0 = eval_energy(sys, s0);
    double max_drift = 0.0;
    PhaseState s = s0;
    std::size_t completed = 0;
    std::string failure;
    for (std::size_t k = 1; k <= cfg.steps; ++k) {
      try {
        s = step(sys, s, m, cfg.h);
      } catch (const SolverError& e) {
        failure = "solver failure at step " + std::to_string(k) + ": " + e.what();
        break;
      }
      s.t = s0.t + static_cast<double>(k) * cfg.h;
      const double d = eval_energy(sys, s) - h0;
      max_drift = std::max(max_drift, std::abs(d));
      drift.push_back(d);
      completed = k;
    }
    json energy = json::array();
    for (std::size_t k : samples) {
      if (k <= completed) energy.push_back(drift[k]);
    }
    entry["completed_steps"] = completed;
    entry["max_abs_energy_drift"] = max_drift;
    entry["energy_drift"] = energy;
    entry["area_drift"] = nullptr;
    entry["max_abs_area_drift"] = nullptr;
    if (sys.dim == 1 && failure.empty()) {
      try {
        const auto ratios = polygon_area_drift(make_stepper(sys, m), regular_polygon(s0, cfg.radius, cfg.vertices),
                                               cfg.h, cfg.steps);
        json area = json::array();
        double max_area = 0.0;
        for (double r : ratios) max_area = std::max(max_area, std::abs(r - 1.0));
        for (std::size_t k : samples) area.push_back(ratios[k]);
        entry["area_drift"] = area;
        entry["max_abs_area_drift"] = max_area;
      } catch (const SolverError& e) {
        failure = std::string("solver failure while evolving the area polygon: ") + e.what();
      }
    }
    entry["partial"] = !failure.empty();
    entry["error"] = failure.empty() ? json(nullptr) : json(failure);
    any_failed = any_failed || !failure.empty();
    doc["methods"].push_back(entry);
  }
  doc["partial"] = any_failed;

  Sinks sinks(cfg, out, err);
  sinks.primary() << doc.dump() << '\n';
  std::ostream& table = sinks.secondary();
  table << short_text("%-18s %-12s %-12s %s\n", "method", "max|dH|", "max|area-1|", "status");
  for (const auto& e : doc["methods"]) {
    const std::string area =
        e["max_abs_area_drift"].is_null() ? "-" : short_text("%.4g", e["max_abs_area_drift"].get<double>());
    const std::string status = e["partial"].get<bool>() ? "partial: " + e["error"].get<std::string>() : "ok";
    table << short_text("%-18s %-12.4g %-12s %s\n", e["method"]["scheme"].get<std::string>().c_str(),
                        e["max_abs_energy_drift"].get<double>(), area.c_str(), status.c_str());
  }
  return any_failed ? kExitSolver : kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Area-preserving integrators for Hamiltonian systems", "symplectic"};
  // "--h" is the step size, so help is only reachable as --help.
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);

  Flags integrate_flags, certify_flags, order_flags, compare_flags;
  CLI::App* integrate_cmd = app.add_subcommand("integrate", "integrate one trajectory and write it as CSV");
  add_common(*integrate_cmd, integrate_flags);

  CLI::App* certify_cmd = app.add_subcommand("certify", "run the structure, order and error-constant checks");
  add_common(*certify_cmd, certify_flags);
  add_h_list(*certify_cmd, certify_flags);
  certify_cmd->add_flag("--expect-symplectic,!--no-expect-symplectic", certify_flags.expect_symplectic,
                        "require the area-preservation checks even for the baselines");
  auto* probes_opt = certify_cmd->add_option("--probes", certify_flags.values.probes, "number of random probe states");
  certify_flags.overrides.emplace_back(probes_opt, [&](RunConfig& c) { c.probes = certify_flags.values.probes; });

  CLI::App* order_cmd = app.add_subcommand("order", "measure the convergence order");
  add_common(*order_cmd, order_flags);
  add_h_list(*order_cmd, order_flags);
  auto* horizon_opt = order_cmd->add_option("--horizon", order_flags.values.horizon, "integration time per run");
  order_flags.overrides.emplace_back(horizon_opt, [&](RunConfig& c) { c.horizon = order_flags.values.horizon; });

  CLI::App* compare_cmd = app.add_subcommand("compare", "long-run energy and area drift of several methods");
  add_common(*compare_cmd, compare_flags);
  auto* methods_opt =
      compare_cmd->add_option("--methods", compare_flags.values.methods, "scheme names, comma separated")
          ->delimiter(',');
  compare_flags.overrides.emplace_back(methods_opt, [&](RunConfig& c) { c.methods = compare_flags.values.methods; });
  auto* vertices_opt = compare_cmd->add_option("--vertices", compare_flags.values.vertices, "area polygon vertices");
  compare_flags.overrides.emplace_back(vertices_opt, [&](RunConfig& c) { c.vertices = compare_flags.values.vertices; });
  auto* radius_opt = compare_cmd->add_option("--radius", compare_flags.values.radius, "area polygon radius");
  compare_flags.overrides.emplace_back(radius_opt, [&](RunConfig& c) { c.radius = compare_flags.values.radius; });
  auto* every_opt =
      compare_cmd->add_option("--sample-every", compare_flags.values.sample_every, "steps between series samples");
  compare_flags.overrides.emplace_back(every_opt,
                                       [&](RunConfig& c) { c.sample_every = compare_flags.values.sample_every; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (integrate_cmd->parsed()) return cmd_integrate(effective(integrate_flags), out, err);
    if (certify_cmd->parsed()) {
      RunConfig cfg = effective(certify_flags);
      auto* flag = certify_cmd->get_option("--expect-symplectic");
      if (flag->count() > 0) cfg.expect_symplectic = certify_flags.expect_symplectic;
      return cmd_certify(cfg, out, err);
    }
    if (order_cmd->parsed()) return cmd_order(effective(order_flags), out, err);
    return cmd_compare(effective(compare_flags), out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::solver_failure:
        return kExitSolver;
      case ErrorCode::unresolved:
      case ErrorCode::non_convergent_extrapolation:
        return kExitCertification;
      default:
        return kExitConfig;
    }
  }
}

}  // namespace symplectic::cli
