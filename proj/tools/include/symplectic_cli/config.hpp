#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symplectic/method.hpp"
#include "symplectic/phase_space.hpp"

namespace symplectic::cli {

/// Everything a subcommand needs. Loaded from a JSON config file, then
/// overridden field by field from the command line.
struct RunConfig {
  std::string system = "oscillator";
  std::string method = "leapfrog-7.5";
  std::vector<std::string> methods;  // compare
  std::optional<double> alpha;       // scheme default when absent
  bool swap_xy = false;
  std::string solver = "fixed";
  double tol = 1e-12;
  int max_iter = 50;
  std::vector<double> q0{1.0};
  std::vector<double> p0{0.0};
  double t0 = 0.0;
  double h = 0.1;
  std::size_t steps = 10;
  std::vector<double> h_list{0.1, 0.05, 0.025, 0.0125, 0.00625};
  double horizon = 1.0;
  std::uint64_t seed = 1;
  std::size_t probes = 20;
  std::optional<bool> expect_symplectic;
  std::size_t vertices = 64;  // compare: area polygon
  double radius = 0.1;
  std::size_t sample_every = 0;  // compare: 0 picks about 1000 samples
  std::string out;               // empty: standard output
};

/// Raised for anything that makes the configuration unusable (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads a config document; unknown keys are rejected.
RunConfig load_config_file(const std::string& path);

/// Applies the fields present in a JSON object (text) on top of `base`.
void apply_json(RunConfig& base, const std::string& json_text);

/// Canonical JSON (sorted keys, shortest round-trip numbers) of the
/// effective configuration, echoed into every output artifact. The output
/// path is left out so that the same run written to two places is identical.
std::string to_json(const RunConfig& cfg);

MethodSpec resolve_method(const RunConfig& cfg, const std::string& name);
SystemDef resolve_system(const RunConfig& cfg);
PhaseState resolve_state(const RunConfig& cfg, const SystemDef& sys);

}  // namespace symplectic::cli
