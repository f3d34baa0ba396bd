#include "symplectic_cli/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "symplectic/error.hpp"
#include "symplectic/implicit_solver.hpp"
#include "symplectic/systems.hpp"

namespace symplectic::cli {

namespace {

using nlohmann::json;

template <typename T>
void read(const json& doc, const char* key, T& field) {
  if (doc.contains(key)) field = doc.at(key).get<T>();
}

template <typename T>
void read(const json& doc, const char* key, std::optional<T>& field) {
  if (!doc.contains(key)) return;
  if (doc.at(key).is_null()) {
    field.reset();
  } else {
    field = doc.at(key).get<T>();
  }
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "system", "method", "methods", "alpha", "swap_xy", "solver", "tol", "max_iter", "q0", "p0", "t0", "h",
      "steps", "h_list", "horizon", "seed", "probes", "expect_symplectic", "vertices", "radius",
      "sample_every", "out"};
  return keys;
}

std::string joined(const std::vector<std::string>& names) {
  std::string s;
  for (const auto& n : names) s += (s.empty() ? "" : ", ") + n;
  return s;
}

}  // namespace

void apply_json(RunConfig& cfg, const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("unknown config key '" + key + "'; known keys: " + joined(keys));
    }
  }
  try {
    read(doc, "system", cfg.system);
    read(doc, "method", cfg.method);
    read(doc, "methods", cfg.methods);
    read(doc, "alpha", cfg.alpha);
    read(doc, "swap_xy", cfg.swap_xy);
    read(doc, "solver", cfg.solver);
    read(doc, "tol", cfg.tol);
    read(doc, "max_iter", cfg.max_iter);
    read(doc, "q0", cfg.q0);
    read(doc, "p0", cfg.p0);
    read(doc, "t0", cfg.t0);
    read(doc, "h", cfg.h);
    read(doc, "steps", cfg.steps);
    read(doc, "h_list", cfg.h_list);
    read(doc, "horizon", cfg.horizon);
    read(doc, "seed", cfg.seed);
    read(doc, "probes", cfg.probes);
    read(doc, "expect_symplectic", cfg.expect_symplectic);
    read(doc, "vertices", cfg.vertices);
    read(doc, "radius", cfg.radius);
    read(doc, "sample_every", cfg.sample_every);
    read(doc, "out", cfg.out);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config has a field of the wrong type: ") + e.what());
  }
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  RunConfig cfg;
  apply_json(cfg, buf.str());
  return cfg;
}

std::string to_json(const RunConfig& cfg) {
  json doc;
  doc["system"] = cfg.system;
  doc["method"] = cfg.method;
  doc["methods"] = cfg.methods;
  doc["alpha"] = cfg.alpha ? json(*cfg.alpha) : json(nullptr);
  doc["swap_xy"] = cfg.swap_xy;
  doc["solver"] = cfg.solver;
  doc["tol"] = cfg.tol;
  doc["max_iter"] = cfg.max_iter;
  doc["q0"] = cfg.q0;
  doc["p0"] = cfg.p0;
  doc["t0"] = cfg.t0;
  doc["h"] = cfg.h;
  doc["steps"] = cfg.steps;
  doc["h_list"] = cfg.h_list;
  doc["horizon"] = cfg.horizon;
  doc["seed"] = cfg.seed;
  doc["probes"] = cfg.probes;
  doc["expect_symplectic"] = cfg.expect_symplectic ? json(*cfg.expect_symplectic) : json(nullptr);
  doc["vertices"] = cfg.vertices;
  doc["radius"] = cfg.radius;
  doc["sample_every"] = cfg.sample_every;
  return doc.dump();
}

MethodSpec resolve_method(const RunConfig& cfg, const std::string& name) {
  const auto scheme = parse_scheme(name);
  if (!scheme) {
    std::vector<std::string> names;
    for (Scheme s : all_schemes()) names.emplace_back(scheme_name(s));
    throw ConfigError("unknown method '" + name + "'; available: " + joined(names));
  }
  MethodSpec m = make_method(*scheme);
  if (cfg.alpha) m.alpha = *cfg.alpha;
  m.swap_xy = cfg.swap_xy;
  try {
    m.solver.method = parse_solver_method(cfg.solver);
    m.solver.tol = cfg.tol;
    m.solver.max_iter = cfg.max_iter;
    validate(m.solver);
    validate(m);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return m;
}

SystemDef resolve_system(const RunConfig& cfg) {
  try {
    return systems::find(cfg.system);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

PhaseState resolve_state(const RunConfig& cfg, const SystemDef& sys) {
  PhaseState s;
  try {
    s = make_state(cfg.q0, cfg.p0, cfg.t0);
  } catch (const Error& e) {
    throw ConfigError(std::string("initial state: ") + e.what());
  }
  if (s.dim() != sys.dim) {
    throw ConfigError("initial state has dimension " + std::to_string(s.dim()) + " but system '" + sys.name +
                      "' has " + std::to_string(sys.dim) + " degrees of freedom");
  }
  return s;
}

}  // namespace symplectic::cli
