#pragma once

// Run configuration: flat key = value text with optional [species.<name>]
// sections overriding per-species physics. Unset numeric keys fall back to
// the scenario defaults during resolve(). All validation errors are
// ConfigError; nothing here touches the filesystem except parse_config_file.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vlaherm/errors.hpp"
#include "vlaherm/scenario.hpp"
#include "vlaherm/textio.hpp"

namespace vlaherm {

inline constexpr const char* code_version = "0.1.0";

struct SpeciesOverride {
  std::optional<double> alpha0, q_over_m, charge, mass;
};

struct RunConfig {
  std::string scenario;
  std::string method = "dg";  // dg | fourier
  std::string poisson;        // ldg | mixed | spectral; empty = default for method
  int nx = 0;                 // cells (dg) or wave count N_x (fourier); 0 = scenario default
  int nh = 0;                 // Hermite modes; 0 = scenario default
  int degree = -1;            // DG polynomial degree; -1 = scenario default
  double dt = 0.0;            // explicit step; 0 = derive from cfl
  double cfl = 0.0;           // 0 = scenario default
  double t_final = -1.0;      // < 0 = scenario default
  double gamma = -1.0;        // < 0 = scenario default
  double beta = 1.0;
  bool beta_over_h = false;
  bool filter = true;
  int diag_every = 1;
  std::string out_dir = "out";
  std::vector<double> snapshot_times;
  bool snapshot_times_set = false;
  long seed = 0;  // reserved; echoed in the manifest, never consumed
  std::map<std::string, SpeciesOverride> species;
};

namespace detail {

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: key '" + key + "' needs a number, got '" + v + "'");
}

inline long parse_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    long d = std::stol(v, &pos);
    if (trim(v.substr(pos)).empty()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: key '" + key + "' needs an integer, got '" + v + "'");
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw ConfigError("config: key '" + key + "' needs a boolean, got '" + v + "'");
}

inline std::vector<double> parse_times(const std::string& key, std::string v) {
  for (char& c : v)
    if (c == ',') c = ' ';
  std::istringstream is(v);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) out.push_back(parse_double(key, tok));
  return out;
}

}  // namespace detail

inline void apply_config_key(RunConfig& cfg, const std::string& section, const std::string& key,
                             const std::string& value) {
  using namespace detail;
  if (!section.empty()) {
    if (section.rfind("species.", 0) != 0 || section.size() <= 8)
      throw ConfigError("config: unknown section [" + section + "]");
    SpeciesOverride& ov = cfg.species[section.substr(8)];
    if (key == "alpha0") ov.alpha0 = parse_double(key, value);
    else if (key == "q_over_m") ov.q_over_m = parse_double(key, value);
    else if (key == "charge") ov.charge = parse_double(key, value);
    else if (key == "mass") ov.mass = parse_double(key, value);
    else throw ConfigError("config: unknown species key '" + key + "'");
    return;
  }
  if (key == "scenario") cfg.scenario = value;
  else if (key == "method") cfg.method = value;
  else if (key == "poisson") cfg.poisson = value;
  else if (key == "nx") cfg.nx = int(parse_int(key, value));
  else if (key == "nh") cfg.nh = int(parse_int(key, value));
  else if (key == "degree") cfg.degree = int(parse_int(key, value));
  else if (key == "dt") cfg.dt = parse_double(key, value);
  else if (key == "cfl") cfg.cfl = parse_double(key, value);
  else if (key == "t_final") cfg.t_final = parse_double(key, value);
  else if (key == "gamma") cfg.gamma = parse_double(key, value);
  else if (key == "beta") cfg.beta = parse_double(key, value);
  else if (key == "beta_over_h") cfg.beta_over_h = parse_bool(key, value);
  else if (key == "filter") cfg.filter = parse_bool(key, value);
  else if (key == "diag_every") cfg.diag_every = int(parse_int(key, value));
  else if (key == "out_dir") cfg.out_dir = value;
  else if (key == "snapshot_times") {
    cfg.snapshot_times = parse_times(key, value);
    cfg.snapshot_times_set = true;
  } else if (key == "seed") cfg.seed = parse_int(key, value);
  else throw ConfigError("config: unknown key '" + key + "'");
}

inline RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
      section = detail::trim(t.substr(1, t.size() - 2));
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = detail::trim(t.substr(0, eq));
    std::string value = detail::trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    apply_config_key(cfg, section, key, value);
  }
  return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

struct ResolvedConfig {
  Scenario scenario;
  std::string method, poisson;
  int nx = 0, nh = 0, degree = 0;
  double dt = 0.0, cfl = 0.0, t_final = 0.0, gamma = 0.0, beta = 1.0;
  bool beta_over_h = false, filter = true;
  int diag_every = 1;
  std::string out_dir;
  std::vector<double> snapshot_times;
  long seed = 0;
};

inline ResolvedConfig resolve(const RunConfig& cfg) {
  if (cfg.scenario.empty()) throw ConfigError("config: 'scenario' is required");
  ResolvedConfig rc;
  rc.scenario = build_scenario(cfg.scenario);

  for (const auto& [name, ov] : cfg.species) {
    bool found = false;
    for (auto& sp : rc.scenario.species) {
      if (sp.name != name) continue;
      found = true;
      if (ov.alpha0) sp.alpha0 = *ov.alpha0;
      if (ov.q_over_m) sp.q_over_m = *ov.q_over_m;
      if (ov.charge) sp.charge = *ov.charge;
      if (ov.mass) sp.mass = *ov.mass;
    }
    if (!found) throw ConfigError("config: scenario has no species named '" + name + "'");
  }

  rc.method = cfg.method;
  if (rc.method != "dg" && rc.method != "fourier")
    throw ConfigError("config: method must be dg or fourier");
  rc.poisson = cfg.poisson.empty() ? (rc.method == "dg" ? "ldg" : "spectral") : cfg.poisson;
  if (rc.poisson != "ldg" && rc.poisson != "mixed" && rc.poisson != "spectral")
    throw ConfigError("config: poisson must be ldg, mixed, or spectral");
  if (rc.method == "fourier" && rc.poisson != "spectral")
    throw ConfigError("config: the fourier method requires the spectral field solver");
  if (rc.method == "dg" && rc.poisson == "spectral")
    throw ConfigError("config: the dg method requires the ldg or mixed field solver");

  const ScenarioDefaults& d = rc.scenario.defaults;
  rc.nx = cfg.nx > 0 ? cfg.nx : d.nx;
  rc.nh = cfg.nh > 0 ? cfg.nh : d.nh;
  rc.degree = cfg.degree >= 0 ? cfg.degree : d.degree;
  rc.cfl = cfg.cfl > 0.0 ? cfg.cfl : d.cfl;
  rc.dt = cfg.dt;
  rc.t_final = cfg.t_final >= 0.0 ? cfg.t_final : d.t_final;
  rc.gamma = cfg.gamma > 0.0 ? cfg.gamma : d.gamma;
  rc.beta = cfg.beta;
  rc.beta_over_h = cfg.beta_over_h;
  rc.filter = cfg.filter;
  rc.diag_every = cfg.diag_every;
  rc.out_dir = cfg.out_dir;
  rc.seed = cfg.seed;
  rc.snapshot_times =
      cfg.snapshot_times_set ? cfg.snapshot_times : rc.scenario.default_snapshot_times;

  if (cfg.nx < 0 || cfg.nh < 0) throw ConfigError("config: nx and nh must be positive");
  if (rc.nh < 3) throw ConfigError("config: nh must be at least 3 (moments need C_0..C_2)");
  if (rc.nx < 1) throw ConfigError("config: nx must be at least 1");
  if (rc.degree < 0 || rc.degree > 8) throw ConfigError("config: degree must be in 0..8");
  if (!(rc.cfl > 0.0)) throw ConfigError("config: cfl must be > 0");
  if (rc.dt < 0.0) throw ConfigError("config: dt must be >= 0");
  if (!(rc.t_final >= 0.0)) throw ConfigError("config: t_final must be >= 0");
  if (!(rc.gamma > 0.0)) throw ConfigError("config: gamma must be > 0");
  if (!(rc.beta > 0.0)) throw ConfigError("config: beta must be > 0");
  if (rc.diag_every < 1) throw ConfigError("config: diag_every must be >= 1");
  for (double t : rc.snapshot_times)
    if (t < 0.0) throw ConfigError("config: snapshot times must be >= 0");

  std::sort(rc.snapshot_times.begin(), rc.snapshot_times.end());
  rc.snapshot_times.erase(std::unique(rc.snapshot_times.begin(), rc.snapshot_times.end()),
                          rc.snapshot_times.end());
  return rc;
}

// Manifest listing every parameter the run consumes, stable key order;
// also the print-config output. `extras` appends run-derived entries.
inline void write_manifest(std::ostream& os, const ResolvedConfig& rc,
                           const std::vector<std::pair<std::string, std::string>>& extras = {}) {
  os << "version = " << code_version << '\n';
  os << "scenario = " << rc.scenario.name << '\n';
  os << "method = " << rc.method << '\n';
  os << "poisson = " << rc.poisson << '\n';
  os << "nx = " << rc.nx << '\n';
  os << "nh = " << rc.nh << '\n';
  os << "degree = " << rc.degree << '\n';
  os << "dt = " << detail::g17(rc.dt) << '\n';
  os << "cfl = " << detail::g17(rc.cfl) << '\n';
  os << "t_final = " << detail::g17(rc.t_final) << '\n';
  os << "gamma = " << detail::g17(rc.gamma) << '\n';
  os << "beta = " << detail::g17(rc.beta) << '\n';
  os << "beta_over_h = " << (rc.beta_over_h ? "true" : "false") << '\n';
  os << "filter = " << (rc.filter ? "true" : "false") << '\n';
  os << "diag_every = " << rc.diag_every << '\n';
  os << "out_dir = " << rc.out_dir << '\n';
  os << "snapshot_times =";
  for (size_t i = 0; i < rc.snapshot_times.size(); ++i)
    os << (i ? "," : " ") << detail::g17(rc.snapshot_times[i]);
  os << '\n';
  os << "seed = " << rc.seed << '\n';
  os << "domain_length = " << detail::g17(rc.scenario.length) << '\n';
  os << "x_left = " << detail::g17(rc.scenario.x_left) << '\n';
  os << "v_window = " << detail::g17(rc.scenario.v_min) << "," << detail::g17(rc.scenario.v_max)
     << '\n';
  for (const auto& sp : rc.scenario.species) {
    os << "species." << sp.name << ".alpha0 = " << detail::g17(sp.alpha0) << '\n';
    os << "species." << sp.name << ".q_over_m = " << detail::g17(sp.q_over_m) << '\n';
    os << "species." << sp.name << ".charge = " << detail::g17(sp.charge) << '\n';
    os << "species." << sp.name << ".mass = " << detail::g17(sp.mass) << '\n';
  }
  for (const auto& [k, v] : extras) os << k << " = " << v << '\n';
}

}  // namespace vlaherm
