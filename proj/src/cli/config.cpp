#include "eqconj/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "eqconj/t3.hpp"

namespace eqconj::cli {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw ConfigError(path + "." + k, "unknown key");
  }
}

const json& required(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) throw ConfigError(path + "." + key, "required field missing");
  return j.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

long integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<long>();
}

std::size_t positive(const json& j, const std::string& path) {
  const long v = integer(j, path);
  if (v <= 0) throw ConfigError(path, "must be positive");
  return static_cast<std::size_t>(v);
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
  json terms = json::array();
  for (const TrigTerm& t : potential) {
    terms.push_back({{"amplitude", t.amplitude}, {"freq", t.freq}, {"phase", t.phase}});
  }
  json grid_j = {{"base_n", grid.base_n}, {"fiber_n", grid.fiber_n}};
  if (dimension == 3) grid_j["fiber2_n"] = grid.fiber2_n;
  return {
      {"schema", kConfigSchema},
      {"dimension", dimension},
      {"degree", degree},
      {"potential", terms},
      {"grid", grid_j},
      {"solver",
       {{"tol", solver.tol},
        {"max_iter", solver.max_iter},
        {"fiber_k_max", solver.fiber_k_max},
        {"probe_points", solver.probes}}},
      {"outputs", outputs},
      {"weierstrass", {{"K", weierstrass.K}, {"n", weierstrass.n}}},
      {"symmetry", {{"resolution", symmetry.resolution}, {"tol", symmetry.tol}}},
  };
}

RunConfig parse_config(const json& j) {
  const std::string root = "config";
  reject_unknown(j, root,
                 {"schema", "dimension", "degree", "potential", "grid", "solver", "outputs", "weierstrass", "symmetry"});
  RunConfig cfg;
  if (j.contains("schema")) {
    if (!j["schema"].is_string() || j["schema"].get<std::string>() != kConfigSchema) {
      throw ConfigError(root + ".schema", std::string("expected \"") + kConfigSchema + "\"");
    }
  }
  cfg.dimension = static_cast<int>(integer(required(j, root, "dimension"), root + ".dimension"));
  cfg.degree = integer(required(j, root, "degree"), root + ".degree");

  if (j.contains("potential")) {
    const json& p = j["potential"];
    if (!p.is_array()) throw ConfigError(root + ".potential", "expected an array of terms");
    for (std::size_t i = 0; i < p.size(); ++i) {
      const std::string path = root + ".potential[" + std::to_string(i) + "]";
      reject_unknown(p[i], path, {"amplitude", "freq", "phase"});
      TrigTerm t;
      t.amplitude = number(required(p[i], path, "amplitude"), path + ".amplitude");
      const json& f = required(p[i], path, "freq");
      if (!f.is_array()) throw ConfigError(path + ".freq", "expected an integer array");
      for (std::size_t a = 0; a < f.size(); ++a) t.freq.push_back(integer(f[a], path + ".freq[" + std::to_string(a) + "]"));
      t.phase = p[i].contains("phase") ? number(p[i]["phase"], path + ".phase") : 0.0;
      cfg.potential.push_back(std::move(t));
    }
  }

  const json& g = required(j, root, "grid");
  reject_unknown(g, root + ".grid", {"base_n", "fiber_n", "fiber2_n"});
  cfg.grid.base_n = positive(required(g, root + ".grid", "base_n"), root + ".grid.base_n");
  if (g.contains("fiber_n")) cfg.grid.fiber_n = positive(g["fiber_n"], root + ".grid.fiber_n");
  else cfg.grid.fiber_n = cfg.grid.base_n;
  if (g.contains("fiber2_n")) cfg.grid.fiber2_n = positive(g["fiber2_n"], root + ".grid.fiber2_n");
  else if (cfg.dimension == 3) cfg.grid.fiber2_n = cfg.grid.fiber_n;

  if (j.contains("solver")) {
    const json& s = j["solver"];
    const std::string path = root + ".solver";
    reject_unknown(s, path, {"tol", "max_iter", "fiber_k_max", "probe_points"});
    if (s.contains("tol")) cfg.solver.tol = number(s["tol"], path + ".tol");
    if (s.contains("max_iter")) cfg.solver.max_iter = static_cast<int>(positive(s["max_iter"], path + ".max_iter"));
    if (s.contains("fiber_k_max")) {
      cfg.solver.fiber_k_max = static_cast<int>(positive(s["fiber_k_max"], path + ".fiber_k_max"));
    }
    if (s.contains("probe_points")) {
      const json& pp = s["probe_points"];
      if (!pp.is_array() || pp.size() != 2) throw ConfigError(path + ".probe_points", "expected two numbers");
      for (std::size_t a = 0; a < 2; ++a) {
        cfg.solver.probes[a] = number(pp[a], path + ".probe_points[" + std::to_string(a) + "]");
      }
    }
  }
  if (j.contains("outputs")) {
    if (!j["outputs"].is_string()) throw ConfigError(root + ".outputs", "expected a directory path");
    cfg.outputs = j["outputs"].get<std::string>();
  }
  if (j.contains("weierstrass")) {
    const json& w = j["weierstrass"];
    const std::string path = root + ".weierstrass";
    reject_unknown(w, path, {"K", "n"});
    if (w.contains("K")) cfg.weierstrass.K = static_cast<int>(positive(w["K"], path + ".K"));
    if (w.contains("n")) cfg.weierstrass.n = positive(w["n"], path + ".n");
  }
  if (j.contains("symmetry")) {
    const json& s = j["symmetry"];
    const std::string path = root + ".symmetry";
    reject_unknown(s, path, {"resolution", "tol"});
    if (s.contains("resolution")) cfg.symmetry.resolution = positive(s["resolution"], path + ".resolution");
    if (s.contains("tol")) cfg.symmetry.tol = number(s["tol"], path + ".tol");
  }
  validate(cfg);
  return cfg;
}

void validate(const RunConfig& cfg) {
  const std::string root = "config";
  if (cfg.dimension < 1 || cfg.dimension > 3) throw ConfigError(root + ".dimension", "must be 1, 2 or 3");
  if (cfg.degree < 2) throw ConfigError(root + ".degree", "must be at least 2");
  for (std::size_t i = 0; i < cfg.potential.size(); ++i) {
    if (cfg.potential[i].freq.size() != static_cast<std::size_t>(cfg.dimension)) {
      throw ConfigError(root + ".potential[" + std::to_string(i) + "].freq", "length must equal dimension");
    }
  }
  if (cfg.grid.base_n < 8) throw ConfigError(root + ".grid.base_n", "must be at least 8");
  if (cfg.dimension >= 2 && cfg.grid.fiber_n < 8) throw ConfigError(root + ".grid.fiber_n", "must be at least 8");
  if (cfg.dimension == 3) {
    if (cfg.grid.fiber2_n < 8) throw ConfigError(root + ".grid.fiber2_n", "must be at least 8");
    if (cfg.grid.base_n > kT3MaxBase) throw ConfigError(root + ".grid.base_n", "T^3 base grid is capped at 64");
    if (cfg.grid.fiber_n > kT3MaxFiber || cfg.grid.fiber2_n > kT3MaxFiber) {
      throw ConfigError(root + ".grid", "T^3 fiber grids are capped at 64");
    }
  }
  if (!(cfg.solver.tol > 0.0)) throw ConfigError(root + ".solver.tol", "must be positive");
  if (cfg.solver.max_iter < 1) throw ConfigError(root + ".solver.max_iter", "must be positive");
  if (cfg.weierstrass.n < 8) throw ConfigError(root + ".weierstrass.n", "must be at least 8");
  if (cfg.symmetry.resolution < 4096) throw ConfigError(root + ".symmetry.resolution", "must be at least 4096");
  if (!(cfg.symmetry.tol > 0.0)) throw ConfigError(root + ".symmetry.tol", "must be positive");
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

void apply_grid_override(RunConfig& cfg, std::size_t n) {
  cfg.grid.base_n = n;
  cfg.grid.fiber_n = n;
  if (cfg.dimension == 3) cfg.grid.fiber2_n = n;
  validate(cfg);
}

void apply_tol_override(RunConfig& cfg, double tol) {
  cfg.solver.tol = tol;
  validate(cfg);
}

}  // namespace eqconj::cli
