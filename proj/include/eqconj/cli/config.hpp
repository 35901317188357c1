#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "eqconj/fiberwise.hpp"
#include "eqconj/potential.hpp"

namespace eqconj::cli {

inline constexpr const char* kConfigSchema = "eqconj.config/1";
inline constexpr const char* kReportSchema = "eqconj.report/1";

// Carries the JSON path of the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& msg)
      : std::runtime_error(path + ": " + msg), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct GridConfig {
  std::size_t base_n = 256;
  std::size_t fiber_n = 256;
  std::size_t fiber2_n = 0;
};

struct WeierstrassConfig {
  int K = 30;
  std::size_t n = 1024;
};

struct SymmetryConfig {
  std::size_t resolution = 4096;
  double tol = 1e-10;
};

struct RunConfig {
  int dimension = 2;
  long degree = 2;
  std::vector<TrigTerm> potential;
  GridConfig grid;
  FamilyConfig solver;
  std::string outputs = "out";
  WeierstrassConfig weierstrass;
  SymmetryConfig symmetry;

  TrigPotential potential_fn() const { return TrigPotential(static_cast<std::size_t>(dimension), potential); }
  nlohmann::json to_json() const;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// Overrides applied after parsing; re-validated.
void apply_grid_override(RunConfig& cfg, std::size_t n);
void apply_tol_override(RunConfig& cfg, double tol);
void validate(const RunConfig& cfg);

}  // namespace eqconj::cli
