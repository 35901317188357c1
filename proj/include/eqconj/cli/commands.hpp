#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "eqconj/cli/config.hpp"
#include "eqconj/verification.hpp"

namespace eqconj::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kSolverError = 3, kVerifyFailed = 4 };

struct CommandOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<std::size_t> grid_n;
  std::optional<double> tol;
  bool two_grid = false;
  // verify: reload H and F from a conjugate output directory.
  std::string artifacts;
  // count-symmetries without a config.
  std::optional<long> degree;
};

// Each command writes its artifacts plus manifest.json into out and returns an exit code.
int cmd_solve(const RunConfig& cfg, const std::string& out, std::ostream& log);
int cmd_conjugate(const RunConfig& cfg, const std::string& out, std::ostream& log);
int cmd_verify(const RunConfig& cfg, const std::string& out, bool two_grid, std::ostream& log);
int cmd_verify_artifacts(const std::string& dir, const std::string& out, std::ostream& log);
int cmd_count_symmetries(long d, const SymmetryConfig& sym, const std::string& out, std::ostream& log);
int cmd_weierstrass(const RunConfig& cfg, const std::string& out, std::ostream& log);
int cmd_t3(const RunConfig& cfg, const std::string& out, std::ostream& log);

// Resolves config and overrides, dispatches, and maps exceptions to exit codes.
int run_command(const std::string& name, const CommandOptions& opt, std::ostream& log, std::ostream& err);

nlohmann::json report_to_json(const VerificationReport& rep);

// Rebuilds the pipeline of a conjugate output directory with H and F taken from its tables.
Pipeline load_pipeline(const std::string& dir);

}  // namespace eqconj::cli
