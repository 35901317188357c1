#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eqconj/cli/commands.hpp"

int main(int argc, char** argv) {
  using eqconj::cli::CommandOptions;
  CLI::App app{"Equilibrium-state conjugacies for expanding torus maps"};
  app.require_subcommand(1);

  CommandOptions opt;
  std::size_t grid_n = 0;
  double tol = 0.0;
  long degree = 0;

  auto common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opt.config_path, "JSON run configuration");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "output directory (default: config outputs)");
    sub->add_option("--grid-n", grid_n, "override every grid size")->check(CLI::PositiveNumber);
    sub->add_option("--tol", tol, "override the solver tolerance")->check(CLI::PositiveNumber);
  };

  auto* solve = app.add_subcommand("solve", "eigendata, base potential and conditional family");
  common(solve, true);
  auto* conj = app.add_subcommand("conjugate", "conjugacy H and skew product F tables");
  common(conj, true);
  auto* verify = app.add_subcommand("verify", "run every verification check");
  common(verify, false);
  verify->add_flag("--two-grid", opt.two_grid, "also run at double resolution and check refinement");
  verify->add_option("--artifacts", opt.artifacts, "verify the tables of a conjugate output directory")
      ->check(CLI::ExistingDirectory);
  auto* sym = app.add_subcommand("count-symmetries", "brute-force circle symmetries of x -> dx");
  common(sym, false);
  sym->add_option("--degree", degree, "expansion degree d")->check(CLI::Range(2L, 64L));
  auto* weier = app.add_subcommand("weierstrass", "shear cocycle series and its modulus");
  common(weier, true);
  auto* t3 = app.add_subcommand("t3", "three-torus conjugacy");
  common(t3, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : eqconj::cli::kConfigError;
  }
  if (grid_n) opt.grid_n = grid_n;
  if (tol > 0.0) opt.tol = tol;
  if (degree) opt.degree = degree;
  if (verify->parsed() && opt.artifacts.empty() && opt.config_path.empty()) {
    std::cerr << "config error: verify needs --config or --artifacts\n";
    return eqconj::cli::kConfigError;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  return eqconj::cli::run_command(name, opt, std::cout, std::cerr);
}
