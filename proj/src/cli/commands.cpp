#include "eqconj/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "eqconj/analysis.hpp"
#include "eqconj/errors.hpp"
#include "eqconj/t3.hpp"
#include "eqconj/weierstrass.hpp"

namespace eqconj::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Csv {
 public:
  Csv(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }
  void row(std::initializer_list<double> cells) {
    bool first = true;
    for (double c : cells) {
      out_ << (first ? "" : ",") << fmt(c);
      first = false;
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

// Tracks artifacts and runtimes; runtimes are written to the manifest only.
class Artifacts {
 public:
  Artifacts(const std::string& dir, std::string command) : dir_(dir), command_(std::move(command)) {
    fs::create_directories(dir_);
  }
  fs::path path(const std::string& name) {
    files_.push_back(name);
    return dir_ / name;
  }
  void write_json(const std::string& name, const json& j) {
    std::ofstream out(path(name));
    out << j.dump(2) << '\n';
  }
  void time(const std::string& stage, double seconds) { runtimes_[stage] = seconds; }
  void finish() {
    json files = json::array();
    for (const std::string& f : files_) {
      files.push_back({{"name", f}, {"bytes", fs::file_size(dir_ / f)}});
    }
    json j = {{"command", command_}, {"files", files}, {"runtime_s", runtimes_}};
    std::ofstream out(dir_ / "manifest.json");
    out << j.dump(2) << '\n';
  }

 private:
  fs::path dir_;
  std::string command_;
  std::vector<std::string> files_;
  std::map<std::string, double> runtimes_;
};

template <typename F>
auto timed(Artifacts& a, const std::string& stage, F&& f) {
  const auto t0 = Clock::now();
  auto r = f();
  a.time(stage, std::chrono::duration<double>(Clock::now() - t0).count());
  return r;
}

template <std::size_t D>
json eigen_json(const EigenData<D>& e) {
  return {{"lambda", e.lambda},     {"pressure", e.pressure},
          {"residual", e.residual}, {"iterations", e.iterations},
          {"adjoint_iterations", e.adjoint_iterations}};
}

FamilyConfig family_config(const RunConfig& cfg) { return cfg.solver; }

Shape<2> shape2(const RunConfig& cfg) { return {cfg.grid.base_n, cfg.grid.fiber_n}; }

void require_dimension(const RunConfig& cfg, int dim, const std::string& command) {
  if (cfg.dimension != dim) {
    throw ConfigError("config.dimension", command + " needs dimension " + std::to_string(dim));
  }
}

std::vector<std::vector<double>> read_csv(const fs::path& path, const std::vector<std::string>& columns) {
  std::ifstream in(path);
  if (!in) throw ConfigError("artifacts", "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  std::vector<std::size_t> idx;
  for (const std::string& c : columns) {
    const auto it = std::find(header.begin(), header.end(), c);
    if (it == header.end()) throw ConfigError("artifacts", path.filename().string() + " lacks column " + c);
    idx.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  std::vector<std::vector<double>> out(columns.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(std::strtod(cell.c_str(), nullptr));
    for (std::size_t c = 0; c < idx.size(); ++c) out[c].push_back(cells.at(idx[c]));
  }
  return out;
}

json family_json(const ConditionalFamily& fam) {
  return {
      {"eigendata", eigen_json(fam.eig)},
      {"base_eigendata", eigen_json(fam.base_eig)},
      {"Phi",
       {{"k_used", fam.Phi.k_used},
        {"last_increment", fam.Phi.last_increment},
        {"probe_gap", fam.Phi.probe_gap},
        {"probes", fam.Phi.y_probe},
        {"min", fam.Phi.phi_base.min()},
        {"max", fam.Phi.phi_base.max()}}},
      {"pressure_gap", fam.pressure_gap()},
      {"fiber_duality_residual", fam.duality_residual},
      {"continuity_tv_constant", fam.continuity_constant},
      {"continuity_w1_constant", fam.kantorovich_constant},
      {"fiber_mass_spread", fam.fiber_mass_spread},
      {"warnings", fam.warnings},
  };
}

void write_conjugacy_tables(Artifacts& art, const Pipeline& p) {
  const TorusConjugacy& H = p.H;
  const SkewProductMap& F = p.F;
  const std::size_t nb = H.n_base();
  const std::size_t nf = H.n_fiber();
  {
    Csv csv(art.path("base.csv"), {"index", "x", "c_hat", "c_hat_dual", "f", "f_prime", "Phi", "mu_hat"});
    for (std::size_t i = 0; i < nb; ++i) {
      const double x = static_cast<double>(i) / static_cast<double>(nb);
      csv.row({static_cast<double>(i), x, H.base.node(i), H.base.half_node(i), F.f.lift()[i], F.f_prime[i],
               p.fam.Phi.phi_base[i], p.fam.mu_hat.nodes[i] * static_cast<double>(nb)});
    }
  }
  {
    Csv csv(art.path("fibers.csv"), {"index", "x", "y", "c_x", "c_x_dual", "g", "g_prime"});
    for (std::size_t i = 0; i < nb; ++i) {
      const double x = static_cast<double>(i) / static_cast<double>(nb);
      for (std::size_t k = 0; k < nf; ++k) {
        const double y = static_cast<double>(k) / static_cast<double>(nf);
        csv.row({static_cast<double>(i), x, y, H.fibers[i].node(k), H.fibers[i].half_node(k), F.g[i].lift()[k],
                 F.g_prime.at({i, k})});
      }
    }
  }
  {
    Csv csv(art.path("jacobian.csv"), {"u", "v", "jacobian"});
    for (std::size_t i = 0; i < nb; ++i) {
      for (std::size_t k = 0; k < nf; ++k) {
        csv.row({static_cast<double>(i) / static_cast<double>(nb), static_cast<double>(k) / static_cast<double>(nf),
                 F.f_prime[i] * F.g_prime.at({i, k})});
      }
    }
  }
}

int finish_verify(Artifacts& art, const VerificationReport& rep, std::ostream& log) {
  art.write_json("verify_report.json", {{"schema", kReportSchema}, {"verification", report_to_json(rep)}});
  for (const CheckResult& c : rep.checks) art.time("check." + c.name, c.runtime_s);
  art.finish();
  for (const CheckResult& c : rep.checks) {
    log << (c.pass ? "PASS " : "FAIL ") << c.name << " error=" << fmt(c.error) << " tol=" << fmt(c.tolerance)
        << (c.detail.empty() ? "" : " (" + c.detail + ")") << '\n';
  }
  if (const CheckResult* f = rep.first_failure()) {
    log << "verification failed: " << f->name << (f->detail.empty() ? "" : " (" + f->detail + ")") << '\n';
    return kVerifyFailed;
  }
  return kOk;
}

}  // namespace

json report_to_json(const VerificationReport& rep) {
  json checks = json::array();
  for (const CheckResult& c : rep.checks) {
    json j = {{"name", c.name},          {"anchor", c.anchor}, {"error", c.error},
              {"tolerance", c.tolerance}, {"pass", c.pass},     {"grid", c.grid},
              {"bound", c.lower_bound ? "min" : "max"}};
    if (c.median) j["median"] = *c.median;
    if (!c.detail.empty()) j["detail"] = c.detail;
    checks.push_back(std::move(j));
  }
  return {{"checks", checks}, {"notes", rep.notes}, {"all_pass", rep.all_pass()}};
}

int cmd_solve(const RunConfig& cfg, const std::string& out, std::ostream& log) {
  Artifacts art(out, "solve");
  art.write_json("config.json", cfg.to_json());
  const TrigPotential phi = cfg.potential_fn();
  json report = {{"schema", kReportSchema}, {"config", cfg.to_json()}};
  if (cfg.dimension == 1) {
    const EigenData<1> e = timed(art, "solve", [&] {
      return solve_eigendata<1>(phi, cfg.degree, Shape<1>{cfg.grid.base_n}, cfg.solver.solver());
    });
    const EquilibriumState<1> mu = equilibrium_state<1>(e);
    report["eigendata"] = eigen_json(e);
    Csv csv(art.path("eigen.csv"), {"x", "h", "nu", "mu"});
    const double n = static_cast<double>(cfg.grid.base_n);
    for (std::size_t i = 0; i < cfg.grid.base_n; ++i) {
      csv.row({static_cast<double>(i) / n, e.h[i], e.nu_nodes[i] * n, mu.nodes[i] * n});
    }
    log << "lambda = " << fmt(e.lambda) << ", pressure = " << fmt(e.pressure) << '\n';
  } else if (cfg.dimension == 2) {
    const ConditionalFamily fam =
        timed(art, "family", [&] { return conditional_family(phi, cfg.degree, shape2(cfg), family_config(cfg)); });
    report["family"] = family_json(fam);
    Csv csv(art.path("base.csv"), {"x", "Phi", "mu_hat"});
    const double n = static_cast<double>(fam.n_base());
    for (std::size_t i = 0; i < fam.n_base(); ++i) {
      csv.row({static_cast<double>(i) / n, fam.Phi.phi_base[i], fam.mu_hat.nodes[i] * n});
    }
    log << "P(phi) = " << fmt(fam.eig.pressure) << ", P(Phi) = " << fmt(fam.base_eig.pressure) << '\n';
  } else {
    const T3Conjugacy H = timed(art, "t3", [&] {
      return t3_conjugacy(phi, cfg.degree, {cfg.grid.base_n, cfg.grid.fiber_n, cfg.grid.fiber2_n},
                          family_config(cfg));
    });
    report["eigendata"] = eigen_json(H.eig);
    report["base_eigendata"] = eigen_json(H.base_eig);
    report["pressure_gap"] = H.pressure_gap();
    log << "P(phi) = " << fmt(H.eig.pressure) << ", P(Phi) = " << fmt(H.base_eig.pressure) << '\n';
  }
  art.write_json("report.json", report);
  art.finish();
  return kOk;
}

int cmd_conjugate(const RunConfig& cfg, const std::string& out, std::ostream& log) {
  require_dimension(cfg, 2, "conjugate");
  Artifacts art(out, "conjugate");
  art.write_json("config.json", cfg.to_json());
  const Pipeline p = timed(art, "pipeline", [&] {
    return build_pipeline(cfg.potential_fn(), cfg.degree, shape2(cfg), family_config(cfg));
  });
  const ConjugacyError ce = conjugacy_identity_error(p.H, p.F);
  art.write_json("report.json", {{"schema", kReportSchema},
                                 {"config", cfg.to_json()},
                                 {"family", family_json(p.fam)},
                                 {"conjugacy_identity_error", ce.sup}});
  write_conjugacy_tables(art, p);
  art.finish();
  log << "conjugacy identity error = " << fmt(ce.sup) << '\n';
  return kOk;
}

int cmd_verify(const RunConfig& cfg, const std::string& out, bool two_grid, std::ostream& log) {
  require_dimension(cfg, 2, "verify");
  Artifacts art(out, "verify");
  art.write_json("config.json", cfg.to_json());
  const VerificationReport rep = timed(art, "verify", [&] {
    if (two_grid) return run_two_grid(cfg.potential_fn(), cfg.degree, shape2(cfg), family_config(cfg));
    return run_verification(build_pipeline(cfg.potential_fn(), cfg.degree, shape2(cfg), family_config(cfg)));
  });
  return finish_verify(art, rep, log);
}

Pipeline load_pipeline(const std::string& dir) {
  const fs::path root(dir);
  const RunConfig cfg = load_config((root / "config.json").string());
  require_dimension(cfg, 2, "verify");
  Pipeline p;
  p.fam = conditional_family(cfg.potential_fn(), cfg.degree, shape2(cfg), family_config(cfg));
  const std::size_t nb = cfg.grid.base_n;
  const std::size_t nf = cfg.grid.fiber_n;
  const auto base = read_csv(root / "base.csv", {"c_hat_dual", "f", "f_prime"});
  const auto fib = read_csv(root / "fibers.csv", {"c_x_dual", "g", "g_prime"});
  if (base[0].size() != nb || fib[0].size() != nb * nf) throw ConfigError("artifacts", "table sizes do not match the grid");
  p.H.base = NodeCdf(MonotoneCircleMap(base[0], 1));
  p.F.d = cfg.degree;
  p.F.f = MonotoneCircleMap(base[1], cfg.degree);
  p.F.f_prime = GridFunction1D(Shape<1>{nb}, base[2]);
  p.F.g_prime = GridFunction2D(Shape<2>{nb, nf}, fib[2]);
  for (std::size_t i = 0; i < nb; ++i) {
    const auto lo = static_cast<std::ptrdiff_t>(i * nf);
    const auto hi = static_cast<std::ptrdiff_t>((i + 1) * nf);
    p.H.fibers.emplace_back(MonotoneCircleMap(std::vector<double>(fib[0].begin() + lo, fib[0].begin() + hi), 1));
    p.F.g.emplace_back(std::vector<double>(fib[1].begin() + lo, fib[1].begin() + hi), cfg.degree);
  }
  return p;
}

int cmd_verify_artifacts(const std::string& dir, const std::string& out, std::ostream& log) {
  Artifacts art(out, "verify");
  const Pipeline p = timed(art, "load", [&] { return load_pipeline(dir); });
  const VerificationReport rep = timed(art, "verify", [&] { return run_verification(p); });
  return finish_verify(art, rep, log);
}

int cmd_count_symmetries(long d, const SymmetryConfig& sym, const std::string& out, std::ostream& log) {
  Artifacts art(out, "count-symmetries");
  const SymmetryAudit a = timed(art, "search", [&] { return enumerate_symmetries(d, sym.resolution, sym.tol); });
  auto list = [&](const std::vector<CircleSymmetry>& v) {
    json arr = json::array();
    for (const CircleSymmetry& s : v) {
      arr.push_back({{"orientation", s.reversing ? "reversing" : "preserving"},
                     {"a", s.a},
                     {"defect", commutation_defect(s, d)}});
    }
    return arr;
  };
  art.write_json("symmetries.json", {{"schema", kReportSchema},
                                     {"d", d},
                                     {"search_space", "rotations x -> x + a and reflections x -> -x + a"},
                                     {"resolution", a.resolution},
                                     {"tol", a.tol},
                                     {"found", list(a.found)},
                                     {"algebraic", list(a.algebraic)},
                                     {"agrees", a.agrees},
                                     {"found_count", a.found.size()},
                                     {"claimed_count", a.claimed_count},
                                     {"diagnostic", a.diagnostic}});
  {
    Csv csv(art.path("symmetries.csv"), {"reversing", "a", "defect"});
    for (const CircleSymmetry& s : a.found) csv.row({s.reversing ? 1.0 : 0.0, s.a, commutation_defect(s, d)});
  }
  art.finish();
  log << a.diagnostic << '\n' << (a.agrees ? "brute force agrees with {k/(d-1)}" : "brute force DISAGREES") << '\n';
  return a.agrees ? kOk : kVerifyFailed;
}

int cmd_weierstrass(const RunConfig& cfg, const std::string& out, std::ostream& log) {
  require_dimension(cfg, 1, "weierstrass");
  Artifacts art(out, "weierstrass");
  art.write_json("config.json", cfg.to_json());
  const WeierstrassShear W = timed(art, "series", [&] {
    return weierstrass_shear(cfg.potential_fn(), cfg.degree, cfg.weierstrass.K, cfg.weierstrass.n);
  });
  std::vector<double> extra;
  for (int i = 1; i <= 64; ++i) extra.push_back(std::fmod(static_cast<double>(i) * 0.6180339887498949, 1.0));
  const double res = W.sup_residual(extra);
  const double bound = tol::kWeierstrass;
  const ModulusReport m = modulus_estimate(W.beta());
  art.write_json("weierstrass.json", {{"schema", kReportSchema},
                                      {"config", cfg.to_json()},
                                      {"identity_residual", res},
                                      {"tolerance", bound},
                                      {"truncation_bound", W.truncation_bound()},
                                      {"pass", res <= bound},
                                      {"modulus", {{"slope", m.slope},
                                                   {"fit_residual", m.fit_residual},
                                                   {"delta", m.delta},
                                                   {"omega", m.omega}}}});
  {
    Csv csv(art.path("beta.csv"), {"x", "alpha", "beta"});
    const double n = static_cast<double>(W.beta().size());
    for (std::size_t i = 0; i < W.beta().size(); ++i) {
      const double x = static_cast<double>(i) / n;
      csv.row({x, W.alpha()(x), W.beta()[i]});
    }
  }
  art.finish();
  log << "residual = " << fmt(res) << " (tol " << fmt(bound) << "), modulus slope = " << fmt(m.slope) << '\n';
  return res <= bound ? kOk : kVerifyFailed;
}

int cmd_t3(const RunConfig& cfg, const std::string& out, std::ostream& log) {
  require_dimension(cfg, 3, "t3");
  Artifacts art(out, "t3");
  art.write_json("config.json", cfg.to_json());
  const Shape<3> shape{cfg.grid.base_n, cfg.grid.fiber_n, cfg.grid.fiber2_n};
  const T3Conjugacy H =
      timed(art, "conjugacy", [&] { return t3_conjugacy(cfg.potential_fn(), cfg.degree, shape, family_config(cfg)); });
  const T3SkewProduct F = timed(art, "skew_product", [&] { return t3_skew_product(H); });
  const T3Checks c = timed(art, "checks", [&] { return t3_checks(F); });
  const double conj_tol = 1.0 / static_cast<double>(*std::min_element(shape.begin(), shape.end()));
  const bool pass = c.conjugacy_error <= conj_tol && c.pushforward_error <= tol::kT3Pushforward;
  art.write_json("t3.json", {{"schema", kReportSchema},
                             {"config", cfg.to_json()},
                             {"eigendata", eigen_json(H.eig)},
                             {"base_eigendata", eigen_json(H.base_eig)},
                             {"conjugacy_identity_error", c.conjugacy_error},
                             {"conjugacy_tolerance", conj_tol},
                             {"pushforward_error", c.pushforward_error},
                             {"pushforward_tolerance", tol::kT3Pushforward},
                             {"pressure_gap", c.pressure_gap},
                             {"identity_deviation", t3_identity_deviation(H)},
                             {"pass", pass}});
  {
    Csv csv(art.path("t3_base.csv"), {"x", "c_hat", "f"});
    for (std::size_t i = 0; i < shape[0]; ++i) {
      csv.row({static_cast<double>(i) / static_cast<double>(shape[0]), H.base.node(i), F.f.lift()[i]});
    }
  }
  {
    Csv csv(art.path("t3_fiber_y.csv"), {"index", "y", "c_y"});
    for (std::size_t i = 0; i < shape[0]; ++i) {
      for (std::size_t j = 0; j < shape[1]; ++j) {
        csv.row({static_cast<double>(i), static_cast<double>(j) / static_cast<double>(shape[1]),
                 H.fiber_y[i].node(j)});
      }
    }
  }
  art.finish();
  log << "T^3 conjugacy error = " << fmt(c.conjugacy_error) << ", pushforward = " << fmt(c.pushforward_error)
      << ", pressure gap = " << fmt(c.pressure_gap) << '\n';
  return pass ? kOk : kVerifyFailed;
}

int run_command(const std::string& name, const CommandOptions& opt, std::ostream& log, std::ostream& err) {
  try {
    if (name == "verify" && !opt.artifacts.empty()) {
      return cmd_verify_artifacts(opt.artifacts, opt.out_dir.empty() ? opt.artifacts + "/verify" : opt.out_dir, log);
    }
    if (name == "count-symmetries" && opt.config_path.empty()) {
      if (!opt.degree) throw ConfigError("degree", "count-symmetries needs --degree or --config");
      if (*opt.degree < 2) throw ConfigError("degree", "must be at least 2");
      return cmd_count_symmetries(*opt.degree, {}, opt.out_dir.empty() ? "out" : opt.out_dir, log);
    }
    if (opt.config_path.empty()) throw ConfigError("config", "--config is required");
    RunConfig cfg = load_config(opt.config_path);
    if (opt.grid_n) apply_grid_override(cfg, *opt.grid_n);
    if (opt.tol) apply_tol_override(cfg, *opt.tol);
    if (opt.degree) {
      cfg.degree = *opt.degree;
      validate(cfg);
    }
    const std::string out = opt.out_dir.empty() ? cfg.outputs : opt.out_dir;
    if (name == "solve") return cmd_solve(cfg, out, log);
    if (name == "conjugate") return cmd_conjugate(cfg, out, log);
    if (name == "verify") return cmd_verify(cfg, out, opt.two_grid, log);
    if (name == "count-symmetries") return cmd_count_symmetries(cfg.degree, cfg.symmetry, out, log);
    if (name == "weierstrass") return cmd_weierstrass(cfg, out, log);
    if (name == "t3") return cmd_t3(cfg, out, log);
    throw ConfigError("command", "unknown command " + name);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ConvergenceError& e) {
    err << "solver did not converge: " << e.what() << " (final residual " << fmt(e.residual())
        << "); try a looser solver.tol or a larger grid\n";
    return kSolverError;
  } catch (const ResolutionError& e) {
    err << "grid too coarse: " << e.what() << "; increase grid.base_n / grid.fiber_n\n";
    return kSolverError;
  }
}

}  // namespace eqconj::cli
