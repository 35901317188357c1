#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "eqconj/analysis.hpp"
#include "eqconj/cli/commands.hpp"
#include "eqconj/t3.hpp"
#include "eqconj/tolerances.hpp"
#include "eqconj/verification.hpp"
#include "eqconj/weierstrass.hpp"

using namespace eqconj;
namespace fs = std::filesystem;

namespace {

const TrigPotential kGeneric(2, {TrigTerm::cosine(0.2, {1, 0}), TrigTerm::cosine(0.15, {1, 1}),
                                 TrigTerm::sine(0.1, {1, -2})});
const TrigPotential kCoupled(2, {TrigTerm::cosine(0.25, {1, 1})});

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail, double seconds) {
  std::printf("[%s] %2d %-34s %s (%.1fs)\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void criterion(int id, const std::string& title, const std::function<bool(std::string&)>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  report(id, title, pass, detail, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

double max_suite_error(const std::function<double(const TestFunction&)>& f) {
  double e = 0;
  for (const TestFunction& psi : torus_test_suite()) e = std::max(e, std::abs(f(psi)));
  return e;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  Pipeline g256, g512, g1024;
  auto generic = [&](std::size_t n) -> const Pipeline& {
    Pipeline& p = n == 256 ? g256 : n == 512 ? g512 : g1024;
    if (p.H.fibers.empty()) p = build_pipeline(kGeneric, 2, Shape<2>{n, n}, {});
    return p;
  };

  criterion(1, "zero-potential exactness", [](std::string& d) {
    const std::size_t n = 1024;
    const auto e1 = solve_eigendata<1>(TrigPotential(1), 2, Shape<1>{n}, {});
    const Pipeline p = build_pipeline(TrigPotential(2), 2, Shape<2>{n, n}, {});
    double phi = 0, h = 0, f = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(i) / static_cast<double>(n);
      phi = std::max(phi, std::abs(p.fam.Phi.phi_base[i] - std::log(2.0)));
      h = std::max(h, torus_distance(p.H.base.node(i), x));
      f = std::max(f, torus_distance(p.F.f.lift()[i], 2 * x));
      for (std::size_t k = 0; k < n; ++k) {
        const double y = static_cast<double>(k) / static_cast<double>(n);
        h = std::max(h, torus_distance(p.H.fibers[i].node(k), y));
        f = std::max(f, torus_distance(p.F.g[i].lift()[k], 2 * y));
      }
    }
    const GridFunction2D J = jacobian_field(p.fam, p.H);
    const double jac = std::max(std::abs(J.max() - 4.0), std::abs(J.min() - 4.0));
    const double lam = std::abs(e1.lambda - 2.0);
    const double lam2 = std::abs(p.fam.eig.lambda - 4.0);
    const double inv_n = 1.0 / static_cast<double>(n);
    d = "|lambda-2|=" + g(lam) + " |lambda_T2-4|=" + g(lam2) + " |Phi-log2|=" + g(phi) + " H=" + g(h) +
        " F=" + g(f) + " J=" + g(jac);
    return lam <= tol::kZeroEigen && lam2 <= tol::kZeroEigen && phi <= tol::kZeroPhi && h <= inv_n &&
           f <= 2 * inv_n && jac <= tol::kZeroJacobian;
  });

  criterion(2, "pressure oracles", [](std::string& d) {
    const TrigPotential phi(1, {TrigTerm::cosine(0.5, {1})});
    const auto e = solve_eigendata<1>(phi, 2, Shape<1>{1024}, {});
    const double po = std::abs(e.pressure - periodic_orbit_pressure(phi, 2, 20));
    const auto u = ulam_oracle(phi, 2, 4096);
    const double ulam = std::abs(u.lambda - e.lambda) / e.lambda;
    d = "periodic-orbit gap=" + g(po) + " Ulam(4096) rel=" + g(ulam) + " tol=" + g(tol::kOracle);
    return po <= tol::kOracle && ulam <= tol::kOracle;
  });

  criterion(3, "base potential factorization", [](std::string& d) {
    const std::size_t n = 512;
    const TrigPotential phi(2, {TrigTerm::cosine(0.4, {1, 0}), TrigTerm::sine(0.3, {0, 1})});
    const double P2 = solve_eigendata<1>(TrigPotential(1, {TrigTerm::sine(0.3, {1})}), 2, Shape<1>{n}, {}).pressure;
    const BasePotential bp = base_potential(phi, 2, Shape<2>{n, n}, {});
    double err = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(i) / static_cast<double>(n);
      err = std::max(err, std::abs(bp.phi_base[i] - (0.4 * std::cos(6.283185307179586 * x) + P2)));
    }
    d = "sup err=" + g(err) + " k=" + std::to_string(bp.k_used) + " tol=" + g(tol::kBaseFactorization);
    return err <= tol::kBaseFactorization && bp.k_used <= 30;
  });

  const ConditionalFamily coupled = conditional_family(kCoupled, 2, Shape<2>{512, 512}, {});

  criterion(4, "pressure equality (coupled)", [&](std::string& d) {
    const double gap = std::abs(coupled.pressure_gap());
    d = "|P(phi)-P(Phi)|=" + g(gap) + " tol=" + g(tol::kPressure);
    return gap <= tol::kPressure;
  });

  criterion(5, "disintegration (coupled)", [&](std::string& d) {
    const double e = max_suite_error(
        [&](const TestFunction& psi) { return disintegration_integral(coupled, psi) - equilibrium_integral(coupled, psi); });
    d = "max err=" + g(e) + " over " + std::to_string(torus_test_suite().size()) + " tests tol=" + g(tol::kDisintegration);
    return e <= tol::kDisintegration;
  });

  criterion(6, "measure transport + order", [&](std::string& d) {
    const Pipeline& a = generic(256);
    const Pipeline& b = generic(512);
    const double ea = max_suite_error([&](const TestFunction& psi) { return pushforward_integral(a.fam, a.H, psi); });
    const double eb = max_suite_error([&](const TestFunction& psi) { return pushforward_integral(b.fam, b.H, psi); });
    const double ratio = ea / eb;
    d = "err@512=" + g(eb) + " tol=" + g(tol::kTransport) + " ratio 256->512=" + g(ratio) + " min=" +
        g(tol::kTransportRatio);
    return eb <= tol::kTransport && ratio >= tol::kTransportRatio;
  });

  criterion(7, "conjugacy identity refinement", [&](std::string& d) {
    const double e512 = conjugacy_identity_error(generic(512).H, generic(512).F).sup;
    const double e1024 = conjugacy_identity_error(generic(1024).H, generic(1024).F).sup;
    const double ratio = e512 / e1024;
    d = "err@512=" + g(e512) + " err@1024=" + g(e1024) + " ratio=" + g(ratio) + " min=" + g(tol::kConjugacyRatio);
    return ratio >= tol::kConjugacyRatio;
  });

  criterion(8, "Lebesgue invariance of F", [&](std::string& d) {
    const Pipeline& p = generic(512);
    const double e = max_suite_error([&](const TestFunction& psi) { return lebesgue_pullback_integral(p.F, psi); });
    d = "max err=" + g(e) + " tol=" + g(tol::kLebesgue);
    return e <= tol::kLebesgue;
  });

  DerivativeStats s1024;
  criterion(9, "derivative formulas (n=1024)", [&](std::string& d) {
    s1024 = derivative_stats(generic(1024));
    d = "median f'=" + g(s1024.f_median) + " g'=" + g(s1024.g_median) + " tol=" + g(tol::kFiniteDifference) +
        " min f'=" + g(s1024.f_min) + " min g'=" + g(s1024.g_min);
    return s1024.f_median <= tol::kFiniteDifference && s1024.g_median <= tol::kFiniteDifference && s1024.f_min > 1.0 &&
           s1024.g_min > 1.0;
  });

  criterion(10, "Jacobian identity (n=1024)", [&](std::string& d) {
    d = "sup rel=" + g(s1024.jacobian_identity) + " tol=" + g(tol::kJacobian) + " FD det median=" +
        g(s1024.det_median) + " tol=" + g(tol::kFiniteDifference);
    return s1024.jacobian_identity <= tol::kJacobian && s1024.det_median <= tol::kFiniteDifference;
  });

  criterion(11, "symmetry audit d=2..5", [](std::string& d) {
    bool ok = true;
    for (long deg = 2; deg <= 5; ++deg) {
      const SymmetryAudit a = enumerate_symmetries(deg, 4096, tol::kSymmetry);
      ok = ok && a.agrees;
      std::printf("     %s\n", a.diagnostic.c_str());
    }
    d = ok ? "brute force = {k/(d-1)} per orientation" : "brute force differs from {k/(d-1)}";
    return ok;
  });

  criterion(12, "Weierstrass shear", [](std::string& d) {
    const auto W = weierstrass_shear(TrigPotential(1, {TrigTerm::sine(1.0, {1})}), 2, 30, 1024);
    const double r = W.sup_residual({0.1, 0.2345678, 0.5 + 1e-7, 0.9999});
    const ModulusReport m = modulus_estimate(W.beta());
    d = "residual=" + g(r) + " tol=2^-28 modulus slope=" + g(m.slope) + " (fit rms " + g(m.fit_residual) + ")";
    return r <= tol::kWeierstrass;
  });

  criterion(13, "T^3 recursion (32^3)", [](std::string& d) {
    const FamilyConfig cfg;
    const T3Conjugacy zero = t3_conjugacy(TrigPotential(3), 2, Shape<3>{32, 32, 32}, cfg);
    const T3Checks zc = t3_checks(t3_skew_product(zero));
    const double id = t3_identity_deviation(zero);
    const std::array<TrigPotential, 3> parts{TrigPotential(1, {TrigTerm::cosine(0.3, {1})}),
                                             TrigPotential(1, {TrigTerm::sine(0.2, {1})}),
                                             TrigPotential(1, {TrigTerm::cosine(0.1, {2})})};
    const TrigPotential sep(3, {TrigTerm::cosine(0.3, {1, 0, 0}), TrigTerm::sine(0.2, {0, 1, 0}),
                                TrigTerm::cosine(0.1, {0, 0, 2})});
    const double dev = t3_separable_deviation(t3_conjugacy(sep, 2, Shape<3>{32, 32, 32}, cfg), parts, cfg);
    d = "zero: H-id=" + g(id) + " F-E_d=" + g(zc.conjugacy_error) + "; separable dev=" + g(dev) +
        " tol=" + g(tol::kT3Separable);
    return id <= 1e-12 && zc.conjugacy_error <= 1e-12 && dev <= tol::kT3Separable;
  });

  criterion(14, "determinism", [](std::string& d) {
    const fs::path root = fs::temp_directory_path() / "eqconj_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);
    const std::string cfg2 = (root / "c2.json").string();
    std::ofstream(cfg2) << R"({"dimension": 2, "degree": 2, "grid": {"base_n": 128, "fiber_n": 128},
      "potential": [{"amplitude": 0.25, "freq": [1, 1]}, {"amplitude": 0.1, "freq": [1, -2], "phase": 0.3}]})";
    const std::string cfg1 = (root / "c1.json").string();
    std::ofstream(cfg1) << R"({"dimension": 1, "degree": 2, "grid": {"base_n": 64},
      "potential": [{"amplitude": 1.0, "freq": [1], "phase": -1.5707963267948966}]})";
    const std::string cfg3 = (root / "c3.json").string();
    std::ofstream(cfg3) << R"({"dimension": 3, "degree": 2, "grid": {"base_n": 16, "fiber_n": 16, "fiber2_n": 16},
      "potential": [{"amplitude": 0.15, "freq": [1, 1, 0]}, {"amplitude": 0.1, "freq": [0, 1, 1]}]})";
    const std::vector<std::pair<std::string, std::string>> runs{
        {"solve", cfg2}, {"conjugate", cfg2}, {"verify", cfg2}, {"count-symmetries", cfg1},
        {"weierstrass", cfg1}, {"t3", cfg3}};
    std::size_t files = 0;
    for (const auto& [cmd, cfg] : runs) {
      fs::path dirs[2];
      for (int r = 0; r < 2; ++r) {
        dirs[r] = root / (cmd + "_" + std::to_string(r));
        cli::CommandOptions o;
        o.config_path = cfg;
        o.out_dir = dirs[r].string();
        std::ostringstream log, err;
        cli::run_command(cmd, o, log, err);
      }
      for (const auto& e : fs::directory_iterator(dirs[0])) {
        const std::string name = e.path().filename().string();
        if (name == "manifest.json") continue;
        ++files;
        if (slurp(e.path()) != slurp(dirs[1] / name)) {
          d = cmd + "/" + name + " differs";
          return false;
        }
      }
    }
    d = std::to_string(files) + " artifacts byte-identical across 6 commands";
    return files > 0;
  });

  std::printf("%d of 14 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
