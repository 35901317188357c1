#include "eqconj/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <tuple>

namespace eqconj {
namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

CheckResult make_check(std::string name, std::string anchor, double error, double tolerance,
                       std::vector<std::size_t> grid, bool lower_bound = false) {
  CheckResult c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.error = error;
  c.tolerance = tolerance;
  c.lower_bound = lower_bound;
  c.pass = lower_bound ? error >= tolerance : error <= tolerance;
  c.grid = std::move(grid);
  return c;
}

template <typename F>
CheckResult timed(F&& f) {
  const auto t0 = Clock::now();
  CheckResult c = f();
  c.runtime_s = std::chrono::duration<double>(Clock::now() - t0).count();
  return c;
}

std::string str(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

bool VerificationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult* VerificationReport::first_failure() const {
  for (const CheckResult& c : checks) {
    if (!c.pass) return &c;
  }
  return nullptr;
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const CheckResult& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

Pipeline build_pipeline(const TrigPotential& phi, long d, const Shape<2>& shape, const FamilyConfig& cfg) {
  Pipeline p{conditional_family(phi, d, shape, cfg), {}, {}};
  p.H = build_conjugacy(p.fam);
  p.F = assemble_skew_product(p.fam, p.H);
  return p;
}

DerivativeStats derivative_stats(const Pipeline& p) {
  const SkewProductMap& F = p.F;
  const std::size_t nb = F.n_base();
  const std::size_t nf = F.n_fiber();
  const double hb = 1.0 / static_cast<double>(nb);
  const double hf = 1.0 / static_cast<double>(nf);
  const DerivativeModel model(p.fam, p.H);
  DerivativeStats s;
  std::vector<double> ef(nb);
  std::vector<double> eg;
  std::vector<double> ed;
  eg.reserve(nb * nf);
  ed.reserve(nb * nf);
  s.f_min = F.f_prime.min();
  s.g_min = F.g_prime.min();
  for (std::size_t j = 0; j < nb; ++j) {
    const double u = static_cast<double>(j) * hb;
    const double fd = (F.f_value(u + hb) - F.f_value(u - hb)) / (2.0 * hb);
    ef[j] = std::abs(fd / F.f_prime[j] - 1.0);
    for (std::size_t k = 0; k < nf; ++k) {
      const double v = static_cast<double>(k) * hf;
      const double gd = (F.g_value(u, v + hf) - F.g_value(u, v - hf)) / (2.0 * hf);
      const double gp = F.g_prime.at({j, k});
      eg.push_back(std::abs(gd / gp - 1.0));
      ed.push_back(std::abs(fd * gd / (F.f_prime[j] * gp) - 1.0));
      const double target = model.jacobian_target(u, v);
      s.jacobian_identity = std::max(s.jacobian_identity, std::abs(F.f_prime[j] * gp / target - 1.0));
    }
  }
  s.f_median = median(std::move(ef));
  s.g_median = median(std::move(eg));
  s.det_median = median(std::move(ed));
  return s;
}

VerificationReport run_verification(const Pipeline& p) {
  const ConditionalFamily& fam = p.fam;
  const TorusConjugacy& H = p.H;
  const SkewProductMap& F = p.F;
  const std::vector<std::size_t> grid{fam.n_base(), fam.n_fiber()};
  const double n = static_cast<double>(std::max(fam.n_base(), fam.n_fiber()));
  const std::vector<TestFunction> suite = torus_test_suite();
  VerificationReport rep;

  rep.checks.push_back(timed([&] {
    const ConjugacyError e = conjugacy_identity_error(H, F);
    CheckResult c = make_check("conjugacy_identity", "F o H = H o E_d on the grid", e.sup, 1.0 / n, grid);
    c.detail = "worst node (" + std::to_string(e.worst_base) + ", " + std::to_string(e.worst_fiber) + ")";
    return c;
  }));
  rep.checks.push_back(timed([&] {
    double worst = 0.0;
    std::string arg;
    for (const TestFunction& psi : suite) {
      const double e = std::abs(pushforward_integral(fam, H, psi));
      if (e > worst) {
        worst = e;
        arg = psi.name;
      }
    }
    CheckResult c = make_check("pushforward", "H pushes mu to Lebesgue", worst, tol::kTransport, grid);
    c.detail = "worst test function " + arg;
    return c;
  }));
  rep.checks.push_back(timed([&] {
    const std::vector<double> e = fiber_transport_errors(fam, H);
    const auto it = std::max_element(e.begin(), e.end());
    CheckResult c = make_check("fiber_pushforward", "c_x pushes mu_x to Lebesgue on every fiber", *it,
                               tol::kTransport, grid);
    c.detail = "worst fiber " + std::to_string(it - e.begin());
    return c;
  }));
  rep.checks.push_back(timed([&] {
    double worst = 0.0;
    for (const TestFunction& psi : suite) worst = std::max(worst, std::abs(lebesgue_pullback_integral(F, psi)));
    return make_check("lebesgue_invariance", "F preserves Lebesgue measure", worst, tol::kLebesgue, grid);
  }));
  rep.checks.push_back(timed([&] {
    return make_check("pressure_equality", "P(phi) = P(Phi)", std::abs(fam.pressure_gap()), tol::kPressure, grid);
  }));
  rep.checks.push_back(timed([&] {
    double worst = 0.0;
    for (const TestFunction& psi : suite) {
      worst = std::max(worst, std::abs(disintegration_integral(fam, psi) - equilibrium_integral(fam, psi)));
    }
    return make_check("disintegration", "mu = int mu_x dmu_hat", worst, tol::kDisintegration, grid);
  }));
  rep.checks.push_back(timed([&] {
    const Field<2>& w = fam.mu.nodes.weights();
    double tv = 0.0;
    for (std::size_t i = 0; i < fam.n_base(); ++i) {
      const std::span<const double> r = w.row(i);
      double m = 0.0;
      for (double v : r) m += v;
      tv += std::abs(m - fam.mu_hat.nodes[i]);
    }
    return make_check("base_marginal", "mu_hat is the base marginal of mu (total variation)", 0.5 * tv,
                      tol::kMarginalTV, grid);
  }));
  rep.checks.push_back(timed([&] {
    return make_check("fiber_duality", "nu_{dx}(L_x psi) = exp(Phi(x)) nu_x(psi)", fam.duality_residual,
                      tol::kFiberDuality, grid);
  }));

  const auto t0 = Clock::now();
  const DerivativeStats ds = derivative_stats(p);
  const double t_deriv = std::chrono::duration<double>(Clock::now() - t0).count() / 6.0;
  auto deriv = [&](CheckResult c) {
    c.runtime_s = t_deriv;
    rep.checks.push_back(std::move(c));
  };
  {
    CheckResult c = make_check("base_derivative_fd", "f' = exp(-Phi~ o chat^{-1}) against one-cell differences",
                               ds.f_median, tol::kFiniteDifference, grid);
    c.median = ds.f_median;
    deriv(std::move(c));
  }
  {
    CheckResult c = make_check("fiber_derivative_fd", "g' = exp(-phi~_x o c_x^{-1}) against one-cell differences",
                               ds.g_median, tol::kFiniteDifference, grid);
    c.median = ds.g_median;
    deriv(std::move(c));
  }
  deriv(make_check("jacobian_identity", "f' g' = exp(-phi~ o H^{-1}), relative", ds.jacobian_identity,
                   tol::kJacobian, grid));
  {
    CheckResult c = make_check("jacobian_fd", "det DF against one-cell difference determinant", ds.det_median,
                               tol::kFiniteDifference, grid);
    c.median = ds.det_median;
    deriv(std::move(c));
  }
  for (const auto& [name, anchor, m] : {std::tuple{"expansion_f", "min f' > 1", ds.f_min},
                                        std::tuple{"expansion_g", "min g' > 1", ds.g_min}}) {
    CheckResult c = make_check(name, anchor, m, 1.0, grid, true);
    c.pass = m > 1.0;
    deriv(std::move(c));
  }

  rep.checks.push_back(timed([&] {
    const double dd = static_cast<double>(F.d);
    double e = std::abs(F.f.node(F.n_base()) - F.f.node(0) - dd);
    for (const MonotoneCircleMap& g : F.g) e = std::max(e, std::abs(g.node(F.n_fiber()) - g.node(0) - dd));
    if (F.f.degree() != F.d) e = std::max(e, 1.0);
    for (const MonotoneCircleMap& g : F.g) {
      if (g.degree() != F.d) e = std::max(e, 1.0);
    }
    return make_check("degree", "f and every g_u have degree d", e, tol::kDegree, grid);
  }));

  rep.notes.push_back("adjacent-fiber continuity: n max TV = " + str(fam.continuity_constant) +
                      ", n max W1 = " + str(fam.kantorovich_constant));
  rep.notes.push_back("fiber recursion rounds " + std::to_string(fam.Phi.k_used) + ", probe gap " +
                      str(fam.Phi.probe_gap));
  for (const std::string& w : fam.warnings) rep.notes.push_back("warning: " + w);
  return rep;
}

VerificationReport run_two_grid(const TrigPotential& phi, long d, const Shape<2>& shape, const FamilyConfig& cfg) {
  const Pipeline coarse = build_pipeline(phi, d, shape, cfg);
  VerificationReport a = run_verification(coarse);
  const Shape<2> fine_shape{2 * shape[0], 2 * shape[1]};
  const Pipeline fine = build_pipeline(phi, d, fine_shape, cfg);
  VerificationReport b = run_verification(fine);

  VerificationReport rep;
  for (CheckResult c : a.checks) {
    c.name += "@coarse";
    rep.checks.push_back(std::move(c));
  }
  for (CheckResult c : b.checks) {
    c.name += "@fine";
    rep.checks.push_back(std::move(c));
  }
  const std::vector<std::size_t> grid{shape[0], fine_shape[0]};
  auto ratio = [&](const std::string& name) {
    const double ec = a.find(name)->error;
    const double ef = b.find(name)->error;
    return ef > 0.0 ? ec / ef : INFINITY;
  };
  rep.checks.push_back(make_check("conjugacy_refinement", "conjugacy-identity error ratio per grid doubling",
                                  ratio("conjugacy_identity"), tol::kConjugacyRatio, grid, true));
  rep.checks.push_back(make_check("transport_refinement", "pushforward error ratio per grid doubling",
                                  ratio("pushforward"), tol::kTransportRatio, grid, true));
  rep.notes = a.notes;
  rep.notes.insert(rep.notes.end(), b.notes.begin(), b.notes.end());
  rep.notes.push_back("W1 continuity constant ratio fine/coarse = " +
                      str(fine.fam.kantorovich_constant / coarse.fam.kantorovich_constant));
  return rep;
}

}  // namespace eqconj
