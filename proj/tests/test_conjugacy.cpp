#include <doctest.h>

#include <cmath>

#include "eqconj/conjugacy.hpp"
#include "eqconj/verification.hpp"
#include "support.hpp"

using namespace eqconj;

namespace {

const TrigPotential kGeneric(2, {TrigTerm::cosine(0.2, {1, 0}), TrigTerm::cosine(0.15, {1, 1}),
                                 TrigTerm::sine(0.1, {1, -2})});

}  // namespace

TEST_CASE("box average matches brute-force quadrature") {
  testing::Gen gen(31);
  for (const TestFunction& psi : torus_test_suite()) {
    const std::array<double, 2> lo{gen.uniform(-0.3, 0.5), gen.uniform(-0.3, 0.5)};
    const std::array<double, 2> hi{lo[0] + gen.uniform(0.01, 0.4), lo[1] + gen.uniform(0.01, 0.4)};
    const int m = 400;
    double acc = 0;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const double p[2] = {lo[0] + (hi[0] - lo[0]) * (i + 0.5) / m, lo[1] + (hi[1] - lo[1]) * (j + 0.5) / m};
        acc += psi(p);
      }
    }
    CAPTURE(psi.name);
    CHECK(box_average(psi, lo, hi) == doctest::Approx(acc / (m * m)).epsilon(1e-4));
  }
}

TEST_CASE("conjugate expansion of identity CDFs is E_d") {
  const NodeCdf id = NodeCdf::of(std::vector<double>(40, 1.0));
  for (long d : {2L, 3L}) {
    const MonotoneCircleMap f = conjugate_expansion(id, id, d, 40);
    for (std::size_t k = 0; k < 40; ++k) {
      CHECK(f.lift()[k] == doctest::Approx(static_cast<double>(d * static_cast<long>(k)) / 40.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("zero potential gives the identity conjugacy") {
  const std::size_t n = 128;
  const Pipeline p = build_pipeline(TrigPotential(2), 2, Shape<2>{n, n}, {});
  for (std::size_t k = 0; k < n; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(n);
    CHECK(std::abs(p.H.base.node(k) - x) <= 1e-13);
    CHECK(std::abs(p.H.fibers[k / 2].node(k) - x) <= 1e-13);
    CHECK(std::abs(p.F.f.lift()[k] - 2 * x) <= 1e-13);
    CHECK(std::abs(p.F.f_prime[k] - 2.0) <= 1e-12);
  }
  const GridFunction2D J = jacobian_field(p.fam, p.H);
  CHECK(std::abs(J.max() - 4.0) <= 1e-8);
  CHECK(std::abs(J.min() - 4.0) <= 1e-8);
  CHECK(conjugacy_identity_error(p.H, p.F).sup <= 1e-13);
}

TEST_CASE("separable fibers are the 1D node CDF") {
  const std::size_t n = 64;
  const TrigPotential phi(2, {TrigTerm::cosine(0.4, {1, 0}), TrigTerm::sine(0.3, {0, 1})});
  const auto fam = conditional_family(phi, 2, Shape<2>{n, n}, {});
  const TorusConjugacy H = build_conjugacy(fam);
  const auto e2 = solve_eigendata<1>(TrigPotential(1, {TrigTerm::sine(0.3, {1})}), 2, Shape<1>{n}, {});
  const auto e1 = solve_eigendata<1>(TrigPotential(1, {TrigTerm::cosine(0.4, {1})}), 2, Shape<1>{n}, {});
  const NodeCdf c2 = NodeCdf::of(equilibrium_state<1>(e2).nodes.weights().values());
  const NodeCdf c1 = NodeCdf::of(equilibrium_state<1>(e1).nodes.weights().values());
  double dev = 0;
  for (std::size_t i = 0; i < n; ++i) {
    dev = std::max(dev, std::abs(H.base.half_node(i) - c1.half_node(i)));
    for (std::size_t k = 0; k < n; ++k) dev = std::max(dev, std::abs(H.fibers[i].half_node(k) - c2.half_node(k)));
  }
  CHECK(dev <= 1e-9);
}

TEST_CASE("generic potential: conjugacy, transport and invariance") {
  const std::size_t n = 128;
  const Pipeline p = build_pipeline(kGeneric, 2, Shape<2>{n, n}, {});
  const ConjugacyError ce = conjugacy_identity_error(p.H, p.F);
  CHECK(ce.sup <= 1.0 / static_cast<double>(n));
  for (const TestFunction& psi : torus_test_suite()) {
    CAPTURE(psi.name);
    const double exact = psi.freq[0] == 0 && psi.freq[1] == 0 ? 1.0 : 0.0;
    CHECK(std::abs(pushforward_integral(p.fam, p.H, psi) - exact) <= 5e-3);
    CHECK(std::abs(lebesgue_pullback_integral(p.F, psi) - exact) <= 5e-3);
  }
  for (double e : fiber_transport_errors(p.fam, p.H)) CHECK(e <= 1e-12);
  for (int t = 0; t < 20; ++t) {
    const double x = 0.05 * t + 0.013, y = 0.71 - 0.03 * t;
    const auto u = p.H(x, y);
    const auto back = p.H.inverse(u[0], u[1]);
    CHECK(torus_distance(back[0], x) <= 1e-10);
    CHECK(torus_distance(back[1], y) <= 1e-10);
  }
}

TEST_CASE("derivative fields agree with finite differences") {
  const Pipeline p = build_pipeline(kGeneric, 2, Shape<2>{256, 256}, {});
  const DerivativeStats s = derivative_stats(p);
  CHECK(s.f_median <= 1e-2);
  CHECK(s.g_median <= 1e-2);
  CHECK(s.det_median <= 1e-2);
  CHECK(s.f_min > 1.0);
  CHECK(s.g_min > 1.0);
  // The relative Jacobian residual equals the numerical pressure gap.
  CHECK(std::abs(s.jacobian_identity - std::abs(std::expm1(-p.fam.pressure_gap()))) <= 1e-12);
}

TEST_CASE("pushforward defect converges faster than the conjugacy defect") {
  const Pipeline a = build_pipeline(kGeneric, 2, Shape<2>{64, 64}, {});
  const Pipeline b = build_pipeline(kGeneric, 2, Shape<2>{128, 128}, {});
  double ea = 0, eb = 0;
  for (const TestFunction& psi : torus_test_suite()) {
    ea = std::max(ea, std::abs(pushforward_integral(a.fam, a.H, psi)));
    eb = std::max(eb, std::abs(pushforward_integral(b.fam, b.H, psi)));
  }
  CHECK(eb < ea);
}
