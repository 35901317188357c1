#include <doctest.h>

#include <cmath>

#include "eqconj/transfer.hpp"
#include "support.hpp"

using namespace eqconj;

namespace {
constexpr double kTwoPi = 6.283185307179586;
}

TEST_CASE("zero and constant potentials") {
  for (long d : {2L, 3L, 5L}) {
    CAPTURE(d);
    const auto e = solve_eigendata<1>(TrigPotential(1), d, Shape<1>{64}, {});
    CHECK(std::abs(e.lambda - static_cast<double>(d)) <= 1e-12);
    CHECK(e.h.max() - e.h.min() <= 1e-12);
    const double c = 0.37;
    const auto ec = solve_eigendata<1>(TrigPotential(1, {TrigTerm::constant(c, 1)}), d, Shape<1>{64}, {});
    CHECK(std::abs(ec.lambda - static_cast<double>(d) * std::exp(c)) <= 1e-11);
  }
  const auto e2 = solve_eigendata<2>(TrigPotential(2), 2, Shape<2>{32, 32}, {});
  CHECK(std::abs(e2.lambda - 4.0) <= 1e-12);
}

TEST_CASE("adjoint is the transpose under the nodal pairing") {
  testing::Gen gen(11);
  for (int trial = 0; trial < 10; ++trial) {
    const long d = gen.integer(2, 4);
    const auto phi = gen.potential(2, 3, 0.6);
    const auto op = make_transfer<2>(phi, d, Shape<2>{16, 24});
    Field<2> psi(Shape<2>{16, 24}, gen.vec(16 * 24, -1, 1));
    Field<2> nu(Shape<2>{16, 24}, gen.vec(16 * 24, 0, 1));
    const auto Lpsi = op.apply(psi);
    const auto Lnu = op.apply_adjoint(nu);
    double a = 0, b = 0, scale = 0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
      a += Lpsi[i] * nu[i];
      b += psi[i] * Lnu[i];
      scale += std::abs(Lpsi[i] * nu[i]);
    }
    CHECK(std::abs(a - b) <= 1e-13 * scale);
  }
}

TEST_CASE("transfer operator preserves positivity") {
  testing::Gen gen(12);
  const auto op = make_transfer<1>(gen.potential(1, 4, 1.0), 2, Shape<1>{50});
  Field<1> psi(Shape<1>{50}, gen.vec(50, 0.0, 1.0));
  psi[7] = 0.0;
  const auto out = op.apply(psi);
  CHECK(out.min() > 0.0);
}

TEST_CASE("coboundary potentials have pressure log d + c") {
  // phi = u - u o E_d + c has h = exp(-u) and lambda = d e^c.
  testing::Gen gen(13);
  for (int trial = 0; trial < 5; ++trial) {
    const long d = gen.integer(2, 3);
    const auto u = gen.potential(1, 2, 0.5);
    const double c = gen.uniform(-0.5, 0.5);
    const auto phi = u.sum(u.compose_times(d).scaled(-1.0)).sum(TrigPotential(1, {TrigTerm::constant(c, 1)}));
    const std::size_t n = 512;
    const auto e = solve_eigendata<1>(phi, d, Shape<1>{n}, {});
    CHECK(std::abs(e.pressure - (std::log(static_cast<double>(d)) + c)) <= 1e-5);
    double ratio_lo = 1e300, ratio_hi = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = e.h[i] * std::exp(u(static_cast<double>(i) / static_cast<double>(n)));
      ratio_lo = std::min(ratio_lo, r);
      ratio_hi = std::max(ratio_hi, r);
    }
    CHECK(ratio_hi / ratio_lo - 1.0 <= 1e-4);
  }
}

TEST_CASE("pressure agrees with the periodic-orbit and Ulam oracles") {
  const TrigPotential phi(1, {TrigTerm::cosine(0.5, {1})});
  const auto e = solve_eigendata<1>(phi, 2, Shape<1>{1024}, {});
  const double po = periodic_orbit_pressure(phi, 2, 20);
  CHECK(std::abs(e.pressure - po) <= 1e-4);
  const auto ulam = ulam_oracle(phi, 2, 1024);
  CHECK(std::abs(std::log(ulam.lambda) - e.pressure) <= 1e-4);
}

TEST_CASE("periodic-orbit pressure of a constant") {
  const TrigPotential c(1, {TrigTerm::constant(0.2, 1)});
  // (1/n) log((2^n - 1) e^{0.2 n})
  const double expect = 0.2 + std::log(std::pow(2.0, 12) - 1.0) / 12.0;
  CHECK(periodic_orbit_pressure(c, 2, 12) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("separable potentials factor through the tensor product") {
  testing::Gen gen(14);
  for (int trial = 0; trial < 3; ++trial) {
    const auto p1 = gen.potential(1, 2, 0.8);
    const auto p2 = gen.potential(1, 2, 0.8);
    std::vector<TrigTerm> terms;
    for (auto t : p1.terms()) terms.push_back({t.amplitude, {t.freq[0], 0}, t.phase});
    for (auto t : p2.terms()) terms.push_back({t.amplitude, {0, t.freq[0]}, t.phase});
    const TrigPotential phi(2, terms);
    const auto e1 = solve_eigendata<1>(p1, 2, Shape<1>{48}, {});
    const auto e2 = solve_eigendata<1>(p2, 2, Shape<1>{40}, {});
    const auto e = solve_eigendata<2>(phi, 2, Shape<2>{48, 40}, {});
    CHECK(std::abs(e.pressure - e1.pressure - e2.pressure) <= 1e-10);
  }
}

TEST_CASE("normalized potential and equilibrium state") {
  const TrigPotential phi(1, {TrigTerm::cosine(0.3, {1}), TrigTerm::sine(0.2, {2})});
  const auto op = make_transfer<1>(phi, 2, Shape<1>{512});
  const auto e = solve_eigendata<1>(op, {});
  CHECK(e.residual <= 1e-10);
  const auto np = normalize_potential<1>(op, e);
  CHECK(np.branch_sum_error <= 1e-10);
  const auto mu = equilibrium_state<1>(e);
  double total = 0;
  for (std::size_t i = 0; i < mu.nodes.size(); ++i) total += mu.nodes[i];
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
  // Invariance under E_2 for a few trig observables.
  for (long k : {1L, 2L, 3L}) {
    Field<1> psi(Shape<1>{512}), psi_e(Shape<1>{512});
    for (std::size_t i = 0; i < 512; ++i) {
      const double x = static_cast<double>(i) / 512.0;
      psi[i] = std::cos(kTwoPi * static_cast<double>(k) * x);
      psi_e[i] = std::cos(kTwoPi * static_cast<double>(2 * k) * x);
    }
    CHECK(std::abs(mu.nodes.pair(psi) - mu.nodes.pair(psi_e)) <= 1e-4);
  }
}
