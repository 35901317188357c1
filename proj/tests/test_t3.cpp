#include <doctest.h>

#include <cmath>

#include "eqconj/t3.hpp"

using namespace eqconj;

TEST_CASE("zero potential on T^3 is the identity") {
  const T3Conjugacy H = t3_conjugacy(TrigPotential(3), 2, Shape<3>{16, 16, 16}, {});
  CHECK(t3_identity_deviation(H) <= 1e-13);
  const T3Checks c = t3_checks(t3_skew_product(H));
  CHECK(c.conjugacy_error <= 1e-13);
  CHECK(c.pushforward_error <= 1e-13);
}

TEST_CASE("separable T^3 potential matches three 1D constructions") {
  const TrigPotential p1(1, {TrigTerm::cosine(0.3, {1})});
  const TrigPotential p2(1, {TrigTerm::sine(0.2, {1})});
  const TrigPotential p3(1, {TrigTerm::cosine(0.1, {2})});
  const TrigPotential phi(3, {TrigTerm::cosine(0.3, {1, 0, 0}), TrigTerm::sine(0.2, {0, 1, 0}),
                              TrigTerm::cosine(0.1, {0, 0, 2})});
  const std::size_t n = 16;
  const T3Conjugacy H = t3_conjugacy(phi, 2, Shape<3>{n, n, n}, {});
  std::array<NodeCdf, 3> c;
  const TrigPotential* parts[3] = {&p1, &p2, &p3};
  for (int a = 0; a < 3; ++a) {
    const auto e = solve_eigendata<1>(*parts[a], 2, Shape<1>{n}, {});
    c[a] = NodeCdf::of(equilibrium_state<1>(e).nodes.weights().values());
  }
  double dev = 0;
  for (std::size_t i = 0; i < n; ++i) {
    dev = std::max(dev, std::abs(H.base.half_node(i) - c[0].half_node(i)));
    for (std::size_t j = 0; j < n; ++j) {
      dev = std::max(dev, std::abs(H.fiber_y[i].half_node(j) - c[1].half_node(j)));
      for (std::size_t k = 0; k < n; ++k) {
        dev = std::max(dev, std::abs(H.fiber_z[i * n + j].half_node(k) - c[2].half_node(k)));
      }
    }
  }
  CHECK(dev <= 2e-2);
  CHECK(t3_separable_deviation(H, {p1, p2, p3}, {}) == doctest::Approx(dev).epsilon(1e-9));
}

TEST_CASE("coupled T^3 potential") {
  const TrigPotential phi(3, {TrigTerm::cosine(0.15, {1, 1, 0}), TrigTerm::cosine(0.1, {0, 1, 1}),
                              TrigTerm::sine(0.1, {1, 0, 1})});
  const std::size_t n = 16;
  const T3Conjugacy H = t3_conjugacy(phi, 2, Shape<3>{n, n, n}, {});
  const T3Checks c = t3_checks(t3_skew_product(H));
  CHECK(c.conjugacy_error <= 1.0 / static_cast<double>(n));
  CHECK(c.pushforward_error <= 2e-2);
  CHECK(std::abs(c.pressure_gap) <= 1e-4);
  for (int t = 0; t < 10; ++t) {
    const double x = 0.1 * t + 0.03, y = 0.9 - 0.07 * t, z = 0.5 + 0.04 * t;
    const auto u = H(x, y, z);
    const auto b = H.inverse(u[0], u[1], u[2]);
    CHECK(torus_distance(b[0], x) <= 1e-10);
    CHECK(torus_distance(b[1], y) <= 1e-10);
    CHECK(torus_distance(b[2], z) <= 1e-10);
  }
}

TEST_CASE("T^3 grids are bounded") {
  CHECK_THROWS_AS(t3_conjugacy(TrigPotential(3), 2, Shape<3>{128, 8, 8}, {}), InvalidArgument);
}
