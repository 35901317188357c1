#include <doctest.h>

#include "eqconj/errors.hpp"
#include "eqconj/grid.hpp"
#include "support.hpp"

using namespace eqconj;

TEST_CASE("wrap and torus distance") {
  testing::Gen gen(1);
  for (int i = 0; i < 500; ++i) {
    const double a = gen.uniform(-5, 5), b = gen.uniform(-5, 5);
    const double w = wrap01(a);
    CHECK(w >= 0.0);
    CHECK(w < 1.0);
    CHECK(torus_distance(a, b) == doctest::Approx(torus_distance(b, a)));
    CHECK(torus_distance(a, b) <= 0.5);
    CHECK(torus_distance(a, a + 3.0) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("locate finds the containing cell") {
  testing::Gen gen(2);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = static_cast<std::size_t>(gen.integer(2, 300));
    const double t = gen.uniform(0, 1);
    const GridLocation loc = locate(t, n);
    CHECK(loc.k < n);
    CHECK(loc.frac >= 0.0);
    CHECK(loc.frac < 1.0);
    CHECK((static_cast<double>(loc.k) + loc.frac) / static_cast<double>(n) == doctest::Approx(t).epsilon(1e-12));
  }
}

TEST_CASE("monotone circle maps") {
  testing::Gen gen(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.integer(2, 64));
    const long d = gen.integer(1, 4);
    std::vector<double> incr = gen.vec(n, 0.1, 1.0);
    double total = 0;
    for (double v : incr) total += v;
    std::vector<double> lift(n);
    double acc = gen.uniform(-0.3, 0.3);
    for (std::size_t k = 0; k < n; ++k) {
      lift[k] = acc;
      acc += incr[k] * static_cast<double>(d) / total;
    }
    const MonotoneCircleMap m(lift, d);
    for (int i = 0; i < 20; ++i) {
      const double t = gen.uniform(-2, 2);
      CHECK(m(t + 1.0) == doctest::Approx(m(t) + static_cast<double>(d)).epsilon(1e-12));
      CHECK(m.inverse(m(t)) == doctest::Approx(t).epsilon(1e-10));
      const double s = t + gen.uniform(1e-3, 0.5);
      CHECK(m(s) > m(t));
    }
  }
  CHECK_THROWS_AS(MonotoneCircleMap({0.0, 0.6, 0.5}, 1), ResolutionError);
  CHECK_THROWS_AS(MonotoneCircleMap({0.0}, 1), InvalidArgument);
}

TEST_CASE("node CDF of uniform weights is the identity") {
  const NodeCdf c = NodeCdf::of(std::vector<double>(37, 2.5));
  for (std::size_t k = 0; k < 37; ++k) CHECK(c.node(k) == doctest::Approx(static_cast<double>(k) / 37.0).epsilon(1e-14));
  CHECK(c(0.0) == 0.0);
}

TEST_CASE("node CDF pushes node masses onto dual cells") {
  testing::Gen gen(4);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.integer(2, 200));
    const auto w = gen.vec(n, 0.01, 1.0);
    double total = 0;
    for (double v : w) total += v;
    const NodeCdf c = NodeCdf::of(w);
    CHECK(c(0.0) == doctest::Approx(0.0).epsilon(1e-14));
    for (std::size_t k = 1; k < n; ++k) {
      CHECK(c.half_node(k) - c.half_node(k - 1) == doctest::Approx(w[k] / total).epsilon(1e-12));
    }
    CHECK(c.half_node(0) + 1.0 - c.half_node(n - 1) == doctest::Approx(w[0] / total).epsilon(1e-12));
    const double u = gen.uniform(0, 1);
    CHECK(c(c.inverse(u)) == doctest::Approx(u).epsilon(1e-12));
  }
}

TEST_CASE("node weights normalize and reject bad input") {
  const NodeWeights<1> w(Field<1>(Shape<1>{4}, std::vector<double>{1, 1, 2, 0}));
  CHECK(w[2] == doctest::Approx(0.5));
  CHECK_THROWS_AS(NodeWeights<1>(Field<1>(Shape<1>{2}, std::vector<double>{1, -1})), InvalidArgument);
  CHECK_THROWS_AS(NodeWeights<1>(Field<1>(Shape<1>{2}, 0.0)), InvalidArgument);
}

TEST_CASE("field slabs and rows") {
  Field<3> f(Shape<3>{2, 3, 4});
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = static_cast<double>(i);
  CHECK(f.slab(1).size() == 12);
  CHECK(f.slab(1)[0] == 12.0);
  CHECK(f.row(1).size() == 4);
  CHECK(f.row(1)[0] == 4.0);
  CHECK(f.at({1, 2, 3}) == 23.0);
}
