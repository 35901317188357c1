#include <doctest.h>

#include <cmath>

#include "eqconj/analysis.hpp"
#include "eqconj/verification.hpp"
#include "support.hpp"

using namespace eqconj;

TEST_CASE("Markov partition of E_d") {
  for (long d = 2; d <= 6; ++d) {
    const MarkovPartition p(d);
    CHECK(p.is_markov());
    CHECK(p.breakpoints().size() == static_cast<std::size_t>(d + 1));
    CHECK(p.symbol(0.0) == 0);
    CHECK(p.symbol(1.0 / static_cast<double>(d)) == 1);
    CHECK(p.symbol(0.999999) == d - 1);
  }
}

TEST_CASE("coding of rationals") {
  // 1/3 = 0.010101... in base 2.
  CHECK(coding_rational(1, 3, 2, 6) == std::vector<int>{0, 1, 0, 1, 0, 1});
  // 5/8 = 0.101 in base 2.
  CHECK(coding_rational(5, 8, 2, 5) == std::vector<int>{1, 0, 1, 0, 0});
  CHECK(coding_rational(7, 9, 3, 4) == std::vector<int>{2, 1, 0, 0});
  testing::Gen gen(51);
  for (int t = 0; t < 200; ++t) {
    const long d = gen.integer(2, 6);
    const std::int64_t q = gen.integer(2, 500);
    const std::int64_t p = gen.integer(0, q - 1);
    const auto w = coding_rational(p, q, d, 8);
    // Digits reconstruct x to d^-8.
    double x = 0, s = 1.0 / static_cast<double>(d);
    for (int k : w) {
      CHECK(k >= 0);
      CHECK(k < d);
      x += k * s;
      s /= static_cast<double>(d);
    }
    const double xt = static_cast<double>(p) / static_cast<double>(q);
    CHECK(xt - x >= -1e-15);
    CHECK(xt - x < std::pow(static_cast<double>(d), -8) + 1e-15);
    // Float codings agree unless the orbit lands on a partition boundary.
    bool on_boundary = false;
    std::int64_t r = p;
    for (int j = 0; j < 4; ++j) {
      r = (r * d) % q;
      on_boundary = on_boundary || r == 0;
    }
    if (!on_boundary) {
      const auto wf = coding(xt, d, 4);
      CHECK(std::equal(wf.begin(), wf.end(), w.begin()));
    }
  }
}

TEST_CASE("symmetry enumeration agrees with the algebraic set") {
  for (long d = 2; d <= 6; ++d) {
    CAPTURE(d);
    const SymmetryAudit a = enumerate_symmetries(d);
    CHECK(a.agrees);
    CHECK(a.found.size() == static_cast<std::size_t>(2 * (d - 1)));
    CHECK(a.claimed_count == static_cast<std::size_t>(2 * d));
    CHECK(a.max_defect <= 1e-10);
    for (const CircleSymmetry& s : a.found) CHECK(commutation_defect(s, d) <= 1e-10);
  }
}

TEST_CASE("non-symmetries have large defect") {
  CHECK(commutation_defect({false, 0.25}, 2) > 0.1);
  CHECK(commutation_defect({true, 0.3}, 3) > 0.1);
  CHECK(commutation_defect({false, 0.5}, 3) <= 1e-15);
}

TEST_CASE("conjugacy orbit: rotation transports an invariant measure") {
  // phi is invariant under x -> x + 1/2, which commutes with E_3.
  const TrigPotential phi(2, {TrigTerm::cosine(0.3, {2, 0}), TrigTerm::cosine(0.2, {2, 1})});
  const Pipeline p = build_pipeline(phi, 3, Shape<2>{54, 54}, {});
  const auto syms = enumerate_symmetries(3).found;
  const auto orbit = conjugacy_orbit(p.fam, p.H, p.F, syms, {CircleSymmetry{}}, 5e-3);
  CHECK(orbit.size() == syms.size());
  for (const OrbitCandidate& c : orbit) {
    CAPTURE(c.label);
    if (!c.base.reversing) CHECK(c.transports_mu);
    if (c.base.reversing) CHECK_FALSE(c.transports_mu);
  }
}
