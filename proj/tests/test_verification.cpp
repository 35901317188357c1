#include <doctest.h>

#include <json.hpp>

#include "eqconj/cli/commands.hpp"
#include "eqconj/verification.hpp"

using namespace eqconj;

namespace {

const TrigPotential kGeneric(2, {TrigTerm::cosine(0.2, {1, 0}), TrigTerm::cosine(0.15, {1, 1}),
                                 TrigTerm::sine(0.1, {1, -2})});

}  // namespace

TEST_CASE("zero potential passes every check") {
  const VerificationReport r = run_verification(build_pipeline(TrigPotential(2), 2, Shape<2>{64, 64}, {}));
  for (const CheckResult& c : r.checks) {
    CAPTURE(c.name);
    CHECK(c.pass);
    CHECK(c.tolerance > 0.0);
    CHECK_FALSE(c.anchor.empty());
  }
  CHECK(r.all_pass());
  CHECK(r.first_failure() == nullptr);
}

TEST_CASE("generic potential passes at n = 512") {
  const VerificationReport r = run_verification(build_pipeline(kGeneric, 2, Shape<2>{512, 512}, {}));
  for (const CheckResult& c : r.checks) {
    CAPTURE(c.name);
    CAPTURE(c.error);
    CHECK(c.pass);
  }
}

TEST_CASE("a corrupted fiber is detected and localized") {
  Pipeline p = build_pipeline(kGeneric, 2, Shape<2>{128, 128}, {});
  const std::size_t bad = 37;
  p.H.fibers[bad] = NodeCdf::of(std::vector<double>(128, 1.0));
  const VerificationReport r = run_verification(p);
  const CheckResult* conj = r.find("conjugacy_identity");
  const CheckResult* fib = r.find("fiber_pushforward");
  REQUIRE(conj);
  REQUIRE(fib);
  CHECK_FALSE(conj->pass);
  CHECK_FALSE(fib->pass);
  CHECK(fib->detail.find("fiber 37") != std::string::npos);
  REQUIRE(r.first_failure());
  CHECK(r.first_failure()->name == "conjugacy_identity");
}

TEST_CASE("a corrupted base derivative fails the derivative checks") {
  Pipeline p = build_pipeline(kGeneric, 2, Shape<2>{128, 128}, {});
  for (std::size_t i = 0; i < 128; ++i) p.F.f_prime[i] *= 1.1;
  const VerificationReport r = run_verification(p);
  CHECK_FALSE(r.find("base_derivative_fd")->pass);
  CHECK_FALSE(r.find("jacobian_identity")->pass);
}

TEST_CASE("reports are deterministic") {
  const auto a = cli::report_to_json(run_verification(build_pipeline(kGeneric, 2, Shape<2>{64, 64}, {})));
  const auto b = cli::report_to_json(run_verification(build_pipeline(kGeneric, 2, Shape<2>{64, 64}, {})));
  CHECK(a.dump() == b.dump());
  CHECK(a.dump().find("runtime") == std::string::npos);
}

TEST_CASE("two-grid run adds refinement checks") {
  const VerificationReport r = run_two_grid(kGeneric, 2, Shape<2>{64, 64}, {});
  const CheckResult* t = r.find("transport_refinement");
  const CheckResult* c = r.find("conjugacy_refinement");
  REQUIRE(t);
  REQUIRE(c);
  CHECK(t->lower_bound);
  CHECK(c->lower_bound);
  CHECK(r.find("conjugacy_identity@coarse"));
  CHECK(r.find("conjugacy_identity@fine"));
}
