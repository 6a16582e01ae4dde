#include <catch_amalgamated.hpp>

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

#include "bayesmap/bayesmap.hpp"
#include "test_support.hpp"

using namespace bayesmap;
using namespace bayesmap::testing;
using Catch::Approx;
namespace ce = bayesmap::counterexample;

TEST_CASE("construction values", "[counterexample]") {
  CHECK(ce::build({1}).evaluate(0.0) == 1.0);
  const auto f3 = ce::build({3});
  CHECK(f3.evaluate(2.0 + 0.125) == 0.75);
  CHECK(ce::bump_knots(2).top_hi == 2.234375);
  for (int n : {1, 5, 20}) CHECK(ce::build({n}).evaluate(-0.7) == 0.0);
  CHECK_THROWS_AS(ce::build({0}), InvalidInput);
  CHECK_THROWS_AS(ce::build({61}), InvalidInput);

  // Heights and plateau values of every materialized bump.
  const auto f = ce::build();
  for (int n = 1; n <= 20; ++n) {
    const auto k = ce::bump_knots(n);
    CHECK(k.height == 1.0 - std::ldexp(1.0, -n));
    CHECK(f.evaluate(0.5 * (k.top_lo + k.top_hi)) == k.height);
    CHECK(k.resolved == (n <= 16));
  }
  // Center piece.
  for (double t : {-0.3, -0.01, 0.02, 0.45}) CHECK(f.evaluate(t) == Approx(1.0 - std::sqrt(2 * std::abs(t))).margin(1e-15));
}

TEST_CASE("continuity at every representable knot", "[counterexample]") {
  const auto f = ce::build();
  const auto knots = ce::knot_continuity(f, 20);
  CHECK(knots.size() == 3 + 4 * 16);
  for (const auto& k : knots) {
    INFO("bump " << k.bump << " at " << k.theta);
    CHECK(k.continuous);
  }
}

TEST_CASE("closed forms agree with integration", "[counterexample]") {
  const auto f = ce::build();
  CHECK(ce::objective_at_origin(1) == Approx(1.0 / 6.0).margin(1e-16));
  CHECK(ce::objective_at_origin(2) == Approx(1.0 / 16 - (2.0 / 3) / 64).margin(1e-16));
  CHECK(ce::objective_at_origin(3) == Approx(0.0143229166666).margin(1e-12));
  CHECK(ce::plateau_bound(1) == 0.17578125);
  CHECK(ce::plateau_bound(2) == Approx(15.0 / 16 * (1.0 / 16 - 1.0 / 4096)).margin(1e-16));
  for (int nu = 1; nu <= 10; ++nu) {
    const double r = ce::radius(nu);
    CHECK(r == 1.0 / ce::ladder_c(nu));
    CHECK(std::abs(f.integrate(-r, r) - ce::objective_at_origin(nu)) <= 1e-14);
    CHECK(std::abs(oracle_integral(f, -r, r) - ce::objective_at_origin(nu)) <= 1e-14);
    const double at_plateau = f.integrate_window(ce::plateau_center(nu), r);
    CHECK(at_plateau >= ce::plateau_bound(nu) - 1e-14);
    CHECK(ce::plateau_bound(nu) > ce::objective_at_origin(nu));
  }
  CHECK_THROWS_AS(ce::plateau_bound(11, 20), CutoffTooSmall);
  CHECK_THROWS_AS(ce::plateau_bound(0), InvalidInput);
  CHECK_THROWS_AS(ce::objective_at_origin(0), InvalidInput);
}

TEST_CASE("domination margin is positive in exact arithmetic", "[counterexample]") {
  // 3 * 256^nu * (plateau_bound - objective_at_origin) = 2 * 32^nu - 3 * 16^nu - 3 * 4^nu + 3.
  using boost::multiprecision::cpp_int;
  for (unsigned nu = 1; nu <= 64; ++nu) {
    const cpp_int p32 = cpp_int(1) << (5 * nu), p16 = cpp_int(1) << (4 * nu), p4 = cpp_int(1) << (2 * nu);
    const cpp_int margin = 2 * p32 - 3 * p16 - 3 * p4 + 3;
    CHECK(margin > 0);
  }
  for (int nu = 1; nu <= 20; ++nu) {
    const double lhs = ce::plateau_bound(nu, 60) - ce::objective_at_origin(nu);
    const double rhs = (2.0 / 3.0) * std::ldexp(1.0, -3 * nu) - std::ldexp(1.0, -4 * nu) -
                       std::ldexp(1.0, -6 * nu) + std::ldexp(1.0, -8 * nu);
    CHECK(lhs == Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("mass accounting", "[counterexample]") {
  for (int N : {1, 4, 12, 20}) {
    const auto f = ce::build({N});
    double expected = ce::center_mass();
    for (int n = 1; n <= N; ++n) expected += ce::bump_mass(n);
    CHECK(std::abs(f.total_mass() - expected) <= 1e-12);
    CHECK(std::abs(oracle_integral(f, -1.0, N + 1.0, 1e-14) - expected) <= 1e-12);
    CHECK(std::abs(expected + ce::omitted_mass(N) - 1.0) <= 1e-12);
  }
  CHECK(ce::center_mass() == Approx(oracle_integral(ce::build({1}), -0.5, 0.5, 1e-15)).margin(1e-13));
}

TEST_CASE("nonconvergence report", "[counterexample]") {
  const auto f = ce::build();
  const auto one = ce::verify_nonconvergence(f, 20, 1, Box(-1.0, 3.0));
  REQUIRE(one.rows.size() == 1);
  CHECK(one.rows[0].origin_value == Approx(1.0 / 6.0).margin(1e-15));
  CHECK(one.rows[0].plateau_bound == 0.17578125);
  CHECK(one.rows[0].outside_center);
  CHECK(one.map_is_origin);
  CHECK(one.rows[0].canonical[0] > 2.0);

  const auto four = ce::verify_nonconvergence(f, 20, 4, Box(-1.0, 9.0));
  CHECK(four.trace.verdict == Verdict::diverges_from_MAP);
  CHECK(four.all_outside);
  for (const auto& r : four.rows) {
    CHECK(r.bayes_sup >= r.plateau_objective - 1e-15);
    CHECK(r.plateau_objective >= r.plateau_bound - 1e-14);
    CHECK(r.plateau_bound > r.origin_value);
    CHECK(std::abs(r.canonical[0]) > 0.5);
  }
  CHECK_THROWS_AS(ce::verify_nonconvergence(f, 20, 4, Box(-1.0, 5.0)), InvalidInput);
  CHECK_THROWS_AS(ce::verify_nonconvergence(f, 6, 4, Box(-1.0, 9.0)), CutoffTooSmall);
}
