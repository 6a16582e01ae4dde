#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bayesmap/bayesmap.hpp"
#include "test_support.hpp"

using namespace bayesmap;
using namespace bayesmap::testing;
using Catch::Approx;

namespace {
const Density& cx() {
  static const Density d = counterexample::build();
  return d;
}
}  // namespace

TEST_CASE("MAP examples", "[estimators]") {
  const auto a = map_estimate(cx(), Box(-1.0, 22.0));
  CHECK(a.sup_value == 1.0);
  CHECK(a.canonical == Point{0.0});
  REQUIRE(a.maximizers.size() == 1);
  CHECK(a.maximizers[0].is_point());

  const auto u = map_estimate(Density{uniform01()}, Box(-1.0, 2.0));
  CHECK(u.sup_value == 1.0);
  REQUIRE(u.maximizers.size() == 1);
  CHECK(u.maximizers[0].axis(0).lo == 0.0);
  CHECK(u.maximizers[0].axis(0).hi == 1.0);
  CHECK(u.canonical == Point{0.0});

  const auto t = map_estimate(Density{triangle()}, Box(-2.0, 2.0));
  CHECK(t.sup_value == 1.0);
  CHECK(t.canonical == Point{0.0});

  CHECK_THROWS_AS(map_estimate(Density{triangle()}, Box(1.0, -1.0)), EmptySearchBox);
}

TEST_CASE("MAP at a jump uses the envelope value", "[estimators]") {
  const auto a = map_estimate(Density{step_density()}, Box(-1.0, 1.0));
  CHECK(a.sup_value == 2.0);
  REQUIRE(a.maximizers.size() == 1);
  CHECK(a.maximizers[0].axis(0).lo == 0.0);
  CHECK(a.maximizers[0].axis(0).hi == 0.5);
}

TEST_CASE("declared infinite values give sup_infinite", "[estimators]") {
  DensityOptions o;
  o.unbounded_at = {0.25};
  const Density d = UscDensity1D({Piece::constant(0.0, 1.0, 1.0)}, o);
  const auto a = map_estimate(d, Box(0.0, 1.0));
  CHECK(a.sup_infinite);
  CHECK(std::isinf(a.sup_value));
  CHECK(a.canonical == Point{0.25});
  // Outside the box the point does not count.
  CHECK_FALSE(map_estimate(d, Box(0.5, 1.0)).sup_infinite);
}

TEST_CASE("MAP on a 2D grid matches a brute-force cell scan", "[estimators][grid]") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> v(6 * 5);
  for (auto& x : v) x = U(rng);
  const GridDensity g = GridDensity::two_d({-1.0, 2.0}, {0.5, 0.25}, 6, 5, v);
  std::size_t best = 0;
  for (std::size_t k = 1; k < g.values().size(); ++k)
    if (g.values()[k] > g.values()[best]) best = k;
  const Box cell = g.cell_box(best / 5, best % 5);
  const auto a = map_estimate(Density{g}, g.extent());
  CHECK(a.sup_value == g.values()[best]);
  CHECK(cell.distance(a.canonical) <= 1e-6);
}

TEST_CASE("Bayes estimate examples", "[estimators]") {
  const auto a = bayes_estimate(cx(), LossSpec(8.0), Box(-0.5, 0.5));
  CHECK(a.canonical[0] == Approx(0.0).margin(1e-9));
  CHECK(a.sup_value == Approx(1.0 / 6.0).margin(1e-14));

  const auto u = bayes_estimate(Density{uniform01()}, LossSpec(10.0), Box(-1.0, 2.0));
  CHECK(u.sup_value == Approx(0.2).margin(1e-14));
  REQUIRE(u.maximizers.size() == 1);
  CHECK(u.maximizers[0].axis(0).lo == Approx(0.1).margin(1e-9));
  CHECK(u.maximizers[0].axis(0).hi == Approx(0.9).margin(1e-9));
}

TEST_CASE("Bayes estimate on the counterexample leaves the center", "[estimators][counterexample]") {
  const auto a = bayes_estimate(cx(), LossSpec(8.0), Box(-1.0, 3.0));
  CHECK(a.sup_value >= 0.17578125);
  CHECK(a.sup_value > 1.0 / 6.0);
  for (const auto& m : a.maximizers) CHECK((m.axis(0).lo >= 0.5 || m.axis(0).hi <= -0.5));
  CHECK(a.canonical[0] > 2.0);
  CHECK(a.canonical[0] < 2.25);

  // Dense scan oracle at step 1e-6.
  const BallObjective g(cx(), 1.0 / 8.0, false);
  double best = -1.0, best_x = 0.0;
  for (long i = 0; i <= 4000000; ++i) {
    const double t = -1.0 + 1e-6 * static_cast<double>(i);
    const double v = g.raw(t);
    if (v > best) {
      best = v;
      best_x = t;
    }
  }
  CHECK(best <= a.sup_value + 1e-12);
  CHECK(a.sup_value - best <= 1e-9);
  CHECK(a.distance_to({best_x}) <= 2e-6);
}

TEST_CASE("approx_gap examples", "[estimators]") {
  const Density tri = triangle();
  const auto b = bayes_estimate(tri, LossSpec(4.0), Box(-2.0, 2.0));
  CHECK(approx_gap(tri, LossSpec(4.0), b.canonical, Box(-2.0, 2.0)).gap <= b.tol_value);

  const Density uni = uniform01();
  const auto g = approx_gap(uni, LossSpec(10.0), {0.0}, Box(-1.0, 2.0));
  CHECK(g.gap == Approx(0.1).margin(1e-14));
  CHECK(g.normalized_gap == Approx(0.5).margin(1e-12));
  CHECK_THROWS_AS(approx_gap(uni, LossSpec(10.0), {3.0}, Box(-1.0, 2.0)), InvalidInput);
  CHECK_THROWS_AS(LossSpec(0.0), InvalidInput);
  CHECK_THROWS_AS(LossSpec(-1.0), InvalidInput);
}

TEST_CASE("loss ball is open", "[estimators]") {
  const LossSpec L(4.0);
  CHECK(L.radius() == 0.25);
  CHECK(L(0.0, 0.2) == 0.0);
  CHECK(L(0.0, 0.25) == 1.0);
  CHECK(L(0.0, -0.3) == 1.0);
}

TEST_CASE("Bayes and mollified maximizers agree", "[estimators][property]") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_density(rng);
    const Density d = f;
    const Box box(f.support_lo() - 0.3, f.support_hi() + 0.3);
    const double c = 2.0 + 40.0 * U(rng);
    const auto bayes = bayes_estimate(d, LossSpec(c), box);
    const auto moll = mollified_sup(BallObjective::mollified(d, c), box);
    REQUIRE(bayes.maximizers.size() == moll.maximizers.size());
    CHECK(distance(bayes.canonical, moll.canonical) <= 1e-8);
    // Monotone bound against the MAP value.
    const auto map = map_estimate(d, box);
    CHECK(bayes.sup_value <= std::min(1.0, 2.0 / c * map.sup_value) + 1e-12);
  }
}

TEST_CASE("gap at the MAP point shrinks along the ladder", "[estimators][property]") {
  for (const Density& d : {Density{triangle()}, Density{skewed_triangle()}, Density{skewed_cusp()},
                           Density{skewed_trapezoid()}}) {
    const Box box = support_box(d);
    const Point map = map_estimate(d, box).canonical;
    double prev = std::numeric_limits<double>::infinity();
    for (int nu = 1; nu <= 8; ++nu) {
      const double gap = approx_gap(d, LossSpec(counterexample::ladder_c(nu)), map, box).gap;
      CHECK(gap <= prev + 1e-12);
      if (prev > 1e-12) CHECK(gap < prev + 1e-12);
      prev = gap;
    }
  }
}

TEST_CASE("plateau maximizers are centred on the plateau", "[estimators]") {
  // Plateau [0, 1] flanked by lower ramps of different slopes.
  const Density d = skewed_trapezoid();
  for (double c : {4.0, 10.0, 50.0}) {
    const auto a = bayes_estimate(d, LossSpec(c), Box(-1.0, 4.0));
    REQUIRE(a.maximizers.size() == 1);
    const Interval I = a.maximizers[0].axis(0);
    CHECK(I.midpoint() == Approx(0.5).margin(1e-9));
    CHECK(I.lo == Approx(1.0 / c).margin(1e-9));
  }
}

TEST_CASE("skewed fixtures have the expected Bayes offsets", "[estimators]") {
  for (double c : {8.0, 32.0, 1000.0}) {
    const double r = 1.0 / c;
    const auto a = bayes_estimate(Density{skewed_triangle()}, LossSpec(c), Box(-1.0, 3.0));
    CHECK(a.canonical[0] == Approx(r / 2).margin(1e-9));
    const auto b = bayes_estimate(Density{skewed_cusp()}, LossSpec(c), Box(-0.5, 2.0));
    CHECK(b.canonical[0] == Approx(0.6 * r).margin(1e-9));
  }
}

TEST_CASE("scanned points do not displace exact stationary maximizers", "[estimators]") {
  // Wide box, so the scan and the exact root both land near 0.6 r.
  for (int nu = 1; nu <= 8; ++nu) {
    const double c = counterexample::ladder_c(nu);
    const auto a = bayes_estimate(Density{skewed_cusp()}, LossSpec(c), Box(-1.0, 3.0));
    REQUIRE(a.maximizers.size() == 1);
    CHECK(a.canonical[0] == Approx(0.6 / c).margin(1e-12));
  }
}
