#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hessfree/error.hpp"
#include "hessfree/oracles.hpp"
#include "hessfree/probe.hpp"
#include "hessfree/random.hpp"

using namespace hessfree;

namespace {

VectorOracle half_square() { return probe_map(builtin("cubic1d")); }

VectorOracle linear_map() {
  VectorOracle F;
  F.dim_in = 2;
  F.dim_out = 2;
  F.eval = [](const Point& x) { return Point{3.0 * x[0] - x[1] + 1.0, 0.5 * x[1] - 2.0}; };
  F.known_L = 0.0;
  F.label = "linear";
  return F;
}

Configuration random_config(Rng& rng, std::size_t n, std::size_t d) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back(uniform_ball_point(rng, d, 5.0));
  return Configuration(std::move(pts), dirichlet_uniform(rng, n));
}

}  // namespace

TEST_CASE("single point probes vanish") {
  const ProbeResult r = jensen_probe(half_square(), Configuration({Point{1.7}}, {1.0}));
  CHECK(r.gap == 0.0);
  CHECK(r.spread == 0.0);
  CHECK(!r.ratio);
}

TEST_CASE("affine maps have no Jensen gap") {
  Rng rng = make_rng(1, Stream::RandomConfigs, 0);
  for (int k = 0; k < 200; ++k) {
    const ProbeResult r = jensen_probe(linear_map(), random_config(rng, 2 + k % 5, 2));
    CHECK(r.gap <= 1e-12 * (1.0 + r.output_scale));
  }
}

TEST_CASE("equality case of the quadratic gradient map") {
  const ProbeResult r = jensen_probe(half_square(), Configuration({Point{0}, Point{2}}, {0.5, 0.5}));
  CHECK(r.gap == 0.5);
  CHECK(r.spread == 1.0);
  REQUIRE(r.ratio);
  CHECK(*r.ratio == 1.0);
  CHECK(r.oracle_label == "grad cubic1d(1)");

  const ProbeResult t = two_point_probe(half_square(), Point{0}, Point{2}, 0.5);
  CHECK(t.gap == 0.5);
  CHECK(t.spread == 1.0);
  CHECK(*t.ratio == 1.0);
}

TEST_CASE("two-point degeneracies") {
  for (double t : {0.0, 1.0}) {
    const ProbeResult r = two_point_probe(half_square(), Point{0}, Point{2}, t);
    CHECK(r.gap == 0.0);
    CHECK(r.spread == 0.0);
    CHECK(!r.ratio);
  }
  const ProbeResult same = two_point_probe(half_square(), Point{1.5}, Point{1.5}, 0.3);
  CHECK(same.gap == 0.0);
  CHECK(same.spread == 0.0);
  CHECK_THROWS_AS(two_point_probe(half_square(), Point{0}, Point{1}, 1.5), Error);
  CHECK_THROWS_AS(jensen_probe(half_square(), Configuration({Point{0, 1}}, {1.0})), Error);
}

TEST_CASE("ratio is constant in t for cubics") {
  for (double c : {1.0, -2.5, 0.25}) {
    const double p[] = {c};
    const VectorOracle F = probe_map(builtin("cubic1d", p));
    Rng rng = make_rng(2, Stream::TwoPointPairs, 0);
    int tight = 0;
    const int trials = 5000;
    for (int k = 0; k < trials; ++k) {
      const Point x = uniform_ball_point(rng, 1, 5.0);
      const Point y = uniform_ball_point(rng, 1, 5.0);
      const double t = uniform01(rng);
      const ProbeResult r = two_point_probe(F, x, y, t);
      if (!r.ratio) continue;
      // Below ~1e-5 spread the rounding bound itself exceeds 1e-10.
      const double err = std::abs(*r.ratio - std::abs(c));
      CHECK(err <= std::max(1e-10 * std::abs(c), ratio_error_bound(r)));
      if (err <= 1e-10 * std::abs(c)) ++tight;
    }
    CHECK(tight >= trials * 99 / 100);
  }
}

TEST_CASE("best-t probe") {
  int calls = 0;
  const ProbeResult r = best_t_probe(half_square(), Point{0}, Point{2}, [&](const ProbeResult&) { ++calls; });
  CHECK(calls == kBestTEvaluations);
  REQUIRE(r.ratio);
  CHECK(std::abs(*r.ratio - 1.0) <= 1e-12);

  const ProbeResult a = best_t_probe(linear_map(), Point{0, 0}, Point{1, 2});
  CHECK(a.gap <= 1e-12);
  CHECK_THROWS_AS(best_t_probe(half_square(), Point{1}, Point{1}), Error);
}

TEST_CASE("best-t probe matches a dense t grid on rosenbrock") {
  const VectorOracle F = probe_map(builtin("rosenbrock"));
  for (std::uint64_t i = 0; i < 5; ++i) {
    Rng rng = make_rng(42, Stream::TwoPointPairs, i);
    const Point x = uniform_ball_point(rng, 2, 2.0);
    const Point y = uniform_ball_point(rng, 2, 2.0);
    double dense = 0.0;
    for (int k = 1; k < 100000; ++k) {
      const ProbeResult r = two_point_probe(F, x, y, k / 100000.0);
      if (r.ratio) dense = std::max(dense, *r.ratio);
    }
    const ProbeResult best = best_t_probe(F, x, y);
    REQUIRE(best.ratio);
    CHECK(std::abs(*best.ratio - dense) <= 1e-4 * dense);
  }
}

TEST_CASE("probe invariances") {
  const VectorOracle F = probe_map(builtin("rosenbrock"));
  Rng rng = make_rng(9, Stream::RandomConfigs, 0);
  for (int k = 0; k < 300; ++k) {
    const Configuration c = random_config(rng, 2 + k % 5, 2);
    const ProbeResult base = jensen_probe(F, c);

    std::vector<Point> rp(c.points().rbegin(), c.points().rend());
    std::vector<double> rw(c.weights().values().rbegin(), c.weights().values().rend());
    const ProbeResult perm = jensen_probe(F, Configuration(rp, SimplexWeights(rw)));
    CHECK(std::abs(perm.gap - base.gap) <= 1e-12 * (1.0 + base.output_scale));
    CHECK(std::abs(perm.spread - base.spread) <= 1e-12 * base.spread);

    auto sp = c.points();
    std::vector<double> sw(c.weights().values().begin(), c.weights().values().end());
    sp.push_back(sp[0]);
    sw.push_back(0.4 * sw[0]);
    sw[0] *= 0.6;
    const ProbeResult split = jensen_probe(F, Configuration(sp, SimplexWeights(sw)));
    CHECK(std::abs(split.gap - base.gap) <= 1e-12 * (1.0 + base.output_scale));
    CHECK(std::abs(split.spread - base.spread) <= 1e-12 * base.spread);
  }
}

TEST_CASE("ranking penalizes rounding-dominated probes") {
  const VectorOracle F = half_square();
  const ProbeResult wide = two_point_probe(F, Point{-4}, Point{4}, 0.5);
  const ProbeResult narrow = two_point_probe(F, Point{4}, Point{4 + 1e-6}, 0.5);
  CHECK(ratio_error_bound(wide) < 1e-14);
  CHECK(ratio_error_bound(narrow) > 1e-6);
  CHECK(probe_score(wide) > probe_score(narrow));
  CHECK(probe_score(two_point_probe(F, Point{1}, Point{1}, 0.5)) < -1e300);
}

TEST_CASE("midpoint convexity violation") {
  const ScalarMap convex = [](const Point& x) { return inner(x, x) + x[0]; };
  const ScalarMap concave = [](const Point& x) { return -0.5 * inner(x, x); };
  const ScalarMap linear = [](const Point& x) { return 2.0 * x[0] - 1.0; };
  Rng rng = make_rng(4, Stream::ConvexityPairs, 0);
  for (int k = 0; k < 100; ++k) {
    const Point x = uniform_ball_point(rng, 1, 5.0);
    const Point y = uniform_ball_point(rng, 1, 5.0);
    CHECK(midpoint_convexity_violation(convex, x, y) <= 0.0);
    CHECK(std::abs(midpoint_convexity_violation(linear, x, y)) <= 1e-14);
  }
  CHECK(midpoint_convexity_violation(concave, Point{0}, Point{2}) == 0.5);
}
