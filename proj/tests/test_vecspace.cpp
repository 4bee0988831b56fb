#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "hessfree/error.hpp"
#include "hessfree/vecspace.hpp"

using namespace hessfree;

TEST_CASE("inner product") {
  CHECK(inner(Point{1, 0}, Point{0, 1}) == 0.0);
  CHECK(inner(Point{1, 2}, Point{3, 4}) == 11.0);
  CHECK(inner(Point{0, 0}, Point{5, 7}) == 0.0);
  CHECK_THROWS_AS((void)inner(Point{1, 2}, Point{1, 2, 3}), Error);
}

TEST_CASE("euclidean norm") {
  CHECK(norm2(Point{3, 4}) == 5.0);
  CHECK(norm2(Point{0, 0, 0}) == 0.0);
  CHECK(norm2(Point{-2}) == 2.0);
}

TEST_CASE("points reject bad input") {
  CHECK_THROWS_AS(Point(std::vector<double>{}), Error);
  CHECK_THROWS_AS((Point{1.0, std::numeric_limits<double>::quiet_NaN()}), Error);
  CHECK_THROWS_AS((Point{std::numeric_limits<double>::infinity()}), Error);
  try {
    Point{std::numeric_limits<double>::infinity()};
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFinite);
  }
}

TEST_CASE("simplex weights") {
  SimplexWeights w{0.5, 0.5 + 1e-10};
  CHECK(std::abs(w[0] + w[1] - 1.0) < 1e-15);
  CHECK_THROWS_AS((SimplexWeights{0.5, 0.6}), Error);
  const std::vector<double> third{1.0 / 3, 1.0 / 3, 1.0 / 3};
  const SimplexWeights once(third);
  CHECK(SimplexWeights(std::vector<double>(once.values().begin(), once.values().end())) == once);
  CHECK(once[0] == 1.0 / 3);
  CHECK_THROWS_AS((SimplexWeights{1.5, -0.5}), Error);
  CHECK_THROWS_AS(SimplexWeights(std::vector<double>{}), Error);
}

TEST_CASE("configuration validation") {
  CHECK_THROWS_AS(Configuration({Point{0}, Point{1}}, SimplexWeights{1.0}), Error);
  CHECK_THROWS_AS(Configuration({Point{0}, Point{1, 2}}, SimplexWeights{0.5, 0.5}), Error);
}

TEST_CASE("convex combination") {
  CHECK(convex_combination(Configuration({Point{0}, Point{2}}, {0.5, 0.5})) == Point{1});
  const Point x{3.5, -1.25};
  CHECK(convex_combination(Configuration({x}, {1.0})) == x);
  const Point c = convex_combination(
      Configuration({Point{1, 0}, Point{0, 1}, Point{0, 0}}, {1.0 / 3, 1.0 / 3, 1.0 / 3}));
  CHECK(c[0] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(c[1] == doctest::Approx(1.0 / 3).epsilon(1e-15));
}

TEST_CASE("pair spread") {
  CHECK(pair_spread(Configuration({Point{7, 1}}, {1.0})) == 0.0);
  CHECK(pair_spread(Configuration({Point{0}, Point{2}}, {0.5, 0.5})) == 1.0);
  CHECK(pair_spread(Configuration({Point{0}, Point{2}, Point{2}}, {0.5, 0.25, 0.25})) == 1.0);
}

namespace {

std::vector<Point> random_points(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(d);
    for (double& c : v) c = u(rng);
    pts.emplace_back(std::move(v));
  }
  return pts;
}

std::vector<double> random_weights(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(n);
  double s = 0.0;
  for (double& x : w) s += (x = e(rng));
  for (double& x : w) x /= s;
  return w;
}

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

TEST_CASE("spread invariants on random configurations") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + trial % 6;
    const std::size_t d = 1 + trial % 3;
    auto pts = random_points(rng, n, d);
    auto w = random_weights(rng, n);
    const Configuration c(pts, SimplexWeights(w));
    const double s = pair_spread(c);

    // reversed order
    std::vector<Point> rp(pts.rbegin(), pts.rend());
    std::vector<double> rw(w.rbegin(), w.rend());
    CHECK(rel_close(pair_spread(Configuration(rp, SimplexWeights(rw))), s, 1e-12));

    // split the first weight across a duplicate
    auto sp = pts;
    auto sw = w;
    sp.push_back(pts[0]);
    sw[0] = 0.3 * w[0];
    sw.push_back(0.7 * w[0]);
    CHECK(rel_close(pair_spread(Configuration(sp, SimplexWeights(sw))), s, 1e-12));

    // zero-weight point far away
    auto zp = pts;
    auto zw = w;
    zp.push_back(100.0 * Point::basis(d, 0));
    zw.push_back(0.0);
    const Configuration z(zp, SimplexWeights(zw));
    CHECK(pair_spread(z) == s);
    CHECK(convex_combination(z) == convex_combination(c));

    // scaling
    const double a = 0.1 + 3.0 * std::uniform_real_distribution<double>(0, 1)(rng);
    std::vector<Point> ap;
    for (const Point& p : pts) ap.push_back(a * p);
    CHECK(rel_close(pair_spread(Configuration(ap, SimplexWeights(w))), a * a * s, 1e-12));
  }
}

TEST_CASE("two-point spread identity") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    auto pts = random_points(rng, 2, 1 + trial % 4);
    const Point& x = pts[0];
    const Point& y = pts[1];
    const double t = u01(rng);
    const double lhs = pair_spread(Configuration({x, y}, {1.0 - t, t}));
    const double xt = norm2(x + t * (y - x));
    const double rhs = (1.0 - t) * inner(x, x) + t * inner(y, y) - xt * xt;
    CHECK(rel_close(lhs, rhs, 1e-10));
  }
}
