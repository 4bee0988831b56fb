#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <variant>

#include "hessfree/error.hpp"
#include "hessfree/fd.hpp"
#include "hessfree/oracles.hpp"
#include "hessfree/random.hpp"

using namespace hessfree;

namespace {

const ScalarOracle& scalar(const Oracle& o) { return std::get<ScalarOracle>(o); }

double rel_err(const Point& a, const Point& b) { return norm2(a - b) / std::max(1.0, norm2(b)); }

// Exact spectral norm of [[a, b], [c, d]] from the singular values.
double spectral_2x2(double a, double b, double c, double d) {
  const double s1 = a * a + b * b + c * c + d * d;
  const double det = a * d - b * c;
  return std::sqrt((s1 + std::sqrt(s1 * s1 - 4.0 * det * det)) / 2.0);
}

}  // namespace

TEST_CASE("builtin registry") {
  for (const std::string& name : builtin_names()) {
    const Oracle o = builtin(name);
    CHECK(!oracle_label(o).empty());
    CHECK(oracle_dim_in(o) >= 1);
  }
  CHECK_THROWS_AS(builtin("no_such_oracle"), Error);
  try {
    builtin("no_such_oracle");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownOracle);
  }
  const double bad[] = {1.0, 2.0};
  try {
    builtin("cubic1d", bad);
    FAIL("expected BadParams");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadParams);
  }
}

TEST_CASE("builtin values and constants") {
  const Oracle cubic = builtin("cubic1d");
  CHECK(scalar(cubic).grad(Point{2})[0] == 2.0);
  CHECK(scalar(cubic)(Point{2}) == doctest::Approx(8.0 / 6.0));
  CHECK(oracle_known_L(cubic) == 1.0);

  CHECK(oracle_known_L(builtin("affine")) == 0.0);
  CHECK(oracle_known_L(builtin("quadratic")) == 0.0);
  CHECK(oracle_known_L(builtin("separable_cubic")) == 3.0);
  const double c[] = {-5.0, 2.0, 1.0};
  CHECK(oracle_known_L(builtin("separable_cubic", c)) == 5.0);
  CHECK(oracle_known_L(builtin("poly_map_2d")) == 2.0);
  CHECK(!oracle_known_L(builtin("norm_cubed")));
  CHECK(!oracle_known_L(builtin("rosenbrock")));

  const VectorOracle poly = probe_map(builtin("poly_map_2d"));
  CHECK(poly(Point{2, 3}) == Point{4, 6});
  const VectorOracle aff = probe_map(builtin("affine"));
  CHECK(aff(Point{1, 1}) == Point{4, 6});
  CHECK_THROWS_AS(poly(Point{1, 2, 3}), Error);

  const VectorOracle g = probe_map(cubic);
  CHECK(g.label == "grad cubic1d(1)");
  CHECK(g.known_L == 1.0);
}

TEST_CASE("finite-difference gradients") {
  const Oracle q = builtin("quadratic");
  const Point g = fd_gradient(scalar(q), Point{1, 2});
  CHECK(std::abs(g[0] - 1.0) <= 1e-7);
  CHECK(std::abs(g[1] - 2.0) <= 1e-7);

  const Point z = fd_gradient([](const Point&) { return 4.25; }, Point{1.5, -3.0});
  CHECK(norm2(z) <= 1e-12);

  const Point gc = fd_gradient(scalar(builtin("cubic1d")), Point{2});
  CHECK(std::abs(gc[0] - 2.0) <= 1e-6);
}

TEST_CASE("fd gradients match analytic gradients on all scalar builtins") {
  DomainSampler box;
  for (const std::string& name : builtin_names()) {
    const Oracle o = builtin(name);
    if (!std::holds_alternative<ScalarOracle>(o)) continue;
    const ScalarOracle& s = scalar(o);
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 200; ++i) {
      Rng rng = make_rng(1, Stream::ReconstructionPoints, i);
      const Point x = box.sample(rng, s.dim);
      worst = std::max(worst, rel_err(fd_gradient(s, x), s.grad(x)));
    }
    INFO(name);
    CHECK(worst <= 1e-5);
  }
}

TEST_CASE("finite-difference Hessian-vector products") {
  const double qv[] = {2.0, 1.0, 1.0, 3.0};
  const ScalarOracle q = scalar(builtin("quadratic", qv));
  const Point hv = fd_hessian_vec(q, Point{0.3, -1.7}, Point{1.0, 2.0});
  CHECK(rel_err(hv, Point{4.0, 7.0}) <= 1e-6);

  const ScalarOracle c = scalar(builtin("cubic1d"));
  CHECK(fd_hessian_vec(c, Point{3}, Point{1})[0] == doctest::Approx(3.0).epsilon(1e-6));

  const ScalarOracle r = scalar(builtin("rosenbrock"));
  const Point x{0.7, -1.1};
  const Point v{0.3, 0.8};
  CHECK(rel_err(fd_hessian_vec(r, x, 2.5 * v), 2.5 * fd_hessian_vec(r, x, v)) <= 1e-6);
  CHECK_THROWS_AS(fd_hessian_vec(c, Point{1}, Point{0}), Error);
}

TEST_CASE("fd Hessian is symmetric as a bilinear form") {
  DomainSampler box;
  for (const std::string& name : builtin_names()) {
    const Oracle o = builtin(name);
    if (!std::holds_alternative<ScalarOracle>(o)) continue;
    const ScalarOracle& s = scalar(o);
    for (std::uint64_t i = 0; i < 100; ++i) {
      Rng rng = make_rng(3, Stream::Directions, i);
      const Point x = box.sample(rng, s.dim);
      const Point u = unit_sphere_point(rng, s.dim);
      const Point w = unit_sphere_point(rng, s.dim);
      const double a = inner(fd_hessian_vec(s, x, u), w);
      const double b = inner(fd_hessian_vec(s, x, w), u);
      const double scale = std::max(1.0, norm2(fd_hessian_vec(s, x, u)) + norm2(fd_hessian_vec(s, x, w)));
      INFO(name);
      CHECK(std::abs(a - b) <= 1e-4 * scale);
    }
  }
}

TEST_CASE("operator norm") {
  CHECK(operator_norm([](const Point& x) { return x; }, 3).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(operator_norm(Matrix(2, 2, {3, 0, 0, 1})).value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(operator_norm(Matrix(2, 2, {0, 1, 0, 0})).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(operator_norm(Matrix(2, 2, {0, 0, 0, 0})).value == 0.0);

  Rng rng = make_rng(5, Stream::Directions, 0);
  for (int k = 0; k < 500; ++k) {
    const Point e = gaussian_point(rng, 4);
    const Matrix m(2, 2, {e[0], e[1], e[2], e[3]});
    const double exact = spectral_2x2(e[0], e[1], e[2], e[3]);
    const NormEstimate est = operator_norm(m);
    CHECK(est.converged);
    CHECK(std::abs(est.value - exact) <= 1e-8 * exact);
  }
}

TEST_CASE("Hessian-Lipschitz estimates from finite differences") {
  DomainSampler box;
  const LipschitzEstimate q = lip_from_hessians(scalar(builtin("quadratic")), box, 1000);
  CHECK(q.value <= 1e-5);
  const LipschitzEstimate c = lip_from_hessians(scalar(builtin("cubic1d")), box, 1000);
  CHECK(c.value >= 0.99);
  CHECK(c.value <= 1.01);
  const LipschitzEstimate s = lip_from_hessians(scalar(builtin("separable_cubic")), box, 10000);
  CHECK(s.value >= 2.85);
  CHECK(s.value <= 3.01);
  CHECK(s.pairs == 10000);
  REQUIRE(s.x);
  REQUIRE(s.y);
  CHECK(box.contains(*s.x));
}

TEST_CASE("fd estimates stay below known constants") {
  DomainSampler box;
  for (const std::string& name : builtin_names()) {
    const Oracle o = builtin(name);
    const auto L = oracle_known_L(o);
    if (!L) continue;
    const LipschitzEstimate est = std::holds_alternative<ScalarOracle>(o)
                                      ? lip_from_hessians(scalar(o), box, 10000)
                                      : lip_from_jacobians(std::get<VectorOracle>(o), box, 10000);
    INFO(name, " ", est.value);
    CHECK(est.value <= *L * (1.0 + 1e-4) + 1e-5);
    CHECK(est.value >= 0.9 * *L);
  }
}

TEST_CASE("degenerate domains are rejected") {
  DomainSampler d;
  d.radius = 0.0;
  CHECK_THROWS_AS(d.validate(), Error);
  d.radius = 1.0;
  d.min_separation = 5.0;
  CHECK_THROWS_AS(d.validate(), Error);
}
