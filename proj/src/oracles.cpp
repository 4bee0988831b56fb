#include "hessfree/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "hessfree/error.hpp"

namespace hessfree {

namespace {

void require_dim(const Point& x, std::size_t dim, const std::string& label) {
  if (x.dim() != dim) {
    throw Error(ErrorCode::DimensionMismatch, label + ": expected input of dimension " +
                                                  std::to_string(dim) + ", got " +
                                                  std::to_string(x.dim()));
  }
}

[[noreturn]] void bad_params(std::string_view name, const std::string& expected) {
  throw Error(ErrorCode::BadParams, "oracle '" + std::string(name) + "' expects " + expected);
}

std::size_t positive_int_param(std::string_view name, double v) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e4) bad_params(name, "a positive integer dimension");
  return static_cast<std::size_t>(v);
}

std::string format_params(std::span<const double> params) {
  std::string s;
  for (std::size_t i = 0; i < params.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", params[i]);
    if (i) s += ',';
    s += buf;
  }
  return s;
}

std::string make_label(std::string_view name, std::span<const double> params) {
  return std::string(name) + "(" + format_params(params) + ")";
}

Oracle make_affine(std::span<const double> params) {
  std::size_t m = 2;
  std::size_t d = 2;
  std::vector<double> a{1.0, 2.0, 3.0, 4.0};
  std::vector<double> b{1.0, -1.0};
  if (!params.empty()) {
    if (params.size() < 2) bad_params("affine", "[m, d, A (m*d, row-major), b (m)]");
    m = positive_int_param("affine", params[0]);
    d = positive_int_param("affine", params[1]);
    if (params.size() != 2 + m * d + m) bad_params("affine", "[m, d, A (m*d, row-major), b (m)]");
    a.assign(params.begin() + 2, params.begin() + 2 + static_cast<std::ptrdiff_t>(m * d));
    b.assign(params.begin() + 2 + static_cast<std::ptrdiff_t>(m * d), params.end());
  }
  VectorOracle o;
  o.dim_in = d;
  o.dim_out = m;
  o.known_L = 0.0;
  o.label = make_label("affine", params);
  o.eval = [a, b, m, d](const Point& x) {
    std::vector<double> y(b);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < d; ++c) y[r] += a[r * d + c] * x[c];
    }
    return Point(std::move(y));
  };
  return o;
}

Oracle make_quadratic(std::span<const double> params) {
  std::size_t d = 2;
  std::vector<double> q{1.0, 0.0, 0.0, 1.0};
  if (!params.empty()) {
    d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(params.size()))));
    if (d * d != params.size()) bad_params("quadratic", "the d*d entries of Q (row-major)");
    q.assign(params.begin(), params.end());
  }
  // grad(1/2 x^T Q x) = sym(Q) x
  std::vector<double> sym(d * d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) sym[r * d + c] = 0.5 * (q[r * d + c] + q[c * d + r]);
  }
  ScalarOracle o;
  o.dim = d;
  o.known_L = 0.0;
  o.label = make_label("quadratic", params);
  o.value = [sym, d](const Point& x) {
    double acc = 0.0;
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) acc += x[r] * sym[r * d + c] * x[c];
    }
    return 0.5 * acc;
  };
  o.gradient = [sym, d](const Point& x) {
    std::vector<double> g(d, 0.0);
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) g[r] += sym[r * d + c] * x[c];
    }
    return Point(std::move(g));
  };
  return o;
}

Oracle make_separable_cubic(std::string_view name, std::vector<double> c) {
  ScalarOracle o;
  o.dim = c.size();
  double lmax = 0.0;
  for (double ci : c) lmax = std::max(lmax, std::abs(ci));
  o.known_L = lmax;
  o.label = make_label(name, c);
  o.value = [c](const Point& x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) acc += c[i] * x[i] * x[i] * x[i] / 6.0;
    return acc;
  };
  o.gradient = [c](const Point& x) {
    std::vector<double> g(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) g[i] = 0.5 * c[i] * x[i] * x[i];
    return Point(std::move(g));
  };
  return o;
}

Oracle make_cubic1d(std::span<const double> params) {
  if (params.size() > 1) bad_params("cubic1d", "[c]");
  const double c = params.empty() ? 1.0 : params[0];
  return make_separable_cubic("cubic1d", {c});
}

Oracle make_separable(std::span<const double> params) {
  std::vector<double> c = params.empty() ? std::vector<double>{3.0, 1.0}
                                         : std::vector<double>(params.begin(), params.end());
  return make_separable_cubic("separable_cubic", std::move(c));
}

Oracle make_norm_cubed(std::span<const double> params) {
  if (params.size() > 1) bad_params("norm_cubed", "[d]");
  const std::size_t d = params.empty() ? 3 : positive_int_param("norm_cubed", params[0]);
  ScalarOracle o;
  o.dim = d;
  o.label = make_label("norm_cubed", params);
  o.value = [](const Point& x) {
    const double n = norm2(x);
    return n * n * n / 6.0;
  };
  o.gradient = [](const Point& x) { return (0.5 * norm2(x)) * x; };
  return o;
}

Oracle make_logistic_like(std::span<const double> params) {
  if (params.size() > 1) bad_params("logistic_like", "[d]");
  const std::size_t d = params.empty() ? 2 : positive_int_param("logistic_like", params[0]);
  ScalarOracle o;
  o.dim = d;
  o.label = make_label("logistic_like", params);
  // f(x) = sum_i log(1 + exp(x_i))
  o.value = [](const Point& x) {
    double acc = 0.0;
    for (double v : x.coords()) acc += std::max(v, 0.0) + std::log1p(std::exp(-std::abs(v)));
    return acc;
  };
  o.gradient = [](const Point& x) {
    std::vector<double> g(x.dim());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double v = x[i];
      g[i] = v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
    }
    return Point(std::move(g));
  };
  return o;
}

Oracle make_rosenbrock(std::span<const double> params) {
  if (!params.empty() && params.size() != 2) bad_params("rosenbrock", "[a, b]");
  const double a = params.empty() ? 1.0 : params[0];
  const double b = params.empty() ? 100.0 : params[1];
  ScalarOracle o;
  o.dim = 2;
  o.label = make_label("rosenbrock", params);
  o.value = [a, b](const Point& x) {
    const double u = a - x[0];
    const double v = x[1] - x[0] * x[0];
    return u * u + b * v * v;
  };
  o.gradient = [a, b](const Point& x) {
    const double v = x[1] - x[0] * x[0];
    return Point{-2.0 * (a - x[0]) - 4.0 * b * x[0] * v, 2.0 * b * v};
  };
  return o;
}

Oracle make_poly_map_2d(std::span<const double> params) {
  if (!params.empty()) bad_params("poly_map_2d", "no parameters");
  VectorOracle o;
  o.dim_in = 2;
  o.dim_out = 2;
  // J(x) - J(y) = [[2a, 0], [b, a]] with (a, b) = x - y; its norm over |(a, b)|
  // peaks at 2 along e1 (see docs/oracles.md).
  o.known_L = 2.0;
  o.label = make_label("poly_map_2d", params);
  o.eval = [](const Point& x) { return Point{x[0] * x[0], x[0] * x[1]}; };
  return o;
}

}  // namespace

Point VectorOracle::operator()(const Point& x) const {
  require_dim(x, dim_in, label);
  Point y = eval(x);
  if (y.dim() != dim_out) {
    throw Error(ErrorCode::DimensionMismatch, label + ": oracle returned dimension " +
                                                  std::to_string(y.dim()) + ", declared " +
                                                  std::to_string(dim_out));
  }
  return y;
}

double ScalarOracle::operator()(const Point& x) const {
  require_dim(x, dim, label);
  const double v = value(x);
  if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, label + ": non-finite value");
  return v;
}

Point ScalarOracle::grad(const Point& x) const {
  require_dim(x, dim, label);
  Point g = gradient(x);
  if (g.dim() != dim) throw Error(ErrorCode::DimensionMismatch, label + ": gradient dimension");
  return g;
}

VectorOracle ScalarOracle::gradient_oracle() const {
  VectorOracle o;
  o.dim_in = dim;
  o.dim_out = dim;
  o.eval = gradient;
  o.known_L = known_L;
  o.label = "grad " + label;
  return o;
}

Oracle builtin(std::string_view name, std::span<const double> params) {
  if (name == "affine") return make_affine(params);
  if (name == "quadratic") return make_quadratic(params);
  if (name == "cubic1d") return make_cubic1d(params);
  if (name == "separable_cubic") return make_separable(params);
  if (name == "norm_cubed") return make_norm_cubed(params);
  if (name == "logistic_like") return make_logistic_like(params);
  if (name == "rosenbrock") return make_rosenbrock(params);
  if (name == "poly_map_2d") return make_poly_map_2d(params);
  throw Error(ErrorCode::UnknownOracle, "unknown oracle '" + std::string(name) + "'");
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"affine",        "quadratic",     "cubic1d",
                                              "separable_cubic", "norm_cubed",  "logistic_like",
                                              "rosenbrock",    "poly_map_2d"};
  return names;
}

VectorOracle probe_map(const Oracle& oracle) {
  if (const auto* s = std::get_if<ScalarOracle>(&oracle)) return s->gradient_oracle();
  return std::get<VectorOracle>(oracle);
}

const std::string& oracle_label(const Oracle& oracle) {
  return std::visit([](const auto& o) -> const std::string& { return o.label; }, oracle);
}

std::optional<double> oracle_known_L(const Oracle& oracle) {
  return std::visit([](const auto& o) { return o.known_L; }, oracle);
}

std::size_t oracle_dim_in(const Oracle& oracle) {
  if (const auto* s = std::get_if<ScalarOracle>(&oracle)) return s->dim;
  return std::get<VectorOracle>(oracle).dim_in;
}

}  // namespace hessfree
