#include "hessfree/fd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hessfree/error.hpp"
#include "hessfree/parallel.hpp"

namespace hessfree {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double checked(double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "non-finite oracle value");
  return v;
}

// Rayleigh-quotient power iteration on the symmetric PSD matrix g.
NormEstimate power_iterate(const Matrix& g, std::vector<double> x) {
  const std::size_t n = g.cols();
  auto normalize = [](std::vector<double>& v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    s = std::sqrt(s);
    if (s > 0.0) {
      for (double& e : v) e /= s;
    }
    return s;
  };
  if (normalize(x) == 0.0) return {0.0, 0, true};

  NormEstimate est{0.0, 0, false};
  double lambda = -1.0;
  std::vector<double> y(n);
  for (int it = 1; it <= kPowerIterationMax; ++it) {
    for (std::size_t r = 0; r < n; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < n; ++c) acc += g(r, c) * x[c];
      y[r] = acc;
    }
    double rayleigh = 0.0;
    for (std::size_t r = 0; r < n; ++r) rayleigh += x[r] * y[r];
    double residual = 0.0;
    for (std::size_t r = 0; r < n; ++r) residual += (y[r] - rayleigh * x[r]) * (y[r] - rayleigh * x[r]);
    residual = std::sqrt(residual);

    est.iterations = it;
    est.value = std::max(est.value, std::sqrt(std::max(rayleigh, 0.0)));
    if (rayleigh <= 0.0) {
      est.converged = true;
      return est;
    }
    const bool small_change = std::abs(rayleigh - lambda) <= kPowerIterationTol * rayleigh;
    const bool small_residual = residual <= std::sqrt(kPowerIterationTol) * rayleigh;
    lambda = rayleigh;
    if (small_change && small_residual) {
      est.converged = true;
      return est;
    }
    x = y;
    if (normalize(x) == 0.0) {
      est.converged = true;
      return est;
    }
  }
  return est;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
  if (a_.size() != rows_ * cols_) throw Error(ErrorCode::DimensionMismatch, "matrix entry count");
  for (double v : a_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "non-finite matrix entry");
  }
}

Matrix Matrix::from_columns(const std::vector<Point>& columns) {
  if (columns.empty()) throw Error(ErrorCode::InvalidArgument, "matrix needs at least one column");
  Matrix m(columns.front().dim(), columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].dim() != m.rows()) throw Error(ErrorCode::DimensionMismatch, "column dimension");
    for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) = columns[c][r];
  }
  return m;
}

Point Matrix::apply(const Point& x) const {
  if (x.dim() != cols_) throw Error(ErrorCode::DimensionMismatch, "matrix-vector dimension");
  std::vector<double> y(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) y[r] += (*this)(r, c) * x[c];
  }
  return Point(std::move(y));
}

Point Matrix::apply_transpose(const Point& y) const {
  if (y.dim() != rows_) throw Error(ErrorCode::DimensionMismatch, "matrix-vector dimension");
  std::vector<double> x(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) x[c] += (*this)(r, c) * y[r];
  }
  return Point(std::move(x));
}

double Matrix::frobenius() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix shapes differ");
  }
  Matrix d(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) d(r, c) = a(r, c) - b(r, c);
  }
  return d;
}

Point fd_gradient(const ScalarMap& f, const Point& x) {
  const double base = std::cbrt(kEps);
  std::vector<double> g(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double h = base * std::max(1.0, std::abs(x[i]));
    const double up = checked(f(x.with_coord(i, x[i] + h)));
    const double down = checked(f(x.with_coord(i, x[i] - h)));
    g[i] = (up - down) / (2.0 * h);
  }
  return Point(std::move(g));
}

Point fd_gradient(const ScalarOracle& o, const Point& x) {
  return fd_gradient([&o](const Point& p) { return o(p); }, x);
}

Point fd_jacobian_vec(const VectorMap& F, const Point& x, const Point& v) {
  const double vn = norm2(v);
  if (vn == 0.0) throw Error(ErrorCode::InvalidArgument, "finite-difference direction must be nonzero");
  const double h = std::sqrt(kEps) * (1.0 + norm2(x)) / vn;
  const Point up = F(x + h * v);
  const Point down = F(x - h * v);
  return (1.0 / (2.0 * h)) * (up - down);
}

Point fd_hessian_vec(const ScalarOracle& o, const Point& x, const Point& v) {
  return fd_jacobian_vec([&o](const Point& p) { return o.grad(p); }, x, v);
}

Matrix assemble(const VectorMap& apply, std::size_t dim_in) {
  std::vector<Point> cols;
  cols.reserve(dim_in);
  for (std::size_t k = 0; k < dim_in; ++k) cols.push_back(apply(Point::basis(dim_in, k)));
  return Matrix::from_columns(cols);
}

NormEstimate operator_norm(const Matrix& a) {
  const std::size_t n = a.cols();
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < a.rows(); ++r) acc += a(r, i) * a(r, j);
      g(i, j) = acc;
    }
  }

  // Two deterministic starts: a generic vector and the heaviest column of
  // A^T A. A start orthogonal to the top singular vector would stall at a
  // smaller singular value.
  std::vector<double> generic(n);
  for (std::size_t j = 0; j < n; ++j) {
    generic[j] = 1.0 + std::fmod(0.6180339887498949 * static_cast<double>(j + 1), 1.0);
  }
  std::size_t heavy = 0;
  double heavy_norm = -1.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += g(i, j) * g(i, j);
    if (s > heavy_norm) {
      heavy_norm = s;
      heavy = j;
    }
  }
  std::vector<double> column(n);
  for (std::size_t i = 0; i < n; ++i) column[i] = g(i, heavy);

  const NormEstimate a1 = power_iterate(g, std::move(generic));
  const NormEstimate a2 = power_iterate(g, std::move(column));
  NormEstimate best = a1.value >= a2.value ? a1 : a2;
  best.converged = a1.converged && a2.converged;
  best.iterations = a1.iterations + a2.iterations;
  return best;
}

NormEstimate operator_norm(const VectorMap& apply, std::size_t dim_in) {
  return operator_norm(assemble(apply, dim_in));
}

LipschitzEstimate lip_from_jacobians(const VectorOracle& F, const DomainSampler& sampler,
                                     std::size_t budget, std::size_t workers) {
  if (budget == 0) throw Error(ErrorCode::InvalidArgument, "budget must be >= 1");
  sampler.validate();
  const VectorMap eval = [&F](const Point& p) { return F(p); };

  struct PairResult {
    double ratio = 0.0;
    bool converged = true;
  };
  std::vector<PairResult> results(budget);
  parallel_for(0, budget, workers, [&](std::size_t i) {
    const auto [x, y] = sampler.sample_pair(Stream::DerivativePairs, i, F.dim_in);
    const Matrix jx = assemble([&](const Point& v) { return fd_jacobian_vec(eval, x, v); }, F.dim_in);
    const Matrix jy = assemble([&](const Point& v) { return fd_jacobian_vec(eval, y, v); }, F.dim_in);
    const NormEstimate n = operator_norm(jx - jy);
    results[i] = {n.value / distance(x, y), n.converged};
  });

  LipschitzEstimate est;
  est.pairs = budget;
  std::size_t best = 0;
  for (std::size_t i = 0; i < budget; ++i) {
    if (results[i].ratio > results[best].ratio) best = i;
    est.approximate = est.approximate || !results[i].converged;
  }
  auto [x, y] = sampler.sample_pair(Stream::DerivativePairs, best, F.dim_in);
  est.value = results[best].ratio;
  est.x = std::move(x);
  est.y = std::move(y);
  return est;
}

LipschitzEstimate lip_from_hessians(const ScalarOracle& o, const DomainSampler& sampler,
                                    std::size_t budget, std::size_t workers) {
  return lip_from_jacobians(o.gradient_oracle(), sampler, budget, workers);
}

}  // namespace hessfree
