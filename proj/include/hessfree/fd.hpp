#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "hessfree/oracles.hpp"
#include "hessfree/random.hpp"
#include "hessfree/vecspace.hpp"

namespace hessfree {

/// Dense row-major matrix; finite-dimensional stand-in for B(X, Y).
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  /// Columns given as points of equal dimension.
  static Matrix from_columns(const std::vector<Point>& columns);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] double operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }

  [[nodiscard]] Point apply(const Point& x) const;
  [[nodiscard]] Point apply_transpose(const Point& y) const;
  [[nodiscard]] double frobenius() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> a_;
};

Matrix operator-(const Matrix& a, const Matrix& b);

/// Central differences, step cbrt(eps) * max(1, |x_i|) per coordinate.
Point fd_gradient(const ScalarMap& f, const Point& x);
Point fd_gradient(const ScalarOracle& o, const Point& x);

/// (F(x + h v) - F(x - h v)) / 2h with h = sqrt(eps) (1 + |x|) / |v|.
Point fd_jacobian_vec(const VectorMap& F, const Point& x, const Point& v);
/// Hessian-vector product from gradient differences.
Point fd_hessian_vec(const ScalarOracle& o, const Point& x, const Point& v);

/// Matrix obtained by applying a linear map to the standard basis.
Matrix assemble(const VectorMap& apply, std::size_t dim_in);

struct NormEstimate {
  double value = 0.0;
  int iterations = 0;
  bool converged = true;  // false: best iterate after max_iterations
};

inline constexpr double kPowerIterationTol = 1e-10;
inline constexpr int kPowerIterationMax = 500;

/// Largest singular value by power iteration on A^T A.
NormEstimate operator_norm(const Matrix& a);
/// Same, for a linear map given as a callable (assembled on the basis first).
NormEstimate operator_norm(const VectorMap& apply, std::size_t dim_in);

struct LipschitzEstimate {
  double value = 0.0;
  std::optional<Point> x;
  std::optional<Point> y;
  std::size_t pairs = 0;
  bool approximate = false;  // some operator norm did not converge
};

/// max over sampled pairs of |F'(x) - F'(y)| / |x - y|, with F' from
/// finite differences of F.
LipschitzEstimate lip_from_jacobians(const VectorOracle& F, const DomainSampler& sampler,
                                     std::size_t budget, std::size_t workers = 0);
/// Hessian-Lipschitz estimate of f from fd_hessian_vec.
LipschitzEstimate lip_from_hessians(const ScalarOracle& o, const DomainSampler& sampler,
                                    std::size_t budget, std::size_t workers = 0);

}  // namespace hessfree
