#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "hessfree/fd.hpp"
#include "hessfree/oracles.hpp"
#include "hessfree/random.hpp"

namespace hessfree {

/// A linear functional y* on R^m, represented through the Euclidean pairing.
class Functional {
 public:
  explicit Functional(Point coeffs) : coeffs_(std::move(coeffs)) {}
  /// Rejects |coeffs| > 1 + 1e-12.
  static Functional unit(Point coeffs);

  [[nodiscard]] const Point& coeffs() const noexcept { return coeffs_; }
  [[nodiscard]] std::size_t dim() const noexcept { return coeffs_.dim(); }
  [[nodiscard]] double operator()(const Point& y) const { return inner(coeffs_, y); }

 private:
  Point coeffs_;
};

/// +-e_j for every j, followed by `count` uniform samples of the unit sphere.
std::vector<Functional> sample_unit_functionals(std::size_t m, std::size_t count,
                                                std::uint64_t seed);

/// phi(x) = y*(F(x))
ScalarMap slice(const VectorOracle& F, const Functional& ystar);
/// Central-difference gradient of the slice.
VectorMap slice_gradient(const VectorOracle& F, const Functional& ystar);

inline constexpr double kSliceFdRelTol = 1e-4;
inline constexpr double kSliceFdAbsTol = 1e-7;
inline constexpr double kLipschitzFloor = 1e-9;

struct SliceSmoothnessReport {
  double L = 0.0;  // after flooring at 1e-9
  bool passed = false;
  std::size_t functionals_tested = 0;
  std::size_t pairs_tested = 0;
  double max_ratio = 0.0;  // max |grad phi(x) - grad phi(y)| / |x - y|
  double worst_excess = 0.0;
  std::optional<Point> witness_functional;
  std::optional<std::pair<Point, Point>> witness_pair;
};

/// Checks |grad phi(x) - grad phi(y)| <= L |x - y| (1 + 1e-4) + 1e-7 (1 + |phi(x)| + |phi(y)|)
/// for every sampled unit functional and pair.
SliceSmoothnessReport slice_smoothness_check(const VectorOracle& F, double L,
                                             std::size_t n_functionals,
                                             const DomainSampler& sampler, std::size_t budget,
                                             std::size_t workers = 0);

/// f_x(h) assembled from the basis slices: component j is the directional
/// derivative of y -> y_j along h at x, by central differences.
Point reconstruct_derivative_action(const VectorOracle& F, const Point& x, const Point& h);
/// The m x d matrix of f_x on the standard basis.
Matrix reconstruct_jacobian(const VectorOracle& F, const Point& x);

struct DerivativeNormEstimate {
  double value = 0.0;          // max of the two below
  double empirical_sup = 0.0;  // sup over sampled y*, h of y*(f_x(h) - f_y(h))
  double power_norm = 0.0;     // power iteration on the assembled difference
  bool converged = true;
};

/// Operator norm of F'(x) - F'(y) through unit functionals. For each sampled
/// y*, the sup over unit h is attained at h = D^T y* / |D^T y*|; n_directions
/// extra random unit h are also tried.
DerivativeNormEstimate derivative_norm_via_functionals(const VectorOracle& F, const Point& x,
                                                       const Point& y, std::size_t n_functionals,
                                                       std::size_t n_directions,
                                                       std::uint64_t seed = 42);
/// Same, with the functionals and unit directions supplied by the caller.
DerivativeNormEstimate derivative_norm_via_functionals(const VectorOracle& F, const Point& x,
                                                       const Point& y,
                                                       const std::vector<Functional>& functionals,
                                                       const std::vector<Point>& directions);

struct ReconstructionReport {
  std::size_t points_tested = 0;
  double max_jvp_rel_error = 0.0;        // against fd_jacobian_vec
  double max_linearity_rel_error = 0.0;  // additivity and homogeneity in h
  double max_bound_excess = 0.0;         // |phi'_{y*}(x)| - |J| |y*|
  bool passed = false;
};

inline constexpr double kReconstructionRelTol = 1e-5;
inline constexpr double kLinearityRelTol = 1e-6;

/// Reconstruction against direct Jacobian-vector products, linearity in h and
/// the bound |phi'_{y*}(x)| <= |J_x| |y*| on sampled points.
ReconstructionReport reconstruction_check(const VectorOracle& F, const DomainSampler& sampler,
                                          std::size_t budget, std::size_t n_functionals,
                                          std::size_t workers = 0);

struct LipschitzTransferReport {
  double L = 0.0;
  bool passed = false;
  std::size_t pairs_tested = 0;
  double max_ratio = 0.0;  // max |f_x - f_y| / |x - y|
  double min_hahn_banach_fraction = 1.0;  // min empirical_sup / power_norm
  std::optional<std::pair<Point, Point>> witness_pair;
};

inline constexpr double kTransferRelTol = 1e-3;

/// derivative_norm_via_functionals(x, y) <= L |x - y| (1 + 1e-3) + FD slack on sampled pairs.
LipschitzTransferReport lipschitz_transfer_check(const VectorOracle& F, double L,
                                                 const DomainSampler& sampler, std::size_t budget,
                                                 std::size_t n_functionals,
                                                 std::size_t workers = 0);

}  // namespace hessfree
