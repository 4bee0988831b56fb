#pragma once

#include <functional>
#include <optional>
#include <string>

#include "hessfree/oracles.hpp"
#include "hessfree/vecspace.hpp"

namespace hessfree {

/// Both sides of the Hessian-free inequality for one configuration:
///   gap    = |F(sum w_i x_i) - sum w_i F(x_i)|
///   spread = sum_{i<j} w_i w_j |x_i - x_j|^2
/// and ratio = 2 gap / spread, which is a lower bound on the Lipschitz
/// constant of F'. ratio is absent when spread <= spread_floor(config).
struct ProbeResult {
  double gap = 0.0;
  double spread = 0.0;
  std::optional<double> ratio;
  Configuration config;
  std::string oracle_label;
  /// Largest output norm seen while evaluating the probe.
  double output_scale = 0.0;
};

/// 1e-14 (1 + max_i |x_i|)^2
double spread_floor(const Configuration& c);

ProbeResult jensen_probe(const VectorOracle& F, const Configuration& c);

/// Rounding-error bound on the ratio: the gap is a difference of values of
/// size output_scale, so its absolute error is O(n eps output_scale), which
/// is amplified by 2 / spread. Infinite when the ratio is absent.
double ratio_error_bound(const ProbeResult& r);

/// ratio - ratio_error_bound: the ratio every search ranks candidates by, so
/// that nearly coincident points cannot win on rounding noise.
double probe_score(const ProbeResult& r);

/// n = 2 configuration (x, y) with weights (1 - t, t); t must lie in [0, 1].
ProbeResult two_point_probe(const VectorOracle& F, const Point& x, const Point& y, double t);

using ProbeObserver = std::function<void(const ProbeResult&)>;

inline constexpr int kBestTGrid = 32;
inline constexpr int kBestTGoldenIterations = 20;
/// Evaluations made by one best_t_probe call: 31 grid points, 2 golden-section
/// seeds and one per golden-section iteration.
inline constexpr int kBestTEvaluations = (kBestTGrid - 1) + 2 + kBestTGoldenIterations;

/// Maximizes the two-point ratio over t: grid t = k/32, then golden section
/// on the bracket around the best grid point. Every evaluation is passed to
/// observe, in order. Requires x != y.
ProbeResult best_t_probe(const VectorOracle& F, const Point& x, const Point& y,
                         const ProbeObserver& observe = {});

/// g((x+y)/2) - (g(x) + g(y))/2; positive values refute convexity of g.
double midpoint_convexity_violation(const ScalarMap& g, const Point& x, const Point& y);

}  // namespace hessfree
