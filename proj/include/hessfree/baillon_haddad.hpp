#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include "hessfree/oracles.hpp"
#include "hessfree/random.hpp"

namespace hessfree {

/// r = <G(x) - G(y), x - y> - (1/beta) |G(x) - G(y)|^2. G is
/// (1/beta)-cocoercive at (x, y) iff r >= 0.
double cocoercivity_residual(const VectorMap& G, double beta, const Point& x, const Point& y);

struct CocoercivityReport {
  double beta = 0.0;
  double min_residual = 0.0;
  std::optional<std::pair<Point, Point>> witness_pair;  // argmin of the residual
  std::size_t pairs_tested = 0;
  double output_scale = 0.0;
  double tolerance = 0.0;  // 1e-10 (1 + output_scale)^2
  bool passed = false;     // min_residual >= -tolerance
};

/// Samples `budget` pairs, then runs budget/4 coordinate-descent steps on
/// the residual from the worst pair. Sampling can refute cocoercivity but
/// never certify it.
CocoercivityReport check_cocoercive(const VectorMap& G, std::size_t dim, double beta,
                                    const DomainSampler& sampler, std::size_t budget,
                                    std::size_t workers = 0);

struct ExpansionCheck {
  double lhs = 0.0;  // |grad phi(x) - grad phi(y)|^2
  double rhs = 0.0;  // L^2 |x - y|^2
  double residual = 0.0;  // cocoercivity residual of L x + grad phi(x) at beta = 2L
};

/// With G = L id + grad_phi (the gradient of (L/2)|.|^2 + phi), a
/// nonnegative 1/(2L)-cocoercivity residual expands to lhs <= rhs.
ExpansionCheck lipschitz_from_cocoercivity(const VectorMap& grad_phi, double L, const Point& x,
                                           const Point& y);

struct ConvexityWitness {
  double max_violation = 0.0;
  std::optional<std::pair<Point, Point>> pair;
};

struct ConvexitySplitReport {
  double L = 0.0;
  ConvexityWitness plus;   // g+ = (L/2)|.|^2 + phi
  ConvexityWitness minus;  // g- = (L/2)|.|^2 - phi
  std::size_t pairs_tested = 0;
  double value_scale = 0.0;
  double tolerance = 0.0;  // 1e-10 (1 + value_scale)
  bool passed = false;
};

/// Midpoint-convexity sampling of both g+ and g-.
ConvexitySplitReport convexity_split_check(const ScalarMap& phi, std::size_t dim, double L,
                                           const DomainSampler& sampler, std::size_t budget,
                                           std::size_t workers = 0);

}  // namespace hessfree
