#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>

#include "hessfree/vecspace.hpp"

namespace hessfree {

/// Identifier recorded in every report and certificate. Each random draw
/// comes from an independent stream keyed by (seed, purpose, index), so the
/// set of probes is fixed by the seed alone, whatever the worker count.
inline constexpr std::string_view kRngAlgorithm =
    "mt19937_64 seeded by std::seed_seq{seed_lo32, seed_hi32, stream_id, index_lo32, index_hi32}";

using Rng = std::mt19937_64;

enum class Stream : std::uint32_t {
  TwoPointPairs = 1,
  RandomConfigs = 2,
  Ascent = 3,
  DerivativePairs = 4,
  CocoercivityPairs = 5,
  CocoercivityDescent = 6,
  ConvexityPairs = 7,
  Functionals = 8,
  SlicePairs = 9,
  Directions = 10,
  ReconstructionPoints = 11,
};

Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t index);

double uniform01(Rng& rng);
Point gaussian_point(Rng& rng, std::size_t dim);
Point unit_sphere_point(Rng& rng, std::size_t dim);
/// Uniform in the closed Euclidean ball of the given radius.
Point uniform_ball_point(Rng& rng, std::size_t dim, double radius);
Point uniform_box_point(Rng& rng, std::size_t dim, double half_width);
/// Dirichlet(1,...,1), i.e. uniform on the simplex, via normalized exponentials.
SimplexWeights dirichlet_uniform(Rng& rng, std::size_t n);

/// Where pairs of points are drawn from. Pairs closer than min_separation
/// are redrawn, since finite-difference noise divided by a tiny |x - y|
/// swamps any Lipschitz ratio.
struct DomainSampler {
  enum class Shape { Box, Ball };

  Shape shape = Shape::Box;
  double radius = 5.0;
  double min_separation = 1e-2;
  std::uint64_t seed = 42;

  void validate() const;
  [[nodiscard]] bool contains(const Point& x) const;
  [[nodiscard]] Point sample(Rng& rng, std::size_t dim) const;
  [[nodiscard]] std::pair<Point, Point> sample_pair(Stream stream, std::uint64_t index,
                                                    std::size_t dim) const;
};

}  // namespace hessfree
