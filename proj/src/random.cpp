#include "hessfree/random.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hessfree/error.hpp"

namespace hessfree {

Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

Point gaussian_point(Rng& rng, std::size_t dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(dim);
  for (double& x : v) x = normal(rng);
  return Point(std::move(v));
}

Point unit_sphere_point(Rng& rng, std::size_t dim) {
  for (;;) {
    Point g = gaussian_point(rng, dim);
    const double n = norm2(g);
    if (n > 1e-300) return (1.0 / n) * g;
  }
}

Point uniform_ball_point(Rng& rng, std::size_t dim, double radius) {
  const Point dir = unit_sphere_point(rng, dim);
  const double r = radius * std::pow(uniform01(rng), 1.0 / static_cast<double>(dim));
  return r * dir;
}

Point uniform_box_point(Rng& rng, std::size_t dim, double half_width) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  std::vector<double> v(dim);
  for (double& x : v) x = u(rng);
  return Point(std::move(v));
}

SimplexWeights dirichlet_uniform(Rng& rng, std::size_t n) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(n);
  double sum = 0.0;
  for (double& x : w) {
    x = expo(rng);
    sum += x;
  }
  if (!(sum > 0.0)) {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(n));
  } else {
    for (double& x : w) x /= sum;
  }
  return SimplexWeights(std::move(w));
}

void DomainSampler::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::DegenerateDomain, "sampling domain radius must be positive and finite");
  }
  if (!(min_separation >= 0.0) || min_separation >= radius) {
    throw Error(ErrorCode::DegenerateDomain, "minimum pair separation must lie in [0, radius)");
  }
}

bool DomainSampler::contains(const Point& x) const {
  if (shape == Shape::Ball) return norm2(x) <= radius;
  for (double v : x.coords()) {
    if (std::abs(v) > radius) return false;
  }
  return true;
}

Point DomainSampler::sample(Rng& rng, std::size_t dim) const {
  return shape == Shape::Ball ? uniform_ball_point(rng, dim, radius)
                              : uniform_box_point(rng, dim, radius);
}

std::pair<Point, Point> DomainSampler::sample_pair(Stream stream, std::uint64_t index,
                                                   std::size_t dim) const {
  validate();
  Rng rng = make_rng(seed, stream, index);
  Point x = sample(rng, dim);
  for (int attempt = 0; attempt < 256; ++attempt) {
    Point y = sample(rng, dim);
    if (distance(x, y) >= min_separation && distance(x, y) > 0.0) return {std::move(x), std::move(y)};
  }
  throw Error(ErrorCode::DegenerateDomain, "could not draw a separated pair from the domain");
}

}  // namespace hessfree
