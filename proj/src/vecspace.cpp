#include "hessfree/vecspace.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "hessfree/error.hpp"

namespace hessfree {

namespace {

void require_same_dim(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "dimension mismatch: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

}  // namespace

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw Error(ErrorCode::InvalidArgument, "point must have dimension >= 1");
  for (double v : coords_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "non-finite coordinate");
  }
}

Point::Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

Point Point::zeros(std::size_t dim) { return Point(std::vector<double>(dim, 0.0)); }

Point Point::basis(std::size_t dim, std::size_t k) {
  std::vector<double> v(dim, 0.0);
  if (k >= dim) throw Error(ErrorCode::InvalidArgument, "basis index out of range");
  v[k] = 1.0;
  return Point(std::move(v));
}

Point Point::with_coord(std::size_t k, double value) const {
  if (k >= dim()) throw Error(ErrorCode::InvalidArgument, "coordinate index out of range");
  std::vector<double> v = coords_;
  v[k] = value;
  return Point(std::move(v));
}

Point operator+(const Point& a, const Point& b) {
  require_same_dim(a, b);
  std::vector<double> v(a.dim());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
  return Point(std::move(v));
}

Point operator-(const Point& a, const Point& b) {
  require_same_dim(a, b);
  std::vector<double> v(a.dim());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] - b[i];
  return Point(std::move(v));
}

Point operator-(const Point& a) { return -1.0 * a; }

Point operator*(double s, const Point& a) {
  std::vector<double> v(a.dim());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = s * a[i];
  return Point(std::move(v));
}

Point operator*(const Point& a, double s) { return s * a; }

double inner(const Point& a, const Point& b) {
  require_same_dim(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(const Point& a) { return std::sqrt(inner(a, a)); }

double distance(const Point& a, const Point& b) {
  require_same_dim(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

SimplexWeights::SimplexWeights(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error(ErrorCode::InvalidArgument, "simplex weights must be non-empty");
  for (double w : weights_) {
    if (!std::isfinite(w)) throw Error(ErrorCode::NonFinite, "non-finite simplex weight");
    if (w < 0.0) throw Error(ErrorCode::InvalidArgument, "negative simplex weight");
  }
  const double sum = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument,
                "simplex weights sum to " + std::to_string(sum) + ", expected 1");
  }
  // A sum within rounding of 1 is left alone: dividing again would perturb
  // weights that are already as normalized as floating point allows.
  const double rounding = 2.0 * static_cast<double>(weights_.size()) * std::numeric_limits<double>::epsilon();
  if (std::abs(sum - 1.0) > rounding) {
    for (double& w : weights_) w /= sum;
  }
}

SimplexWeights::SimplexWeights(std::initializer_list<double> weights)
    : SimplexWeights(std::vector<double>(weights)) {}

Configuration::Configuration(std::vector<Point> points, SimplexWeights weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.size() != weights_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "configuration has " + std::to_string(points_.size()) +
                                                  " points but " + std::to_string(weights_.size()) +
                                                  " weights");
  }
  for (const Point& p : points_) {
    if (p.dim() != points_.front().dim()) {
      throw Error(ErrorCode::DimensionMismatch, "configuration points differ in dimension");
    }
  }
}

Configuration Configuration::with_point(std::size_t i, Point p) const {
  std::vector<Point> pts = points_;
  pts.at(i) = std::move(p);
  return Configuration(std::move(pts), weights_);
}

// Accumulated as offsets from the first point carrying weight, so that
// coincident points give that point back exactly.
Point convex_combination(const Configuration& c) {
  std::size_t anchor = 0;
  while (c.weights()[anchor] == 0.0) ++anchor;
  const Point& x0 = c.points()[anchor];
  std::vector<double> acc(c.dim(), 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double w = c.weights()[i];
    if (i == anchor || w == 0.0) continue;
    const Point& x = c.points()[i];
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += w * (x[k] - x0[k]);
  }
  for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += x0[k];
  return Point(std::move(acc));
}

double pair_spread(const Configuration& c) {
  double acc = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double wi = c.weights()[i];
    if (wi == 0.0) continue;
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      const double wj = c.weights()[j];
      if (wj == 0.0) continue;
      const Point& xi = c.points()[i];
      const Point& xj = c.points()[j];
      double d2 = 0.0;
      for (std::size_t k = 0; k < xi.dim(); ++k) {
        const double d = xi[k] - xj[k];
        d2 += d * d;
      }
      acc += wi * wj * d2;
    }
  }
  return acc;
}

}  // namespace hessfree
