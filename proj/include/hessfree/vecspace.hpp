#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hessfree {

/// Dense point of R^d (d >= 1) with finite coordinates. Immutable value type;
/// arithmetic returns new points.
class Point {
 public:
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords);

  static Point zeros(std::size_t dim);
  static Point basis(std::size_t dim, std::size_t k);

  [[nodiscard]] std::size_t dim() const noexcept { return coords_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return coords_[i]; }
  [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }
  [[nodiscard]] const std::vector<double>& vector() const noexcept { return coords_; }

  /// Copy with coordinate k replaced.
  [[nodiscard]] Point with_coord(std::size_t k, double value) const;

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

Point operator+(const Point& a, const Point& b);
Point operator-(const Point& a, const Point& b);
Point operator-(const Point& a);
Point operator*(double s, const Point& a);
Point operator*(const Point& a, double s);

/// Euclidean inner product; throws DimensionMismatch.
double inner(const Point& a, const Point& b);
double norm2(const Point& a);
double distance(const Point& a, const Point& b);

/// Weights on the probability simplex. Sums within 1e-9 of one are
/// renormalized; larger deviations and negative entries are rejected.
class SimplexWeights {
 public:
  explicit SimplexWeights(std::vector<double> weights);
  SimplexWeights(std::initializer_list<double> weights);

  [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return weights_[i]; }
  [[nodiscard]] std::span<const double> values() const noexcept { return weights_; }

  friend bool operator==(const SimplexWeights&, const SimplexWeights&) = default;

 private:
  std::vector<double> weights_;
};

/// n points of a common dimension together with matching simplex weights.
class Configuration {
 public:
  Configuration(std::vector<Point> points, SimplexWeights weights);

  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
  [[nodiscard]] std::size_t dim() const noexcept { return points_.front().dim(); }
  [[nodiscard]] const std::vector<Point>& points() const noexcept { return points_; }
  [[nodiscard]] const SimplexWeights& weights() const noexcept { return weights_; }

  [[nodiscard]] Configuration with_point(std::size_t i, Point p) const;

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<Point> points_;
  SimplexWeights weights_;
};

/// sum_i w_i x_i
Point convex_combination(const Configuration& c);

/// S = sum_{i<j} w_i w_j |x_i - x_j|^2, as the explicit double sum.
double pair_spread(const Configuration& c);

}  // namespace hessfree
