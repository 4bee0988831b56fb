#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hessfree/vecspace.hpp"

namespace hessfree {

using ScalarMap = std::function<double(const Point&)>;
using VectorMap = std::function<Point(const Point&)>;

/// F: R^dim_in -> R^dim_out. known_L, when set, is the Lipschitz constant of
/// the Jacobian x -> F'(x) in spectral norm.
struct VectorOracle {
  std::size_t dim_in = 0;
  std::size_t dim_out = 0;
  VectorMap eval;
  std::optional<double> known_L;
  std::string label;

  /// Evaluates with dimension checks on input and output.
  Point operator()(const Point& x) const;
};

/// f: R^dim -> R with gradient. known_L is the Hessian-Lipschitz constant.
struct ScalarOracle {
  std::size_t dim = 0;
  ScalarMap value;
  VectorMap gradient;
  std::optional<double> known_L;
  std::string label;

  [[nodiscard]] double operator()(const Point& x) const;
  [[nodiscard]] Point grad(const Point& x) const;

  /// The gradient viewed as a map R^dim -> R^dim, carrying the same known_L.
  [[nodiscard]] VectorOracle gradient_oracle() const;
};

using Oracle = std::variant<ScalarOracle, VectorOracle>;

/// Registry lookup. Empty params select the documented defaults.
Oracle builtin(std::string_view name, std::span<const double> params = {});
const std::vector<std::string>& builtin_names();

/// The map the Jensen-gap probes act on: F itself, or grad f for scalar oracles.
VectorOracle probe_map(const Oracle& oracle);
const std::string& oracle_label(const Oracle& oracle);
std::optional<double> oracle_known_L(const Oracle& oracle);
std::size_t oracle_dim_in(const Oracle& oracle);

}  // namespace hessfree
