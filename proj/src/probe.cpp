#include "hessfree/probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hessfree/error.hpp"

namespace hessfree {

namespace {

bool better(const ProbeResult& a, const ProbeResult& b) {
  if (!a.ratio) return false;
  if (!b.ratio) return true;
  return probe_score(a) > probe_score(b);
}

}  // namespace

double ratio_error_bound(const ProbeResult& r) {
  if (!r.ratio) return std::numeric_limits<double>::infinity();
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const auto n = static_cast<double>(r.config.size());
  return 2.0 * (n + 2.0) * eps * (1.0 + r.output_scale) / r.spread + 4.0 * n * eps * *r.ratio;
}

double probe_score(const ProbeResult& r) {
  return r.ratio ? *r.ratio - ratio_error_bound(r) : -std::numeric_limits<double>::infinity();
}

double spread_floor(const Configuration& c) {
  double m = 0.0;
  for (const Point& p : c.points()) m = std::max(m, norm2(p));
  return 1e-14 * (1.0 + m) * (1.0 + m);
}

ProbeResult jensen_probe(const VectorOracle& F, const Configuration& c) {
  if (c.dim() != F.dim_in) {
    throw Error(ErrorCode::DimensionMismatch, F.label + ": configuration dimension " +
                                                  std::to_string(c.dim()) + ", oracle expects " +
                                                  std::to_string(F.dim_in));
  }
  const Point at_mean = F(convex_combination(c));
  double scale = norm2(at_mean);
  std::vector<double> avg(F.dim_out, 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double w = c.weights()[i];
    if (w == 0.0) continue;
    const Point v = F(c.points()[i]);
    scale = std::max(scale, norm2(v));
    for (std::size_t k = 0; k < avg.size(); ++k) avg[k] += w * v[k];
  }
  double gap2 = 0.0;
  for (std::size_t k = 0; k < avg.size(); ++k) {
    const double d = at_mean[k] - avg[k];
    gap2 += d * d;
  }

  ProbeResult r{std::sqrt(gap2), pair_spread(c), std::nullopt, c, F.label, scale};
  if (r.spread > spread_floor(c)) r.ratio = 2.0 * r.gap / r.spread;
  return r;
}

ProbeResult two_point_probe(const VectorOracle& F, const Point& x, const Point& y, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "t must lie in [0, 1]");
  if (x.dim() != y.dim()) throw Error(ErrorCode::DimensionMismatch, "two-point probe dimensions");
  return jensen_probe(F, Configuration({x, y}, SimplexWeights({1.0 - t, t})));
}

ProbeResult best_t_probe(const VectorOracle& F, const Point& x, const Point& y,
                         const ProbeObserver& observe) {
  if (x == y) throw Error(ErrorCode::InvalidArgument, "best_t_probe requires x != y");

  std::optional<ProbeResult> best;
  auto eval = [&](double t) {
    ProbeResult r = two_point_probe(F, x, y, t);
    if (observe) observe(r);
    if (!best || better(r, *best)) best = r;
    return probe_score(r);
  };

  int best_k = kBestTGrid / 2;
  double best_grid = -std::numeric_limits<double>::infinity();
  for (int k = 1; k < kBestTGrid; ++k) {
    const double r = eval(static_cast<double>(k) / kBestTGrid);
    if (r > best_grid) {
      best_grid = r;
      best_k = k;
    }
  }

  // Golden-section search for the maximum on [(k-1)/32, (k+1)/32].
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = static_cast<double>(best_k - 1) / kBestTGrid;
  double hi = static_cast<double>(best_k + 1) / kBestTGrid;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = eval(c);
  double fd = eval(d);
  for (int it = 0; it < kBestTGoldenIterations; ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = eval(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = eval(d);
    }
  }
  return *best;
}

double midpoint_convexity_violation(const ScalarMap& g, const Point& x, const Point& y) {
  const double mid = g(0.5 * (x + y));
  const double gx = g(x);
  const double gy = g(y);
  if (!std::isfinite(mid) || !std::isfinite(gx) || !std::isfinite(gy)) {
    throw Error(ErrorCode::NonFinite, "non-finite value in convexity probe");
  }
  return mid - 0.5 * (gx + gy);
}

}  // namespace hessfree
