#include "hessfree/baillon_haddad.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hessfree/error.hpp"
#include "hessfree/parallel.hpp"
#include "hessfree/probe.hpp"

namespace hessfree {

namespace {

constexpr double kCocoercivityTol = 1e-10;
constexpr double kConvexityTol = 1e-10;

struct ResidualEval {
  double residual = 0.0;
  double scale = 0.0;
};

ResidualEval residual_with_scale(const VectorMap& G, double beta, const Point& x, const Point& y) {
  const Point gx = G(x);
  const Point gy = G(y);
  const Point dg = gx - gy;
  return {inner(dg, x - y) - inner(dg, dg) / beta, std::max(norm2(gx), norm2(gy))};
}

}  // namespace

double cocoercivity_residual(const VectorMap& G, double beta, const Point& x, const Point& y) {
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be positive");
  if (x.dim() != y.dim()) throw Error(ErrorCode::DimensionMismatch, "cocoercivity pair dimensions");
  return residual_with_scale(G, beta, x, y).residual;
}

CocoercivityReport check_cocoercive(const VectorMap& G, std::size_t dim, double beta,
                                    const DomainSampler& sampler, std::size_t budget,
                                    std::size_t workers) {
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be positive");
  if (budget == 0) throw Error(ErrorCode::InvalidArgument, "budget must be >= 1");
  sampler.validate();

  std::vector<ResidualEval> evals(budget);
  parallel_for(0, budget, workers, [&](std::size_t i) {
    const auto [x, y] = sampler.sample_pair(Stream::CocoercivityPairs, i, dim);
    evals[i] = residual_with_scale(G, beta, x, y);
  });

  CocoercivityReport rep;
  rep.beta = beta;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < budget; ++i) {
    if (evals[i].residual < evals[worst].residual) worst = i;
    rep.output_scale = std::max(rep.output_scale, evals[i].scale);
  }
  auto [x, y] = sampler.sample_pair(Stream::CocoercivityPairs, worst, dim);
  rep.min_residual = evals[worst].residual;
  rep.pairs_tested = budget;

  // Descent on the residual, perturbing one coordinate of x or y at a time.
  const std::size_t steps = budget / 4;
  Rng rng = make_rng(sampler.seed, Stream::CocoercivityDescent, 0);
  const std::size_t per_level = std::max<std::size_t>(1, (steps + 7) / 8);
  for (std::size_t s = 0; s < steps; ++s) {
    const double step = 0.1 * sampler.radius * std::pow(0.7, static_cast<double>(std::min<std::size_t>(s / per_level, 7)));
    const bool move_x = uniform01(rng) < 0.5;
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, dim - 1)(rng);
    const double sign = uniform01(rng) < 0.5 ? -1.0 : 1.0;
    const Point& p = move_x ? x : y;
    Point moved = p.with_coord(k, p[k] + sign * step);
    if (!sampler.contains(moved)) continue;
    const Point& nx = move_x ? moved : x;
    const Point& ny = move_x ? y : moved;
    if (nx == ny) continue;
    const ResidualEval e = residual_with_scale(G, beta, nx, ny);
    ++rep.pairs_tested;
    rep.output_scale = std::max(rep.output_scale, e.scale);
    if (e.residual < rep.min_residual) {
      rep.min_residual = e.residual;
      if (move_x) {
        x = std::move(moved);
      } else {
        y = std::move(moved);
      }
    }
  }

  rep.witness_pair = std::make_pair(std::move(x), std::move(y));
  rep.tolerance = kCocoercivityTol * (1.0 + rep.output_scale) * (1.0 + rep.output_scale);
  rep.passed = rep.min_residual >= -rep.tolerance;
  return rep;
}

ExpansionCheck lipschitz_from_cocoercivity(const VectorMap& grad_phi, double L, const Point& x,
                                           const Point& y) {
  if (!(L > 0.0)) throw Error(ErrorCode::InvalidArgument, "L must be positive");
  const Point gx = grad_phi(x);
  const Point gy = grad_phi(y);
  const Point dphi = gx - gy;
  const Point dx = x - y;
  // G(x) - G(y) = L (x - y) + grad_phi(x) - grad_phi(y)
  const Point dG = L * dx + dphi;
  ExpansionCheck out;
  out.lhs = inner(dphi, dphi);
  out.rhs = L * L * inner(dx, dx);
  out.residual = inner(dG, dx) - inner(dG, dG) / (2.0 * L);
  return out;
}

ConvexitySplitReport convexity_split_check(const ScalarMap& phi, std::size_t dim, double L,
                                           const DomainSampler& sampler, std::size_t budget,
                                           std::size_t workers) {
  if (!(L > 0.0)) throw Error(ErrorCode::InvalidArgument, "L must be positive");
  if (budget == 0) throw Error(ErrorCode::InvalidArgument, "budget must be >= 1");
  sampler.validate();

  struct PairEval {
    double plus = 0.0;
    double minus = 0.0;
    double scale = 0.0;
  };
  std::vector<PairEval> evals(budget);
  parallel_for(0, budget, workers, [&](std::size_t i) {
    const auto [x, y] = sampler.sample_pair(Stream::ConvexityPairs, i, dim);
    double scale = 0.0;
    auto tracked = [&](double sign) {
      return ScalarMap([&, sign](const Point& p) {
        const double n = norm2(p);
        const double v = 0.5 * L * n * n + sign * phi(p);
        scale = std::max(scale, std::abs(v));
        return v;
      });
    };
    const double vp = midpoint_convexity_violation(tracked(1.0), x, y);
    const double vm = midpoint_convexity_violation(tracked(-1.0), x, y);
    evals[i] = {vp, vm, scale};
  });

  ConvexitySplitReport rep;
  rep.L = L;
  rep.pairs_tested = budget;
  std::size_t wp = 0;
  std::size_t wm = 0;
  for (std::size_t i = 0; i < budget; ++i) {
    if (evals[i].plus > evals[wp].plus) wp = i;
    if (evals[i].minus > evals[wm].minus) wm = i;
    rep.value_scale = std::max(rep.value_scale, evals[i].scale);
  }
  rep.plus.max_violation = evals[wp].plus;
  rep.plus.pair = sampler.sample_pair(Stream::ConvexityPairs, wp, dim);
  rep.minus.max_violation = evals[wm].minus;
  rep.minus.pair = sampler.sample_pair(Stream::ConvexityPairs, wm, dim);
  rep.tolerance = kConvexityTol * (1.0 + rep.value_scale);
  rep.passed = rep.plus.max_violation <= rep.tolerance && rep.minus.max_violation <= rep.tolerance;
  return rep;
}

}  // namespace hessfree
