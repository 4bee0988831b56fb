#include "hessfree/slices.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hessfree/error.hpp"
#include "hessfree/parallel.hpp"

namespace hessfree {

namespace {

double rel_error(const Point& a, const Point& b) {
  return distance(a, b) / std::max(1.0, norm2(b));
}

}  // namespace

Functional Functional::unit(Point coeffs) {
  if (norm2(coeffs) > 1.0 + 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "unit functional must have norm <= 1");
  }
  return Functional(std::move(coeffs));
}

std::vector<Functional> sample_unit_functionals(std::size_t m, std::size_t count,
                                                std::uint64_t seed) {
  std::vector<Functional> out;
  out.reserve(2 * m + count);
  for (std::size_t j = 0; j < m; ++j) {
    out.push_back(Functional::unit(Point::basis(m, j)));
    out.push_back(Functional::unit(-Point::basis(m, j)));
  }
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng = make_rng(seed, Stream::Functionals, i);
    Point u = unit_sphere_point(rng, m);
    const double n = norm2(u);
    if (n > 1.0) u = (1.0 / n) * u;  // rounding can leave |u| = 1 + ulp
    out.push_back(Functional::unit(std::move(u)));
  }
  return out;
}

ScalarMap slice(const VectorOracle& F, const Functional& ystar) {
  if (ystar.dim() != F.dim_out) {
    throw Error(ErrorCode::DimensionMismatch, "functional dimension does not match oracle output");
  }
  return [F, ystar](const Point& x) { return ystar(F(x)); };
}

VectorMap slice_gradient(const VectorOracle& F, const Functional& ystar) {
  ScalarMap phi = slice(F, ystar);
  return [phi](const Point& x) { return fd_gradient(phi, x); };
}

SliceSmoothnessReport slice_smoothness_check(const VectorOracle& F, double L,
                                             std::size_t n_functionals,
                                             const DomainSampler& sampler, std::size_t budget,
                                             std::size_t workers) {
  if (!(L >= 0.0)) throw Error(ErrorCode::InvalidArgument, "L must be >= 0");
  if (budget == 0) throw Error(ErrorCode::InvalidArgument, "budget must be >= 1");
  sampler.validate();
  const double Lf = std::max(L, kLipschitzFloor);
  const std::vector<Functional> functionals =
      sample_unit_functionals(F.dim_out, n_functionals, sampler.seed);

  struct PairEval {
    double excess = -std::numeric_limits<double>::infinity();
    double ratio = 0.0;
    std::size_t functional = 0;
  };
  std::vector<PairEval> evals(budget);
  parallel_for(0, budget, workers, [&](std::size_t i) {
    const auto [x, y] = sampler.sample_pair(Stream::SlicePairs, i, F.dim_in);
    const double dx = distance(x, y);
    PairEval best;
    for (std::size_t f = 0; f < functionals.size(); ++f) {
      const ScalarMap phi = slice(F, functionals[f]);
      const double dg = distance(fd_gradient(phi, x), fd_gradient(phi, y));
      const double bound = Lf * dx * (1.0 + kSliceFdRelTol) +
                           kSliceFdAbsTol * (1.0 + std::abs(phi(x)) + std::abs(phi(y)));
      const double excess = dg - bound;
      best.ratio = std::max(best.ratio, dg / dx);
      if (excess > best.excess) {
        best.excess = excess;
        best.functional = f;
      }
    }
    evals[i] = best;
  });

  SliceSmoothnessReport rep;
  rep.L = Lf;
  rep.functionals_tested = functionals.size();
  rep.pairs_tested = budget;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < budget; ++i) {
    rep.max_ratio = std::max(rep.max_ratio, evals[i].ratio);
    if (evals[i].excess > evals[worst].excess) worst = i;
  }
  rep.worst_excess = evals[worst].excess;
  rep.witness_functional = functionals[evals[worst].functional].coeffs();
  rep.witness_pair = sampler.sample_pair(Stream::SlicePairs, worst, F.dim_in);
  rep.passed = rep.worst_excess <= 0.0;
  return rep;
}

Point reconstruct_derivative_action(const VectorOracle& F, const Point& x, const Point& h) {
  if (x.dim() != F.dim_in || h.dim() != F.dim_in) {
    throw Error(ErrorCode::DimensionMismatch, "reconstruction point/direction dimension");
  }
  const double hn = norm2(h);
  if (hn == 0.0) return Point::zeros(F.dim_out);
  const double s = std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + norm2(x)) / hn;
  const Point xp = x + s * h;
  const Point xm = x - s * h;
  std::vector<double> out(F.dim_out);
  for (std::size_t j = 0; j < F.dim_out; ++j) {
    const ScalarMap phi = slice(F, Functional(Point::basis(F.dim_out, j)));
    out[j] = (phi(xp) - phi(xm)) / (2.0 * s);
  }
  return Point(std::move(out));
}

Matrix reconstruct_jacobian(const VectorOracle& F, const Point& x) {
  return assemble([&](const Point& h) { return reconstruct_derivative_action(F, x, h); }, F.dim_in);
}

namespace {

std::vector<Point> sample_directions(std::size_t dim, std::size_t count, std::uint64_t seed) {
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Rng rng = make_rng(seed, Stream::Directions, k);
    out.push_back(unit_sphere_point(rng, dim));
  }
  return out;
}

}  // namespace

DerivativeNormEstimate derivative_norm_via_functionals(const VectorOracle& F, const Point& x,
                                                       const Point& y,
                                                       const std::vector<Functional>& functionals,
                                                       const std::vector<Point>& directions) {
  DerivativeNormEstimate est;
  if (x == y) return est;
  const Matrix d = reconstruct_jacobian(F, x) - reconstruct_jacobian(F, y);

  std::vector<Point> images;
  images.reserve(directions.size());
  for (const Point& h : directions) images.push_back(d.apply(h));
  for (const Functional& ystar : functionals) {
    // sup_{|h| <= 1} y*(D h) = |D^T y*|
    est.empirical_sup = std::max(est.empirical_sup, norm2(d.apply_transpose(ystar.coeffs())));
    for (const Point& dh : images) est.empirical_sup = std::max(est.empirical_sup, ystar(dh));
  }
  const NormEstimate pn = operator_norm(d);
  est.power_norm = pn.value;
  est.converged = pn.converged;
  est.value = std::max(est.empirical_sup, est.power_norm);
  return est;
}

DerivativeNormEstimate derivative_norm_via_functionals(const VectorOracle& F, const Point& x,
                                                       const Point& y, std::size_t n_functionals,
                                                       std::size_t n_directions,
                                                       std::uint64_t seed) {
  return derivative_norm_via_functionals(F, x, y,
                                         sample_unit_functionals(F.dim_out, n_functionals, seed),
                                         sample_directions(F.dim_in, n_directions, seed));
}

ReconstructionReport reconstruction_check(const VectorOracle& F, const DomainSampler& sampler,
                                          std::size_t budget, std::size_t n_functionals,
                                          std::size_t workers) {
  if (budget == 0) throw Error(ErrorCode::InvalidArgument, "budget must be >= 1");
  sampler.validate();
  const VectorMap eval = [&F](const Point& p) { return F(p); };
  const std::vector<Functional> functionals =
      sample_unit_functionals(F.dim_out, n_functionals, sampler.seed);

  struct PointEval {
    double jvp = 0.0;
    double linearity = 0.0;
    double bound_excess = -std::numeric_limits<double>::infinity();
    bool bound_ok = true;
  };
  std::vector<PointEval> evals(budget);
  parallel_for(0, budget, workers, [&](std::size_t i) {
    Rng rng = make_rng(sampler.seed, Stream::ReconstructionPoints, i);
    const Point x = sampler.sample(rng, F.dim_in);
    const Point h1 = unit_sphere_point(rng, F.dim_in);
    const Point h2 = unit_sphere_point(rng, F.dim_in);
    const double alpha = 0.25 + 3.0 * uniform01(rng);

    PointEval e;
    const Point r1 = reconstruct_derivative_action(F, x, h1);
    const Point r2 = reconstruct_derivative_action(F, x, h2);
    e.jvp = std::max(rel_error(r1, fd_jacobian_vec(eval, x, h1)),
                     rel_error(r2, fd_jacobian_vec(eval, x, h2)));
    const Point h12 = h1 + h2;
    if (norm2(h12) > 1e-6) {
      e.linearity = rel_error(reconstruct_derivative_action(F, x, h12), r1 + r2);
    }
    e.linearity = std::max(e.linearity,
                           rel_error(reconstruct_derivative_action(F, x, alpha * h1), alpha * r1));

    const Matrix j = reconstruct_jacobian(F, x);
    const double jn = operator_norm(j).value;
    const double fx = norm2(F(x));
    for (const Functional& ystar : functionals) {
      const double gn = norm2(fd_gradient(slice(F, ystar), x));
      const double excess = gn - jn * norm2(ystar.coeffs());
      e.bound_excess = std::max(e.bound_excess, excess);
      if (excess > kLinearityRelTol * jn + kSliceFdAbsTol * (1.0 + fx)) e.bound_ok = false;
    }
    evals[i] = e;
  });

  ReconstructionReport rep;
  rep.points_tested = budget;
  rep.max_bound_excess = -std::numeric_limits<double>::infinity();
  bool bounds_ok = true;
  for (const PointEval& e : evals) {
    rep.max_jvp_rel_error = std::max(rep.max_jvp_rel_error, e.jvp);
    rep.max_linearity_rel_error = std::max(rep.max_linearity_rel_error, e.linearity);
    rep.max_bound_excess = std::max(rep.max_bound_excess, e.bound_excess);
    bounds_ok = bounds_ok && e.bound_ok;
  }
  rep.passed = rep.max_jvp_rel_error <= kReconstructionRelTol &&
               rep.max_linearity_rel_error <= kLinearityRelTol && bounds_ok;
  return rep;
}

LipschitzTransferReport lipschitz_transfer_check(const VectorOracle& F, double L,
                                                 const DomainSampler& sampler, std::size_t budget,
                                                 std::size_t n_functionals, std::size_t workers) {
  if (!(L >= 0.0)) throw Error(ErrorCode::InvalidArgument, "L must be >= 0");
  if (budget == 0) throw Error(ErrorCode::InvalidArgument, "budget must be >= 1");
  sampler.validate();
  const double Lf = std::max(L, kLipschitzFloor);
  const std::vector<Functional> functionals =
      sample_unit_functionals(F.dim_out, n_functionals, sampler.seed);
  const std::vector<Point> directions = sample_directions(F.dim_in, 8, sampler.seed);

  struct PairEval {
    double ratio = 0.0;
    double excess = 0.0;
    double hb_fraction = 1.0;
  };
  std::vector<PairEval> evals(budget);
  parallel_for(0, budget, workers, [&](std::size_t i) {
    const auto [x, y] = sampler.sample_pair(Stream::SlicePairs, i, F.dim_in);
    const DerivativeNormEstimate est =
        derivative_norm_via_functionals(F, x, y, functionals, directions);
    const double dx = distance(x, y);
    const double slack = kSliceFdAbsTol * (1.0 + norm2(F(x)) + norm2(F(y)));
    PairEval e;
    e.ratio = est.value / dx;
    e.excess = est.value - (Lf * dx * (1.0 + kTransferRelTol) + slack);
    if (est.power_norm > slack) e.hb_fraction = est.empirical_sup / est.power_norm;
    evals[i] = e;
  });

  LipschitzTransferReport rep;
  rep.L = Lf;
  rep.pairs_tested = budget;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < budget; ++i) {
    rep.max_ratio = std::max(rep.max_ratio, evals[i].ratio);
    rep.min_hahn_banach_fraction = std::min(rep.min_hahn_banach_fraction, evals[i].hb_fraction);
    if (evals[i].excess > evals[worst].excess) worst = i;
  }
  rep.witness_pair = sampler.sample_pair(Stream::SlicePairs, worst, F.dim_in);
  rep.passed = evals[worst].excess <= 0.0;
  return rep;
}

}  // namespace hessfree
