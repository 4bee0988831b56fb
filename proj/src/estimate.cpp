#include "hessfree/estimate.hpp"

#include <algorithm>
#include <cmath>

#include "hessfree/error.hpp"
#include "hessfree/parallel.hpp"
#include "hessfree/random.hpp"

namespace hessfree {

namespace {

constexpr int kAscentLevels = 8;
constexpr double kAscentDecay = 0.7;
constexpr double kAscentInitialStep = 0.1;  // fraction of the domain radius

struct Candidate {
  ProbeResult probe;
  std::size_t index = 0;
};

// Result of one unit of parallel work: one best-t pair or one random
// configuration. Offsets are relative to the task's first evaluation.
struct TaskResult {
  std::optional<ProbeResult> best;
  std::size_t best_offset = 0;
  std::optional<ProbeResult> violation;
  std::size_t violation_offset = 0;
  std::size_t evaluations = 0;
  std::vector<ProbeRecord> records;
};

class TaskRecorder {
 public:
  TaskRecorder(ProbeKind kind, std::optional<double> claimed, bool keep_records)
      : kind_(kind), claimed_(claimed), keep_(keep_records) {}

  void operator()(const ProbeResult& r) {
    const std::size_t offset = out.evaluations++;
    if (keep_) out.records.push_back({offset, r.config.size(), r.gap, r.spread, r.ratio, kind_});
    if (r.ratio && (!out.best || probe_score(r) > probe_score(*out.best))) {
      out.best = r;
      out.best_offset = offset;
    }
    if (claimed_ && !out.violation && violates(r, *claimed_)) {
      out.violation = r;
      out.violation_offset = offset;
    }
  }

  TaskResult out;

 private:
  ProbeKind kind_;
  std::optional<double> claimed_;
  bool keep_;
};

class Search {
 public:
  Search(const VectorOracle& F, const SearchBudget& budget, const SearchOptions& options,
         SearchTrace* trace, std::optional<double> claimed)
      : F_(F),
        budget_(budget),
        workers_(options.workers == 0 ? default_workers() : options.workers),
        trace_(trace),
        claimed_(claimed) {}

  void run() {
    budget_.validate();
    if (run_phase(budget_.two_point_pairs, [this](std::size_t i) { return pair_task(i); })) return;
    if (run_phase(budget_.random_configs, [this](std::size_t i) { return config_task(i); })) return;
    if (!best_) {
      throw Error(ErrorCode::NoInformativeProbe,
                  F_.label + ": no informative probe (every spread fell below the floor)");
    }
    ascend();
  }

  std::optional<Candidate> best_;
  std::optional<Candidate> violation_;
  std::size_t probes_used_ = 0;

 private:
  template <class TaskFn>
  bool run_phase(std::size_t tasks, TaskFn task) {
    // Falsification checks for a violation between blocks; the outcome does
    // not depend on the block size because tasks are scanned in order.
    const std::size_t block = claimed_ ? std::max<std::size_t>(64, 16 * workers_) : tasks;
    for (std::size_t start = 0; start < tasks; start += block) {
      const std::size_t end = std::min(tasks, start + block);
      std::vector<TaskResult> results(end - start);
      parallel_for(start, end, workers_, [&](std::size_t i) { results[i - start] = task(i); });
      for (TaskResult& r : results) {
        if (absorb(r)) return true;
      }
    }
    return false;
  }

  // Folds a task into the running state; true when a violation ends the search.
  bool absorb(TaskResult& r) {
    const std::size_t base = probes_used_;
    const std::size_t used = r.violation ? r.violation_offset + 1 : r.evaluations;
    if (trace_) {
      for (std::size_t k = 0; k < used; ++k) {
        ProbeRecord rec = r.records[k];
        rec.index += base;
        trace_->records.push_back(rec);
      }
    }
    if (r.best && (!r.violation || r.best_offset <= r.violation_offset) &&
        (!best_ || probe_score(*r.best) > probe_score(best_->probe))) {
      best_ = Candidate{std::move(*r.best), base + r.best_offset};
    }
    probes_used_ += used;
    if (r.violation) {
      violation_ = Candidate{std::move(*r.violation), base + r.violation_offset};
      return true;
    }
    return false;
  }

  TaskResult pair_task(std::size_t i) {
    Rng rng = make_rng(budget_.seed, Stream::TwoPointPairs, i);
    const Point x = uniform_ball_point(rng, F_.dim_in, budget_.domain_radius);
    Point y = uniform_ball_point(rng, F_.dim_in, budget_.domain_radius);
    while (y == x) y = uniform_ball_point(rng, F_.dim_in, budget_.domain_radius);
    TaskRecorder rec(ProbeKind::TwoPoint, claimed_, trace_ != nullptr);
    best_t_probe(F_, x, y, std::ref(rec));
    return std::move(rec.out);
  }

  TaskResult config_task(std::size_t i) {
    Rng rng = make_rng(budget_.seed, Stream::RandomConfigs, i);
    const std::size_t n =
        std::uniform_int_distribution<std::size_t>(2, budget_.max_n)(rng);
    std::vector<Point> points;
    points.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      points.push_back(uniform_ball_point(rng, F_.dim_in, budget_.domain_radius));
    }
    SimplexWeights w = dirichlet_uniform(rng, n);
    TaskRecorder rec(ProbeKind::Random, claimed_, trace_ != nullptr);
    rec(jensen_probe(F_, Configuration(std::move(points), std::move(w))));
    return std::move(rec.out);
  }

  // Coordinate ascent on the point positions; weights stay fixed.
  void ascend() {
    if (budget_.ascent_steps == 0) return;
    Rng rng = make_rng(budget_.seed, Stream::Ascent, 0);
    Candidate incumbent = *best_;
    const std::size_t per_level =
        (budget_.ascent_steps + kAscentLevels - 1) / kAscentLevels;
    const double radius = budget_.domain_radius;
    for (std::size_t s = 0; s < budget_.ascent_steps; ++s) {
      const int level = static_cast<int>(std::min<std::size_t>(s / per_level, kAscentLevels - 1));
      const double step = kAscentInitialStep * radius * std::pow(kAscentDecay, level);
      const Configuration& cfg = incumbent.probe.config;
      const std::size_t i = std::uniform_int_distribution<std::size_t>(0, cfg.size() - 1)(rng);
      const std::size_t k = std::uniform_int_distribution<std::size_t>(0, cfg.dim() - 1)(rng);
      const double sign = uniform01(rng) < 0.5 ? -1.0 : 1.0;
      const Point& p = cfg.points()[i];
      Point moved = p.with_coord(k, p[k] + sign * step);
      if (norm2(moved) > radius) continue;

      TaskRecorder rec(ProbeKind::Ascent, claimed_, trace_ != nullptr);
      rec(jensen_probe(F_, cfg.with_point(i, std::move(moved))));
      TaskResult r = std::move(rec.out);
      std::optional<ProbeResult> cand = r.best;
      const std::size_t index = probes_used_;
      if (absorb(r)) return;
      if (cand && probe_score(*cand) > probe_score(incumbent.probe)) incumbent = Candidate{std::move(*cand), index};
    }
  }

  const VectorOracle& F_;
  SearchBudget budget_;
  std::size_t workers_;
  SearchTrace* trace_;
  std::optional<double> claimed_;
};

}  // namespace

void SearchBudget::validate() const {
  if (random_configs == 0 && two_point_pairs == 0) {
    throw Error(ErrorCode::InvalidArgument, "budget needs random_configs or two_point_pairs > 0");
  }
  if (max_n < 2) throw Error(ErrorCode::InvalidArgument, "max_n must be >= 2");
  if (!(domain_radius > 0.0) || !std::isfinite(domain_radius)) {
    throw Error(ErrorCode::DegenerateDomain, "domain_radius must be positive and finite");
  }
}

const char* to_string(ProbeKind kind) {
  switch (kind) {
    case ProbeKind::TwoPoint:
      return "two_point";
    case ProbeKind::Random:
      return "random";
    case ProbeKind::Ascent:
      return "ascent";
  }
  return "unknown";
}

double violation_tolerance(const ProbeResult& probe, double claimed_L) {
  return 0.5 * claimed_L * probe.spread * kViolationRelTol +
         kViolationAbsTol * (1.0 + probe.output_scale);
}

bool violates(const ProbeResult& probe, double claimed_L) {
  return probe.gap - 0.5 * claimed_L * probe.spread > violation_tolerance(probe, claimed_L);
}

bool replays(const VectorOracle& F, const ProbeResult& probe, double rel_tol) {
  const ProbeResult again = jensen_probe(F, probe.config);
  auto close = [rel_tol](double a, double b) {
    return std::abs(a - b) <= rel_tol * std::max({std::abs(a), std::abs(b), 1e-300});
  };
  return close(again.gap, probe.gap) && close(again.spread, probe.spread);
}

LowerBoundCertificate estimate_L(const VectorOracle& F, const SearchBudget& budget,
                                 const SearchOptions& options, SearchTrace* trace) {
  Search search(F, budget, options, trace, std::nullopt);
  search.run();
  const double L_lower = *search.best_->probe.ratio;
  return LowerBoundCertificate{
      .L_lower = L_lower,
      .witness = std::move(search.best_->probe),
      .witness_index = search.best_->index,
      .probes_used = search.probes_used_,
      .oracle_label = F.label,
      .budget = budget,
      .rng_algorithm = std::string(kRngAlgorithm),
  };
}

FalsifyOutcome falsify(const VectorOracle& F, double claimed_L, const SearchBudget& budget,
                       const SearchOptions& options, SearchTrace* trace) {
  if (!(claimed_L >= 0.0) || !std::isfinite(claimed_L)) {
    throw Error(ErrorCode::InvalidArgument, "claimed_L must be finite and >= 0");
  }
  Search search(F, budget, options, trace, claimed_L);
  search.run();
  FalsifyOutcome out;
  out.probes_used = search.probes_used_;
  if (search.violation_) {
    const ProbeResult& w = search.violation_->probe;
    out.certificate = ViolationCertificate{
        .claimed_L = claimed_L,
        .witness = w,
        .witness_index = search.violation_->index,
        .margin = w.gap - 0.5 * claimed_L * w.spread,
        .tolerance = violation_tolerance(w, claimed_L),
    };
  }
  return out;
}

CrossValidation cross_validate(const Oracle& oracle, const SearchBudget& budget,
                               std::size_t fd_budget, const SearchOptions& options) {
  const VectorOracle F = probe_map(oracle);
  LowerBoundCertificate cert = estimate_L(F, budget, options);
  DomainSampler domain;
  domain.shape = DomainSampler::Shape::Box;
  domain.radius = budget.domain_radius;
  domain.min_separation = 1e-2 * budget.domain_radius;
  domain.seed = budget.seed;
  LipschitzEstimate fd = lip_from_jacobians(F, domain, fd_budget, options.workers);
  const double L_probe = cert.L_lower;
  const double L_fd = fd.value;
  return CrossValidation{
      .L_probe = L_probe,
      .L_fd = L_fd,
      .consistent = L_probe <= L_fd * (1.0 + kCrossValidationTol) + kCrossValidationAbsTol,
      .probe_certificate = std::move(cert),
      .fd_estimate = std::move(fd),
      .fd_domain = domain,
  };
}

}  // namespace hessfree
