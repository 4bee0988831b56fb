#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hessfree/fd.hpp"
#include "hessfree/oracles.hpp"
#include "hessfree/probe.hpp"

namespace hessfree {

struct SearchBudget {
  std::size_t random_configs = 4096;
  std::size_t ascent_steps = 512;
  std::size_t two_point_pairs = 1024;
  std::uint64_t seed = 42;
  std::size_t max_n = 4;
  double domain_radius = 5.0;

  void validate() const;
  [[nodiscard]] std::size_t total() const { return random_configs + ascent_steps + two_point_pairs; }
};

enum class ProbeKind { TwoPoint, Random, Ascent };
const char* to_string(ProbeKind kind);

struct ProbeRecord {
  std::size_t index = 0;
  std::size_t n = 0;
  double gap = 0.0;
  double spread = 0.0;
  std::optional<double> ratio;
  ProbeKind kind = ProbeKind::Random;
};

struct SearchOptions {
  std::size_t workers = 0;  // 0: default_workers()
};

/// Every probe evaluation of a search, in probe-index order.
struct SearchTrace {
  std::vector<ProbeRecord> records;
};

/// Replayable witness that the Lipschitz constant of F' is at least L_lower.
struct LowerBoundCertificate {
  double L_lower = 0.0;
  ProbeResult witness;
  std::size_t witness_index = 0;
  std::size_t probes_used = 0;
  std::string oracle_label;
  SearchBudget budget;
  std::string rng_algorithm;
};

/// Replayable configuration on which the gap exceeds (claimed_L / 2) spread.
struct ViolationCertificate {
  double claimed_L = 0.0;
  ProbeResult witness;
  std::size_t witness_index = 0;
  double margin = 0.0;     // gap - (claimed_L / 2) spread
  double tolerance = 0.0;  // violation_tolerance(witness, claimed_L); margin exceeds it
};

struct FalsifyOutcome {
  std::optional<ViolationCertificate> certificate;
  std::size_t probes_used = 0;
};

inline constexpr double kViolationRelTol = 1e-8;
inline constexpr double kViolationAbsTol = 1e-12;

/// (claimed_L / 2) spread tau + 1e-12 (1 + output scale)
double violation_tolerance(const ProbeResult& probe, double claimed_L);
bool violates(const ProbeResult& probe, double claimed_L);

/// Re-evaluates the probe's configuration and compares gap and spread.
bool replays(const VectorOracle& F, const ProbeResult& probe, double rel_tol = 1e-12);

/// Maximizes the probe ratio: best-t two-point probes, then random
/// configurations with Dirichlet weights, then coordinate ascent from the
/// best candidate. Throws NoInformativeProbe if every spread is below floor.
LowerBoundCertificate estimate_L(const VectorOracle& F, const SearchBudget& budget,
                                 const SearchOptions& options = {}, SearchTrace* trace = nullptr);

/// The estimate_L search, stopped at the first probe violating the
/// inequality at claimed_L. An empty result is not a proof that claimed_L
/// is valid.
FalsifyOutcome falsify(const VectorOracle& F, double claimed_L, const SearchBudget& budget,
                       const SearchOptions& options = {}, SearchTrace* trace = nullptr);

inline constexpr double kCrossValidationTol = 5e-2;
inline constexpr double kCrossValidationAbsTol = 1e-6;

struct CrossValidation {
  double L_probe = 0.0;
  double L_fd = 0.0;
  bool consistent = false;  // L_probe <= L_fd (1 + 5e-2) + 1e-6
  LowerBoundCertificate probe_certificate;
  LipschitzEstimate fd_estimate;
  DomainSampler fd_domain;
};

/// Hessian-free lower bound against the finite-difference Jacobian
/// estimate on the box of half-width budget.domain_radius.
CrossValidation cross_validate(const Oracle& oracle, const SearchBudget& budget,
                               std::size_t fd_budget, const SearchOptions& options = {});

}  // namespace hessfree
