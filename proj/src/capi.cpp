#include "hessfree/hessfree.h"

#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <vector>

#include "hessfree/commands.hpp"
#include "hessfree/error.hpp"
#include "hessfree/estimate.hpp"
#include "hessfree/oracles.hpp"
#include "hessfree/random.hpp"

struct hf_oracle {
  hessfree::Oracle oracle;
  hessfree::VectorOracle map;
};

struct hf_report {
  std::string json;
  std::string csv;
  int exit_code = 0;
};

namespace {

thread_local std::string last_error;

hf_status to_status(hessfree::ErrorCode code) {
  using hessfree::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument:
      return HF_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch:
      return HF_ERR_DIMENSION_MISMATCH;
    case ErrorCode::NonFinite:
      return HF_ERR_NON_FINITE;
    case ErrorCode::UnknownOracle:
      return HF_ERR_UNKNOWN_ORACLE;
    case ErrorCode::BadParams:
      return HF_ERR_BAD_PARAMS;
    case ErrorCode::NoInformativeProbe:
      return HF_ERR_NO_INFORMATIVE_PROBE;
    case ErrorCode::DegenerateDomain:
      return HF_ERR_DEGENERATE_DOMAIN;
    case ErrorCode::Config:
      return HF_ERR_CONFIG;
  }
  return HF_ERR_INTERNAL;
}

template <class Fn>
hf_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return HF_OK;
  } catch (const hessfree::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = std::string("invalid JSON: ") + e.what();
    return HF_ERR_CONFIG;
  } catch (const std::exception& e) {
    last_error = e.what();
    return HF_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return HF_ERR_INTERNAL;
  }
}

hf_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return HF_ERR_INVALID_ARGUMENT;
}

hessfree::SearchBudget to_budget(const hf_budget* b) {
  hessfree::SearchBudget out;
  out.random_configs = b->random_configs;
  out.ascent_steps = b->ascent_steps;
  out.two_point_pairs = b->two_point_pairs;
  out.seed = b->seed;
  out.max_n = b->max_n;
  out.domain_radius = b->domain_radius;
  return out;
}

}  // namespace

extern "C" {

const char* hf_version(void) { return hessfree::library_version(); }

const char* hf_rng_algorithm(void) { return hessfree::kRngAlgorithm.data(); }

const char* hf_last_error(void) { return last_error.c_str(); }

const char* hf_status_string(hf_status status) {
  switch (status) {
    case HF_OK:
      return "ok";
    case HF_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case HF_ERR_DIMENSION_MISMATCH:
      return "dimension mismatch";
    case HF_ERR_NON_FINITE:
      return "non-finite value";
    case HF_ERR_UNKNOWN_ORACLE:
      return "unknown oracle";
    case HF_ERR_BAD_PARAMS:
      return "bad oracle parameters";
    case HF_ERR_NO_INFORMATIVE_PROBE:
      return "no informative probe";
    case HF_ERR_DEGENERATE_DOMAIN:
      return "degenerate domain";
    case HF_ERR_CONFIG:
      return "configuration error";
    case HF_ERR_NOT_AVAILABLE:
      return "not available";
    case HF_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

void hf_budget_default(hf_budget* budget) {
  if (!budget) return;
  const hessfree::SearchBudget d;
  budget->random_configs = d.random_configs;
  budget->ascent_steps = d.ascent_steps;
  budget->two_point_pairs = d.two_point_pairs;
  budget->seed = d.seed;
  budget->max_n = d.max_n;
  budget->domain_radius = d.domain_radius;
  budget->workers = 0;
}

hf_status hf_oracle_create(const char* name, const double* params, size_t n_params,
                           hf_oracle** out) {
  if (!name) return null_argument("name");
  if (!out) return null_argument("out");
  if (n_params > 0 && !params) return null_argument("params");
  *out = nullptr;
  return guarded([&] {
    hessfree::Oracle o = hessfree::builtin(name, std::span<const double>(params, n_params));
    hessfree::VectorOracle map = hessfree::probe_map(o);
    *out = new hf_oracle{std::move(o), std::move(map)};
  });
}

void hf_oracle_destroy(hf_oracle* oracle) { delete oracle; }

const char* hf_oracle_label(const hf_oracle* oracle) {
  return oracle ? hessfree::oracle_label(oracle->oracle).c_str() : "";
}

size_t hf_oracle_dim_in(const hf_oracle* oracle) { return oracle ? oracle->map.dim_in : 0; }

size_t hf_oracle_dim_out(const hf_oracle* oracle) { return oracle ? oracle->map.dim_out : 0; }

int hf_oracle_is_scalar(const hf_oracle* oracle) {
  return oracle && std::holds_alternative<hessfree::ScalarOracle>(oracle->oracle) ? 1 : 0;
}

hf_status hf_oracle_known_L(const hf_oracle* oracle, double* out) {
  if (!oracle) return null_argument("oracle");
  if (!out) return null_argument("out");
  const auto L = hessfree::oracle_known_L(oracle->oracle);
  if (!L) {
    last_error = "oracle has no analytically known constant";
    return HF_ERR_NOT_AVAILABLE;
  }
  *out = *L;
  return HF_OK;
}

hf_status hf_oracle_eval(const hf_oracle* oracle, const double* x, double* out) {
  if (!oracle) return null_argument("oracle");
  if (!x) return null_argument("x");
  if (!out) return null_argument("out");
  return guarded([&] {
    const hessfree::Point p(std::vector<double>(x, x + oracle->map.dim_in));
    const hessfree::Point y = oracle->map(p);
    for (size_t k = 0; k < y.dim(); ++k) out[k] = y[k];
  });
}

hf_status hf_jensen_probe(const hf_oracle* oracle, const double* points, size_t n,
                          const double* weights, double* gap, double* spread, double* ratio) {
  if (!oracle) return null_argument("oracle");
  if (!points || !weights) return null_argument("points/weights");
  if (!gap || !spread || !ratio) return null_argument("outputs");
  return guarded([&] {
    const size_t d = oracle->map.dim_in;
    std::vector<hessfree::Point> pts;
    pts.reserve(n);
    for (size_t i = 0; i < n; ++i) pts.emplace_back(std::vector<double>(points + i * d, points + (i + 1) * d));
    hessfree::Configuration c(std::move(pts), hessfree::SimplexWeights(std::vector<double>(weights, weights + n)));
    const hessfree::ProbeResult r = hessfree::jensen_probe(oracle->map, c);
    *gap = r.gap;
    *spread = r.spread;
    *ratio = r.ratio ? *r.ratio : std::numeric_limits<double>::quiet_NaN();
  });
}

hf_status hf_estimate(const hf_oracle* oracle, const hf_budget* budget, double* L_lower,
                      size_t* probes_used) {
  if (!oracle) return null_argument("oracle");
  if (!budget) return null_argument("budget");
  if (!L_lower) return null_argument("L_lower");
  return guarded([&] {
    hessfree::SearchOptions opts;
    opts.workers = budget->workers;
    const auto cert = hessfree::estimate_L(oracle->map, to_budget(budget), opts);
    *L_lower = cert.L_lower;
    if (probes_used) *probes_used = cert.probes_used;
  });
}

hf_status hf_falsify(const hf_oracle* oracle, double claimed_L, const hf_budget* budget,
                     int* found, double* margin, size_t* probes_used) {
  if (!oracle) return null_argument("oracle");
  if (!budget) return null_argument("budget");
  if (!found) return null_argument("found");
  return guarded([&] {
    hessfree::SearchOptions opts;
    opts.workers = budget->workers;
    const auto out = hessfree::falsify(oracle->map, claimed_L, to_budget(budget), opts);
    *found = out.certificate ? 1 : 0;
    if (margin) *margin = out.certificate ? out.certificate->margin : 0.0;
    if (probes_used) *probes_used = out.probes_used;
  });
}

hf_status hf_run(const char* command, const char* config_json, hf_report** out) {
  if (!command) return null_argument("command");
  if (!config_json) return null_argument("config_json");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    const nlohmann::json cfg = nlohmann::json::parse(config_json);
    hessfree::Report r = hessfree::run_command(command, cfg);
    *out = new hf_report{r.body.dump(2), std::move(r.csv), r.exit_code};
  });
}

void hf_report_destroy(hf_report* report) { delete report; }

const char* hf_report_json(const hf_report* report) { return report ? report->json.c_str() : ""; }

const char* hf_report_csv(const hf_report* report) { return report ? report->csv.c_str() : ""; }

int hf_report_exit_code(const hf_report* report) { return report ? report->exit_code : 2; }

}  // extern "C"
