/*
 * C interface to the hessfree library.
 *
 * All functions return an hf_status. On failure, hf_last_error() returns a
 * message describing the most recent error on the calling thread. Handles
 * are opaque and owned by the caller; release them with the matching
 * *_destroy function. Strings returned by the library stay valid until the
 * owning handle is destroyed.
 */
#ifndef HESSFREE_H
#define HESSFREE_H

#include <stddef.h>
#include <stdint.h>

#if defined(HF_BUILDING_LIBRARY)
#define HF_API __attribute__((visibility("default")))
#else
#define HF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hf_status {
  HF_OK = 0,
  HF_ERR_INVALID_ARGUMENT = 1,
  HF_ERR_DIMENSION_MISMATCH = 2,
  HF_ERR_NON_FINITE = 3,
  HF_ERR_UNKNOWN_ORACLE = 4,
  HF_ERR_BAD_PARAMS = 5,
  HF_ERR_NO_INFORMATIVE_PROBE = 6,
  HF_ERR_DEGENERATE_DOMAIN = 7,
  HF_ERR_CONFIG = 8,
  HF_ERR_NOT_AVAILABLE = 9,
  HF_ERR_INTERNAL = 99
} hf_status;

typedef struct hf_oracle hf_oracle;
typedef struct hf_report hf_report;

typedef struct hf_budget {
  size_t random_configs;
  size_t ascent_steps;
  size_t two_point_pairs;
  uint64_t seed;
  size_t max_n;
  double domain_radius;
  size_t workers; /* 0: HESSFREE_THREADS or hardware concurrency */
} hf_budget;

HF_API const char* hf_version(void);
HF_API const char* hf_rng_algorithm(void);
HF_API const char* hf_last_error(void);
HF_API const char* hf_status_string(hf_status status);

/* Library defaults: 1024 pairs, 4096 configurations, 512 ascent steps,
 * max_n 4, radius 5, seed 42. */
HF_API void hf_budget_default(hf_budget* budget);

/* Builtin oracle by name; params may be NULL when n_params is 0. */
HF_API hf_status hf_oracle_create(const char* name, const double* params, size_t n_params,
                                  hf_oracle** out);
HF_API void hf_oracle_destroy(hf_oracle* oracle);
HF_API const char* hf_oracle_label(const hf_oracle* oracle);
/* Dimensions of the probed map: F itself, or grad f for scalar oracles. */
HF_API size_t hf_oracle_dim_in(const hf_oracle* oracle);
HF_API size_t hf_oracle_dim_out(const hf_oracle* oracle);
HF_API int hf_oracle_is_scalar(const hf_oracle* oracle);
/* HF_ERR_NOT_AVAILABLE when the constant is not known analytically. */
HF_API hf_status hf_oracle_known_L(const hf_oracle* oracle, double* out);
/* out must hold dim_out values. */
HF_API hf_status hf_oracle_eval(const hf_oracle* oracle, const double* x, double* out);

/* Jensen-gap probe of n points (row-major n x dim_in) with simplex weights.
 * *ratio is NaN when the spread is below the floor. */
HF_API hf_status hf_jensen_probe(const hf_oracle* oracle, const double* points, size_t n,
                                 const double* weights, double* gap, double* spread,
                                 double* ratio);

HF_API hf_status hf_estimate(const hf_oracle* oracle, const hf_budget* budget, double* L_lower,
                             size_t* probes_used);
/* *found is 1 and *margin set when a violation certificate exists. */
HF_API hf_status hf_falsify(const hf_oracle* oracle, double claimed_L, const hf_budget* budget,
                            int* found, double* margin, size_t* probes_used);

/* Runs "estimate", "falsify", "verify" or "slices" from a JSON config object. */
HF_API hf_status hf_run(const char* command, const char* config_json, hf_report** out);
HF_API void hf_report_destroy(hf_report* report);
HF_API const char* hf_report_json(const hf_report* report);
HF_API const char* hf_report_csv(const hf_report* report);
/* 0: passed / nothing falsified, 1: violation or failed check. */
HF_API int hf_report_exit_code(const hf_report* report);

#ifdef __cplusplus
}
#endif

#endif /* HESSFREE_H */
