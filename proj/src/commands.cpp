#include "hessfree/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>

#include "hessfree/baillon_haddad.hpp"
#include "hessfree/error.hpp"
#include "hessfree/parallel.hpp"
#include "hessfree/slices.hpp"

namespace hessfree {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::Config, msg); }

std::size_t get_count(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    config_error(std::string("'") + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

double get_real(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number()) config_error(std::string("'") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) config_error(std::string("'") + key + "' must be finite");
  return d;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json pair_json(const std::optional<std::pair<Point, Point>>& p) {
  if (!p) return nullptr;
  return json{{"x", to_json(p->first)}, {"y", to_json(p->second)}};
}

DomainSampler check_domain(const RunConfig& c) {
  DomainSampler s;
  s.shape = DomainSampler::Shape::Box;
  s.radius = c.budget.domain_radius;
  s.min_separation = 1e-2 * c.budget.domain_radius;
  s.seed = c.seed;
  return s;
}

json domain_json(const DomainSampler& s) {
  return {{"shape", s.shape == DomainSampler::Shape::Box ? "box" : "ball"},
          {"radius", s.radius},
          {"min_separation", s.min_separation}};
}

json oracle_json(const Oracle& o, const VectorOracle& F) {
  const bool scalar = std::holds_alternative<ScalarOracle>(o);
  return {{"label", oracle_label(o)},
          {"kind", scalar ? "scalar" : "vector"},
          {"dim_in", F.dim_in},
          {"dim_out", F.dim_out},
          {"known_L", optional_number(oracle_known_L(o))},
          {"probe_map", F.label}};
}

json run_estimate(const RunConfig& c, const Oracle& o, const VectorOracle& F,
                  const SearchOptions& opts, SearchTrace& trace, int& exit_code) {
  const LowerBoundCertificate cert = estimate_L(F, c.budget, opts, &trace);
  const CrossValidation cv = cross_validate(o, c.budget, c.fd_budget, opts);
  exit_code = 0;
  return {{"certificate", to_json(cert)},
          {"cross_validation",
           {{"L_probe", cv.L_probe},
            {"L_fd", cv.L_fd},
            {"consistent", cv.consistent},
            {"rel_tol", kCrossValidationTol},
            {"abs_tol", kCrossValidationAbsTol},
            {"fd_pairs", cv.fd_estimate.pairs},
            {"fd_domain", domain_json(cv.fd_domain)},
            {"fd_witness", cv.fd_estimate.x ? json{{"x", to_json(*cv.fd_estimate.x)},
                                                   {"y", to_json(*cv.fd_estimate.y)}}
                                            : json(nullptr)},
            {"fd_approximate", cv.fd_estimate.approximate}}},
          {"probe_domain", {{"shape", "ball"}, {"radius", c.budget.domain_radius}}}};
}

json run_falsify(const RunConfig& c, const VectorOracle& F, const SearchOptions& opts,
                 SearchTrace& trace, int& exit_code) {
  const FalsifyOutcome out = falsify(F, *c.claimed_L, c.budget, opts, &trace);
  exit_code = out.certificate ? 1 : 0;
  return {{"claimed_L", *c.claimed_L},
          {"violation_found", out.certificate.has_value()},
          {"certificate", out.certificate ? to_json(*out.certificate) : json(nullptr)},
          {"probes_used", out.probes_used},
          {"probe_domain", {{"shape", "ball"}, {"radius", c.budget.domain_radius}}}};
}

json run_verify(const RunConfig& c, const VectorOracle& F, const SearchOptions& opts,
                SearchTrace& trace, int& exit_code) {
  const double L = *c.L;
  const double Lf = std::max(L, kLipschitzFloor);
  const DomainSampler domain = check_domain(c);

  const FalsifyOutcome soundness = falsify(F, L, c.budget, opts, &trace);

  const std::vector<Functional> functionals =
      sample_unit_functionals(F.dim_out, c.n_functionals, c.seed);
  bool split_ok = true;
  bool coco_ok = true;
  json split_worst = nullptr;
  json coco_worst = nullptr;
  double worst_violation = -INFINITY;
  double worst_residual = INFINITY;
  for (std::size_t f = 0; f < functionals.size(); ++f) {
    const Functional& ystar = functionals[f];
    const ConvexitySplitReport split =
        convexity_split_check(slice(F, ystar), F.dim_in, Lf, domain, c.pair_budget, opts.workers);
    split_ok = split_ok && split.passed;
    const bool plus_worse = split.plus.max_violation >= split.minus.max_violation;
    const ConvexityWitness& w = plus_worse ? split.plus : split.minus;
    if (w.max_violation > worst_violation) {
      worst_violation = w.max_violation;
      split_worst = {{"functional_index", f},
                     {"functional", to_json(ystar.coeffs())},
                     {"branch", plus_worse ? "plus" : "minus"},
                     {"max_violation", w.max_violation},
                     {"tolerance", split.tolerance},
                     {"pair", pair_json(w.pair)}};
    }

    const VectorMap grad_phi = slice_gradient(F, ystar);
    const VectorMap G = [grad_phi, Lf](const Point& x) { return Lf * x + grad_phi(x); };
    const CocoercivityReport coco =
        check_cocoercive(G, F.dim_in, 2.0 * Lf, domain, c.pair_budget, opts.workers);
    coco_ok = coco_ok && coco.passed;
    if (coco.min_residual < worst_residual) {
      worst_residual = coco.min_residual;
      coco_worst = {{"functional_index", f},
                    {"functional", to_json(ystar.coeffs())},
                    {"min_residual", coco.min_residual},
                    {"tolerance", coco.tolerance},
                    {"pairs_tested", coco.pairs_tested},
                    {"pair", pair_json(coco.witness_pair)}};
    }
  }

  const SliceSmoothnessReport smooth =
      slice_smoothness_check(F, L, c.n_functionals, domain, c.pair_budget, opts.workers);

  const bool all = !soundness.certificate && split_ok && coco_ok && smooth.passed;
  exit_code = all ? 0 : 1;
  return {
      {"L", L},
      {"L_floored", Lf},
      {"all_passed", all},
      {"check_domain", domain_json(domain)},
      {"functionals_tested", functionals.size()},
      {"probe_soundness",
       {{"passed", !soundness.certificate},
        {"probes_used", soundness.probes_used},
        {"certificate", soundness.certificate ? to_json(*soundness.certificate) : json(nullptr)}}},
      {"convexity_split", {{"passed", split_ok}, {"pairs_per_functional", c.pair_budget}, {"worst", split_worst}}},
      {"cocoercivity", {{"passed", coco_ok}, {"beta", 2.0 * Lf}, {"worst", coco_worst}}},
      {"slice_smoothness",
       {{"passed", smooth.passed},
        {"functionals_tested", smooth.functionals_tested},
        {"pairs_tested", smooth.pairs_tested},
        {"max_ratio", smooth.max_ratio},
        {"worst_excess", smooth.worst_excess},
        {"witness_functional",
         smooth.witness_functional ? to_json(*smooth.witness_functional) : json(nullptr)},
        {"witness_pair", pair_json(smooth.witness_pair)}}}};
}

json run_slices(const RunConfig& c, const VectorOracle& F, const SearchOptions& opts,
                int& exit_code) {
  const double L = *c.L;
  const DomainSampler domain = check_domain(c);
  const ReconstructionReport rec =
      reconstruction_check(F, domain, c.pair_budget, c.n_functionals, opts.workers);
  const LipschitzTransferReport transfer =
      lipschitz_transfer_check(F, L, domain, c.pair_budget, c.n_functionals, opts.workers);
  const bool all = rec.passed && transfer.passed;
  exit_code = all ? 0 : 1;
  return {{"L", L},
          {"all_passed", all},
          {"check_domain", domain_json(domain)},
          {"reconstruction",
           {{"passed", rec.passed},
            {"points_tested", rec.points_tested},
            {"max_jvp_rel_error", rec.max_jvp_rel_error},
            {"jvp_rel_tol", kReconstructionRelTol},
            {"max_linearity_rel_error", rec.max_linearity_rel_error},
            {"linearity_rel_tol", kLinearityRelTol},
            {"max_bound_excess", rec.max_bound_excess}}},
          {"lipschitz_transfer",
           {{"passed", transfer.passed},
            {"L_floored", transfer.L},
            {"pairs_tested", transfer.pairs_tested},
            {"max_ratio", transfer.max_ratio},
            {"rel_tol", kTransferRelTol},
            {"min_hahn_banach_fraction", transfer.min_hahn_banach_fraction},
            {"witness_pair", pair_json(transfer.witness_pair)}}}};
}

}  // namespace

const char* library_version() { return HESSFREE_VERSION; }

Command parse_command(std::string_view name) {
  if (name == "estimate") return Command::Estimate;
  if (name == "falsify") return Command::Falsify;
  if (name == "verify") return Command::Verify;
  if (name == "slices") return Command::Slices;
  config_error("unknown command '" + std::string(name) + "'");
}

const char* to_string(Command command) {
  switch (command) {
    case Command::Estimate:
      return "estimate";
    case Command::Falsify:
      return "falsify";
    case Command::Verify:
      return "verify";
    case Command::Slices:
      return "slices";
  }
  return "unknown";
}

const std::vector<std::string>& config_keys(Command command) {
  static const std::vector<std::string> search{
      "oracle",        "params",  "seed", "ci",  "budget_configs", "budget_pairs", "ascent_steps",
      "max_n",         "domain_radius",   "threads", "out", "csv"};
  static const std::vector<std::string> estimate = [] {
    auto v = search;
    v.push_back("fd_budget");
    return v;
  }();
  static const std::vector<std::string> falsify_keys = [] {
    auto v = search;
    v.push_back("claimed_L");
    return v;
  }();
  static const std::vector<std::string> verify = [] {
    auto v = search;
    v.insert(v.end(), {"L", "pair_budget", "n_functionals"});
    return v;
  }();
  static const std::vector<std::string> slices_keys{
      "oracle", "params", "seed", "ci", "domain_radius", "threads", "out", "csv",
      "L",      "pair_budget", "n_functionals"};
  switch (command) {
    case Command::Estimate:
      return estimate;
    case Command::Falsify:
      return falsify_keys;
    case Command::Verify:
      return verify;
    case Command::Slices:
      return slices_keys;
  }
  return search;
}

RunConfig RunConfig::from_json(Command command, const json& j) {
  if (!j.is_object()) config_error("configuration must be a single JSON object");
  const auto& allowed = config_keys(command);
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      config_error("unknown configuration key '" + key + "' for command '" + to_string(command) + "'");
    }
  }

  RunConfig c;
  c.command = command;
  if (!j.contains("oracle") || !j["oracle"].is_string()) config_error("'oracle' (string) is required");
  c.oracle = j["oracle"].get<std::string>();
  if (j.contains("params")) {
    if (!j["params"].is_array()) config_error("'params' must be an array of numbers");
    for (const json& v : j["params"]) {
      if (!v.is_number()) config_error("'params' must be an array of numbers");
      c.params.push_back(v.get<double>());
    }
  }
  if (j.contains("ci")) {
    if (!j["ci"].is_boolean()) config_error("'ci' must be a boolean");
    c.ci = j["ci"].get<bool>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0)) {
      config_error("'seed' must be a non-negative integer");
    }
    c.seed = j["seed"].get<std::uint64_t>();
  } else if (c.ci) {
    config_error("'seed' is mandatory in CI mode");
  }
  c.budget.seed = c.seed;
  if (j.contains("budget_configs")) c.budget.random_configs = get_count(j, "budget_configs");
  if (j.contains("budget_pairs")) c.budget.two_point_pairs = get_count(j, "budget_pairs");
  if (j.contains("ascent_steps")) c.budget.ascent_steps = get_count(j, "ascent_steps");
  if (j.contains("max_n")) c.budget.max_n = get_count(j, "max_n");
  if (j.contains("domain_radius")) c.budget.domain_radius = get_real(j, "domain_radius");
  if (j.contains("fd_budget")) c.fd_budget = get_count(j, "fd_budget");
  if (j.contains("pair_budget")) c.pair_budget = get_count(j, "pair_budget");
  if (j.contains("n_functionals")) c.n_functionals = get_count(j, "n_functionals");
  if (j.contains("claimed_L")) c.claimed_L = get_real(j, "claimed_L");
  if (j.contains("L")) c.L = get_real(j, "L");
  if (j.contains("threads")) {
    c.threads = get_count(j, "threads");
    if (*c.threads == 0) config_error("'threads' must be positive");
  }
  if (j.contains("out")) {
    if (!j["out"].is_string()) config_error("'out' must be a string");
    c.out = j["out"].get<std::string>();
  }
  if (j.contains("csv")) {
    if (!j["csv"].is_string()) config_error("'csv' must be a string");
    c.csv = j["csv"].get<std::string>();
  }

  if (command == Command::Falsify && !c.claimed_L) config_error("falsify requires 'claimed_L'");
  if ((command == Command::Verify || command == Command::Slices) && !c.L) {
    config_error(std::string(to_string(command)) + " requires 'L'");
  }
  if (c.claimed_L && *c.claimed_L < 0.0) config_error("'claimed_L' must be >= 0");
  if (c.L && *c.L < 0.0) config_error("'L' must be >= 0");
  if (!(c.budget.domain_radius > 0.0)) config_error("'domain_radius' must be positive");
  if (command != Command::Slices) {
    try {
      c.budget.validate();
    } catch (const Error& e) {
      config_error(e.what());
    }
  }
  if (command == Command::Estimate && c.fd_budget == 0) config_error("'fd_budget' must be positive");
  if ((command == Command::Verify || command == Command::Slices) && c.pair_budget == 0) {
    config_error("'pair_budget' must be positive");
  }

  (void)builtin(c.oracle, c.params);  // unknown name / bad params surface here
  return c;
}

json RunConfig::to_json() const {
  json j{{"oracle", oracle}, {"params", params}, {"seed", seed}, {"domain_radius", budget.domain_radius}};
  if (command != Command::Slices) {
    j["budget_configs"] = budget.random_configs;
    j["budget_pairs"] = budget.two_point_pairs;
    j["ascent_steps"] = budget.ascent_steps;
    j["max_n"] = budget.max_n;
  }
  if (command == Command::Estimate) j["fd_budget"] = fd_budget;
  if (command == Command::Falsify) j["claimed_L"] = *claimed_L;
  if (command == Command::Verify || command == Command::Slices) {
    j["L"] = *L;
    j["pair_budget"] = pair_budget;
    j["n_functionals"] = n_functionals;
  }
  if (ci) j["ci"] = true;
  if (out) j["out"] = *out;
  if (csv) j["csv"] = *csv;
  return j;
}

json to_json(const Point& p) { return p.vector(); }

json to_json(const ProbeResult& r) {
  json points = json::array();
  for (const Point& p : r.config.points()) points.push_back(to_json(p));
  return {{"n", r.config.size()},
          {"points", std::move(points)},
          {"weights", std::vector<double>(r.config.weights().values().begin(),
                                          r.config.weights().values().end())},
          {"gap", r.gap},
          {"spread", r.spread},
          {"ratio", optional_number(r.ratio)},
          {"output_scale", r.output_scale},
          {"oracle_label", r.oracle_label}};
}

json to_json(const LowerBoundCertificate& c) {
  return {{"L_lower", c.L_lower},
          {"witness", to_json(c.witness)},
          {"witness_index", c.witness_index},
          {"probes_used", c.probes_used},
          {"oracle_label", c.oracle_label},
          {"budget",
           {{"random_configs", c.budget.random_configs},
            {"two_point_pairs", c.budget.two_point_pairs},
            {"ascent_steps", c.budget.ascent_steps},
            {"max_n", c.budget.max_n},
            {"domain_radius", c.budget.domain_radius},
            {"seed", c.budget.seed}}},
          {"rng_algorithm", c.rng_algorithm}};
}

json to_json(const ViolationCertificate& c) {
  return {{"claimed_L", c.claimed_L},
          {"witness", to_json(c.witness)},
          {"witness_index", c.witness_index},
          {"margin", c.margin},
          {"tolerance", c.tolerance},
          {"rng_algorithm", std::string(kRngAlgorithm)}};
}

json probe_stats(const SearchTrace& trace) {
  double max_ratio = 0.0;
  std::size_t informative = 0;
  for (const ProbeRecord& r : trace.records) {
    if (r.ratio) {
      ++informative;
      max_ratio = std::max(max_ratio, *r.ratio);
    }
  }
  std::vector<std::size_t> counts(kHistogramBins, 0);
  for (const ProbeRecord& r : trace.records) {
    if (!r.ratio) continue;
    std::size_t bin = 0;
    if (max_ratio > 0.0) {
      bin = static_cast<std::size_t>(*r.ratio / max_ratio * kHistogramBins);
      bin = std::min<std::size_t>(bin, kHistogramBins - 1);
    }
    ++counts[bin];
  }
  return {{"count", trace.records.size()},
          {"informative", informative},
          {"max_ratio", informative ? json(max_ratio) : json(nullptr)},
          {"histogram", {{"bins", kHistogramBins}, {"lo", 0.0}, {"hi", max_ratio}, {"counts", counts}}}};
}

std::string probes_csv(const SearchTrace& trace) {
  std::string out = "probe_index,n,gap,spread,ratio,kind\n";
  char buf[160];
  for (const ProbeRecord& r : trace.records) {
    char ratio[40] = "";
    if (r.ratio) std::snprintf(ratio, sizeof ratio, "%.17g", *r.ratio);
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g,%s,%s\n", r.index, r.n, r.gap, r.spread,
                  ratio, to_string(r.kind));
    out += buf;
  }
  return out;
}

Report run_command(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const Oracle oracle = builtin(config.oracle, config.params);
  const VectorOracle F = probe_map(oracle);
  SearchOptions opts;
  opts.workers = config.threads.value_or(0);

  Report report;
  SearchTrace trace;
  json results;
  switch (config.command) {
    case Command::Estimate:
      results = run_estimate(config, oracle, F, opts, trace, report.exit_code);
      break;
    case Command::Falsify:
      results = run_falsify(config, F, opts, trace, report.exit_code);
      break;
    case Command::Verify:
      results = run_verify(config, F, opts, trace, report.exit_code);
      break;
    case Command::Slices:
      results = run_slices(config, F, opts, report.exit_code);
      break;
  }

  json notes = json::array();
  notes.push_back("sampling can refute an inequality but never certify it; passing checks are evidence, not proof");
  if (config.command != Command::Slices) {
    notes.push_back("search budget defaults are engineering choices; the rate at which the probe-ratio supremum is approached is not known a priori");
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  report.body = {{"tool", "hessfree"},
                 {"version", library_version()},
                 {"command", to_string(config.command)},
                 {"config", config.to_json()},
                 {"rng", {{"algorithm", std::string(kRngAlgorithm)}, {"seed", config.seed}}},
                 {"oracle", oracle_json(oracle, F)},
                 {"results", std::move(results)},
                 {"verdict", report.exit_code == 0 ? "pass" : "violation"},
                 {"exit_code", report.exit_code},
                 {"notes", std::move(notes)},
                 {"probe_stats", probe_stats(trace)},
                 {"wall_time_s", wall}};
  report.csv = probes_csv(trace);
  return report;
}

Report run_command(std::string_view command, const json& config) {
  const Command cmd = parse_command(command);
  return run_command(RunConfig::from_json(cmd, config));
}

}  // namespace hessfree
