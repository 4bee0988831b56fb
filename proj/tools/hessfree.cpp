// hessfree command-line tool. Builds a JSON run configuration from an
// optional --config file plus flags (flags win) and hands it to the shared
// library through the C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hessfree/hessfree.h"

namespace {

constexpr int kExitError = 2;

struct Flags {
  std::string config_path;
  std::string oracle;
  std::vector<double> params;
  std::optional<std::uint64_t> seed;
  bool ci = false;
  std::optional<double> claimed_L;
  std::optional<double> L;
  std::optional<std::size_t> budget_configs;
  std::optional<std::size_t> budget_pairs;
  std::optional<std::size_t> ascent_steps;
  std::optional<std::size_t> max_n;
  std::optional<double> domain_radius;
  std::optional<std::size_t> fd_budget;
  std::optional<std::size_t> pair_budget;
  std::optional<std::size_t> n_functionals;
  std::optional<std::size_t> threads;
  std::string out;
  std::string csv;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "JSON configuration file");
  cmd->add_option("--oracle", f.oracle, "builtin oracle name");
  cmd->add_option("--params", f.params, "oracle parameters")->delimiter(',');
  cmd->add_option("--seed", f.seed, "RNG seed (mandatory with --ci)");
  cmd->add_flag("--ci", f.ci, "CI mode: require an explicit seed");
  cmd->add_option("--domain-radius", f.domain_radius, "sampling radius");
  cmd->add_option("--threads", f.threads, "worker count (overrides HESSFREE_THREADS)");
  cmd->add_option("--out", f.out, "report path (default: stdout)");
  cmd->add_option("--csv", f.csv, "per-probe CSV path");
}

void add_search(CLI::App* cmd, Flags& f) {
  cmd->add_option("--budget-configs", f.budget_configs, "random configurations");
  cmd->add_option("--budget-pairs", f.budget_pairs, "best-t two-point pairs");
  cmd->add_option("--ascent-steps", f.ascent_steps, "coordinate-ascent steps");
  cmd->add_option("--max-n", f.max_n, "max points per random configuration");
}

void add_checks(CLI::App* cmd, Flags& f) {
  cmd->add_option("--L", f.L, "Lipschitz constant to check");
  cmd->add_option("--pair-budget", f.pair_budget, "sampled pairs per check");
  cmd->add_option("--n-functionals", f.n_functionals, "random unit functionals");
}

template <class T>
void put(nlohmann::json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) return false;
  os << text;
  return static_cast<bool>(os);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hessian-free Lipschitz estimation and verification"};
  app.set_version_flag("--version", std::string(hf_version()));
  app.require_subcommand(1);

  Flags f;
  CLI::App* estimate = app.add_subcommand("estimate", "lower-bound the Lipschitz constant of F'");
  add_common(estimate, f);
  add_search(estimate, f);
  estimate->add_option("--fd-budget", f.fd_budget, "finite-difference cross-validation pairs");

  CLI::App* falsify = app.add_subcommand("falsify", "search for a violation of a claimed constant");
  add_common(falsify, f);
  add_search(falsify, f);
  falsify->add_option("--claimed-L", f.claimed_L, "claimed Lipschitz constant");

  CLI::App* verify = app.add_subcommand("verify", "probe soundness, convexity split, cocoercivity, slices");
  add_common(verify, f);
  add_search(verify, f);
  add_checks(verify, f);

  CLI::App* slices = app.add_subcommand("slices", "slice reconstruction and Lipschitz transfer");
  add_common(slices, f);
  add_checks(slices, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  const CLI::App* cmd = app.get_subcommands().front();
  nlohmann::json config = nlohmann::json::object();
  if (!f.config_path.empty()) {
    std::ifstream is(f.config_path);
    if (!is) {
      std::cerr << "hessfree: cannot read config '" << f.config_path << "'\n";
      return kExitError;
    }
    try {
      config = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "hessfree: invalid config JSON: " << e.what() << "\n";
      return kExitError;
    }
    if (!config.is_object()) {
      std::cerr << "hessfree: config must be a single JSON object\n";
      return kExitError;
    }
  }
  if (!f.oracle.empty()) config["oracle"] = f.oracle;
  if (!f.params.empty()) config["params"] = f.params;
  if (f.ci) config["ci"] = true;
  put(config, "seed", f.seed);
  put(config, "claimed_L", f.claimed_L);
  put(config, "L", f.L);
  put(config, "budget_configs", f.budget_configs);
  put(config, "budget_pairs", f.budget_pairs);
  put(config, "ascent_steps", f.ascent_steps);
  put(config, "max_n", f.max_n);
  put(config, "domain_radius", f.domain_radius);
  put(config, "fd_budget", f.fd_budget);
  put(config, "pair_budget", f.pair_budget);
  put(config, "n_functionals", f.n_functionals);
  put(config, "threads", f.threads);
  if (!f.out.empty()) config["out"] = f.out;
  if (!f.csv.empty()) config["csv"] = f.csv;

  hf_report* report = nullptr;
  const hf_status st = hf_run(cmd->get_name().c_str(), config.dump().c_str(), &report);
  if (st != HF_OK) {
    std::cerr << "hessfree: " << hf_status_string(st) << ": " << hf_last_error() << "\n";
    return kExitError;
  }

  int exit_code = hf_report_exit_code(report);
  const std::string json_text = std::string(hf_report_json(report)) + "\n";
  if (f.out.empty()) {
    std::cout << json_text;
  } else if (!write_file(f.out, json_text)) {
    std::cerr << "hessfree: cannot write report '" << f.out << "'\n";
    exit_code = kExitError;
  }
  if (!f.csv.empty() && !write_file(f.csv, hf_report_csv(report))) {
    std::cerr << "hessfree: cannot write CSV '" << f.csv << "'\n";
    exit_code = kExitError;
  }
  hf_report_destroy(report);
  return exit_code;
}
