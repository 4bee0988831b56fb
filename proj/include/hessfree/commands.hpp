#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hessfree/estimate.hpp"

namespace hessfree {

enum class Command { Estimate, Falsify, Verify, Slices };

Command parse_command(std::string_view name);
const char* to_string(Command command);

/// Everything a run depends on. Parsed from a single JSON object; unknown
/// keys, and keys that do not apply to the command, are rejected.
struct RunConfig {
  Command command = Command::Estimate;
  std::string oracle;
  std::vector<double> params;
  std::uint64_t seed = 42;
  bool ci = false;  // requires an explicit seed
  std::optional<double> claimed_L;  // falsify
  std::optional<double> L;          // verify, slices
  SearchBudget budget;
  std::size_t fd_budget = 4096;
  std::size_t pair_budget = 1000;
  std::size_t n_functionals = 16;
  std::optional<std::size_t> threads;
  std::optional<std::string> out;
  std::optional<std::string> csv;

  static RunConfig from_json(Command command, const nlohmann::json& j);
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Keys accepted for a command.
const std::vector<std::string>& config_keys(Command command);

struct Report {
  nlohmann::json body;
  std::string csv;  // probe_index,n,gap,spread,ratio,kind
  int exit_code = 0;  // 0 pass / nothing falsified, 1 violation or failed check
};

inline constexpr int kHistogramBins = 32;

Report run_command(const RunConfig& config);

/// Convenience: parse, then run.
Report run_command(std::string_view command, const nlohmann::json& config);

nlohmann::json probe_stats(const SearchTrace& trace);
std::string probes_csv(const SearchTrace& trace);

nlohmann::json to_json(const Point& p);
nlohmann::json to_json(const ProbeResult& r);
nlohmann::json to_json(const LowerBoundCertificate& c);
nlohmann::json to_json(const ViolationCertificate& c);

const char* library_version();

}  // namespace hessfree
