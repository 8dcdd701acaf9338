#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace magtb {

struct RunConfig {
  std::string command;
  std::string lattice = "square";  // square | honeycomb
  double a = 1.0;
  int nx = 10;
  int ny = 10;
  double lambda = 8.0;
  std::vector<double> lambdas{6.0, 8.0, 10.0, 12.0, 14.0};
  std::string flux;  // "p/q"; empty means use beta
  double beta = 0.0;
  double vmin = -4.0;
  double r0 = 1.0;
  std::string profile = "quartic";
  int size = 40;
  int gap = 1;  // 1-based Harper gap
  std::uint64_t seed = 0;
  std::string out = "out";
  int qmax = 20;
  double disorder_c = 0.0;
  double displace_lambda = 0.0;  // 0 disables random displacement
  int edge_nx = 60;
  int edge_ny = 30;
  int wells = 2;  // reduce: 1, 2 or 4 (2 x 2 patch)
  int admissible_r = 0;  // reduce: > 0 replaces lambda by the admissible value
  std::vector<int> criteria{1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::string suite;
};

const std::vector<std::string>& cli_commands();

nlohmann::json to_json(const RunConfig& c);
// Missing keys keep their defaults; unknown keys and wrong types throw.
RunConfig run_config_from_json(const nlohmann::json& j);
// Hash of the canonical config JSON without the output directory.
std::string config_hash(const RunConfig& c);

std::pair<int, int> parse_flux(const std::string& pq);
// beta with plaquette flux 2 beta a^2 = 2 pi p / q, or c.beta without a flux.
double resolved_beta(const RunConfig& c);

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCheckFailed = 2;

struct RunOutcome {
  int exit_code = kExitOk;
  std::vector<std::string> artifacts;  // relative to the output directory
  nlohmann::json summary = nlohmann::json::object();
  std::string message;
};

// Writes artifacts plus manifest.json under c.out. Errors are caught,
// reported on stderr and mapped to kExitError.
RunOutcome run(const RunConfig& c);

struct SuiteCase {
  std::string name;
  std::string status;  // pass | fail | error
  int exit_code = kExitOk;
  double seconds = 0.0;
  std::string message;
};

struct SuiteSummary {
  std::vector<SuiteCase> cases;
  int exit_code = kExitOk;
  std::string table() const;
};

// Built-in suite covering acceptance criteria 1-9.
nlohmann::json default_suite();
// Runs every case of {"cases": [...]}; each case is either
// {"name", "criterion": k} or {"name", "config": {...}}. Config cases write
// into out_dir/name. Exit code: 1 if any case errored, else 2 if any failed.
SuiteSummary reproduce_all(const nlohmann::json& suite, const std::filesystem::path& out_dir);
SuiteSummary reproduce_all(const std::filesystem::path& suite_path, const std::filesystem::path& out_dir);

}  // namespace magtb
