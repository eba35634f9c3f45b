#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ringlab/integrate.hpp"

namespace ringlab {

// Process exit statuses. Hypothesis violations (a coupling failing
// validation, or a monotonicity-requiring experiment given a non-monotone
// coupling without --allow-non-monotone) are distinguished from tool errors.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitHypothesisViolation = 2;

struct ExperimentConfig {
  std::string experiment;  // census | dynamical-census | master-distance |
                           // boundary | ray | head | stability | validate-coupling
  int n = 0;
  long long trials = 0;
  std::string coupling = "sawtooth";
  std::string coupling_table;  // path; when set, overrides the builtin id
  std::uint64_t seed = 0;
  bool seed_set = false;

  int q = 0;                   // ray start / spectrum target
  double delta = 0.3;          // boundary proximity threshold
  double T = 1e6;              // ray length
  double step = 0.0;           // ray step; 0 = largest step the survey allows
  std::optional<int> q_filter; // master-distance conditioning
  std::string out_dir = "out";
  int threads = 1;
  bool allow_non_monotone = false;

  IntegrationOptions integration;

  // Echo of every effective key=value pair, defaults included, written to
  // meta.json for provenance.
  std::map<std::string, std::string> echo() const;
};

// Flat key=value config file: one pair per line, '#' comments, blank lines
// ignored. Keys match the CLI flag names without dashes (out, coupling_table,
// q_filter, allow_non_monotone, ...).
std::map<std::string, std::string> parse_config_file(const std::string& path);

// Builds a config from merged key=value pairs (file first, CLI overrides
// already applied). Throws std::invalid_argument on unknown keys, malformed
// values, missing seed, or out-of-range parameters.
ExperimentConfig config_from_kv(const std::map<std::string, std::string>& kv);

// A key whose value is a comma list ("n=10,20,40,80") declares a sweep.
// Returns one config per point; each gets out_dir/<key>_<value>. At most one
// key may be swept.
std::vector<ExperimentConfig> expand_sweep(
    const std::map<std::string, std::string>& kv);

struct RunOutcome {
  int exit_code = kExitOk;
  std::string message;  // human-readable summary, printed by the CLI
};

// Runs one experiment and writes results.csv, meta.json (and crossings.csv
// for ray surveys) into cfg.out_dir. results.csv and crossings.csv are
// byte-identical for a fixed config and seed regardless of thread count.
RunOutcome run_experiment(const ExperimentConfig& cfg);

}  // namespace ringlab
