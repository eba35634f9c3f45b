// ringlab: configuration-driven experiments on ring-oscillator basins.
//
// One experiment per invocation; a comma list on a numeric key (e.g.
// --n 10,20,40,80) sweeps that key, writing one output directory per point.

#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "ringlab/experiment.hpp"
#include "ringlab/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ringlab: basins of attraction in coupled oscillator rings"};
  app.set_version_flag("--version", std::string(ringlab::kVersion));

  std::string config_path;
  app.add_option("--config", config_path, "key=value config file (CLI flags override)");

  // Options mirror the config keys; only flags the user passed override the
  // file, so we capture raw strings and merge by hand.
  std::map<std::string, std::string> cli;
  const auto opt = [&](const std::string& flag, const std::string& key,
                       const std::string& help) {
    app.add_option_function<std::string>(
           flag, [&cli, key](const std::string& v) { cli[key] = v; }, help)
        ->expected(1);
  };
  opt("--experiment", "experiment",
      "census | dynamical-census | master-distance | boundary | ray | head | "
      "stability | validate-coupling");
  opt("--n", "n", "number of oscillators");
  opt("--trials", "trials", "number of Monte Carlo trials");
  opt("--seed", "seed", "master seed (required; 64-bit)");
  opt("--coupling", "coupling", "builtin coupling id (sawtooth | half-sine | tanh-pi | sine)");
  opt("--coupling-table", "coupling_table", "CSV table of a custom coupling");
  opt("--q", "q", "winding number (ray start, spectrum target)");
  opt("--delta", "delta", "boundary proximity threshold in (0, pi)");
  opt("--T", "T", "ray length");
  opt("--step", "step", "ray sampling step (default: largest step the survey allows)");
  opt("--q-filter", "q_filter", "condition master-distance sampling on this winding");
  opt("--out", "out", "output directory (results.csv, meta.json)");
  opt("--threads", "threads", "worker threads (results independent of this)");
  app.add_flag_callback(
      "--allow-non-monotone",
      [&cli] { cli["allow_non_monotone"] = "true"; },
      "run dynamics experiments with a coupling that fails strict monotonicity");

  CLI11_PARSE(app, argc, argv);

  try {
    std::map<std::string, std::string> kv;
    if (!config_path.empty()) kv = ringlab::parse_config_file(config_path);
    for (const auto& [k, v] : cli) kv[k] = v;

    const auto configs = ringlab::expand_sweep(kv);
    int worst = ringlab::kExitOk;
    for (const auto& cfg : configs) {
      const auto outcome = ringlab::run_experiment(cfg);
      std::cout << outcome.message << "\n  -> " << cfg.out_dir << "\n";
      worst = std::max(worst, outcome.exit_code);
    }
    return worst;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ringlab::kExitError;
  }
}
