#include "ringlab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ringlab/census.hpp"
#include "ringlab/geometry.hpp"
#include "ringlab/io.hpp"
#include "ringlab/parallel.hpp"
#include "ringlab/rng.hpp"
#include "ringlab/stability.hpp"
#include "ringlab/version.hpp"

namespace ringlab {

namespace {

using nlohmann::json;

const std::set<std::string> kKinds = {
    "census",  "dynamical-census", "master-distance", "boundary",
    "ray",     "head",             "stability",       "validate-coupling"};

const std::set<std::string> kKeys = {
    "experiment", "n",        "trials", "coupling", "coupling_table",
    "seed",       "q",        "delta",  "T",        "step",
    "q_filter",   "out",      "threads", "allow_non_monotone"};

long long parse_ll(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid integer for '" + key + "': " + value);
  }
}

double parse_d(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid number for '" + key + "': " + value);
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const std::uint64_t v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid seed for '" + key + "': " + value);
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  throw std::invalid_argument("invalid boolean for '" + key + "': " + value);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!kKeys.count(key))
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": unknown key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

ExperimentConfig config_from_kv(const std::map<std::string, std::string>& kv) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : kv) {
    if (!kKeys.count(key))
      throw std::invalid_argument("unknown config key '" + key + "'");
    if (key == "experiment") cfg.experiment = value;
    else if (key == "n") cfg.n = static_cast<int>(parse_ll(key, value));
    else if (key == "trials") cfg.trials = parse_ll(key, value);
    else if (key == "coupling") cfg.coupling = value;
    else if (key == "coupling_table") cfg.coupling_table = value;
    else if (key == "seed") { cfg.seed = parse_u64(key, value); cfg.seed_set = true; }
    else if (key == "q") cfg.q = static_cast<int>(parse_ll(key, value));
    else if (key == "delta") cfg.delta = parse_d(key, value);
    else if (key == "T") cfg.T = parse_d(key, value);
    else if (key == "step") cfg.step = parse_d(key, value);
    else if (key == "q_filter") cfg.q_filter = static_cast<int>(parse_ll(key, value));
    else if (key == "out") cfg.out_dir = value;
    else if (key == "threads") cfg.threads = static_cast<int>(parse_ll(key, value));
    else if (key == "allow_non_monotone") cfg.allow_non_monotone = parse_bool(key, value);
  }

  if (!kKinds.count(cfg.experiment))
    throw std::invalid_argument(
        "experiment must be one of census|dynamical-census|master-distance|"
        "boundary|ray|head|stability|validate-coupling (got '" +
        cfg.experiment + "')");
  if (!cfg.seed_set)
    throw std::invalid_argument(
        "seed is required: every run must be reproducible");
  const bool needs_n = cfg.experiment != "validate-coupling";
  if (needs_n && cfg.n < 3)
    throw std::invalid_argument("n >= 3 required for experiment '" +
                                cfg.experiment + "'");
  const bool needs_trials = cfg.experiment == "census" ||
                            cfg.experiment == "dynamical-census" ||
                            cfg.experiment == "master-distance" ||
                            cfg.experiment == "boundary" ||
                            cfg.experiment == "head";
  if (needs_trials && cfg.trials < 1)
    throw std::invalid_argument("trials >= 1 required for experiment '" +
                                cfg.experiment + "'");
  if (cfg.threads < 1) throw std::invalid_argument("threads >= 1 required");
  if (!cfg.coupling_table.empty() &&
      !std::filesystem::exists(cfg.coupling_table))
    throw std::invalid_argument("coupling table does not exist: " +
                                cfg.coupling_table);
  return cfg;
}

std::vector<ExperimentConfig> expand_sweep(
    const std::map<std::string, std::string>& kv) {
  std::string sweep_key;
  for (const auto& [key, value] : kv) {
    if (value.find(',') == std::string::npos) continue;
    if (key == "coupling" || key == "coupling_table" || key == "out" ||
        key == "experiment")
      continue;  // commas make no sense there; let validation reject them
    if (!sweep_key.empty())
      throw std::invalid_argument("at most one key may be swept (found '" +
                                  sweep_key + "' and '" + key + "')");
    sweep_key = key;
  }
  if (sweep_key.empty()) return {config_from_kv(kv)};

  std::vector<ExperimentConfig> out;
  std::stringstream values(kv.at(sweep_key));
  std::string item;
  while (std::getline(values, item, ',')) {
    item = trim(item);
    if (item.empty())
      throw std::invalid_argument("empty value in sweep for '" + sweep_key + "'");
    auto point = kv;
    point[sweep_key] = item;
    ExperimentConfig cfg = config_from_kv(point);
    cfg.out_dir = (std::filesystem::path(cfg.out_dir) / (sweep_key + "_" + item))
                      .string();
    out.push_back(std::move(cfg));
  }
  return out;
}

std::map<std::string, std::string> ExperimentConfig::echo() const {
  std::map<std::string, std::string> e;
  e["experiment"] = experiment;
  e["n"] = std::to_string(n);
  e["trials"] = std::to_string(trials);
  e["coupling"] = coupling;
  e["coupling_table"] = coupling_table;
  e["seed"] = io::format_u64(seed);
  e["q"] = std::to_string(q);
  e["delta"] = io::format_double(delta);
  e["T"] = io::format_double(T);
  e["step"] = io::format_double(step);
  e["q_filter"] = q_filter ? std::to_string(*q_filter) : "";
  e["out"] = out_dir;
  e["threads"] = std::to_string(threads);
  e["allow_non_monotone"] = allow_non_monotone ? "true" : "false";
  return e;
}

namespace {

CouplingSpec resolve_coupling(const ExperimentConfig& cfg) {
  if (!cfg.coupling_table.empty()) return load_coupling_table(cfg.coupling_table);
  return builtin_coupling(cfg.coupling);
}

json base_meta(const ExperimentConfig& cfg, const CouplingSpec& coupling) {
  json meta;
  meta["experiment"] = cfg.experiment;
  meta["n"] = cfg.n;
  meta["trials"] = cfg.trials;
  meta["seed"] = cfg.seed;
  meta["seed_rule"] = kSeedRuleVersion;
  meta["coupling"] = coupling.id;
  meta["version"] = kVersion;
  meta["git_revision"] = kGitRevision;
  meta["params"] = cfg.echo();
  return meta;
}

void write_meta(const ExperimentConfig& cfg, json meta, double wall_seconds) {
  meta["wall_time_s"] = wall_seconds;
  std::ofstream out(std::filesystem::path(cfg.out_dir) / "meta.json",
                    std::ios::binary);
  out << meta.dump(2) << '\n';
}

void write_results_csv(const ExperimentConfig& cfg, const std::string& body) {
  io::write_text_file((std::filesystem::path(cfg.out_dir) / "results.csv").string(),
                      body);
}

std::string census_csv(const CensusResult& r) {
  std::ostringstream csv;
  csv << "q,count,empirical,exact,gaussian,stderr\n";
  for (const auto& [q, c] : r.counts) {
    const double p = r.empirical.at(q);
    const double se =
        std::sqrt(p * (1.0 - p) / static_cast<double>(r.trials));
    csv << q << ',' << c << ',' << io::format_double(p) << ',';
    if (auto it = r.exact.find(q); it != r.exact.end())
      csv << io::format_double(it->second);
    csv << ',' << io::format_double(r.gaussian.at(q)) << ','
        << io::format_double(se) << '\n';
  }
  return csv.str();
}

RunOutcome run_census(const ExperimentConfig& cfg, const CouplingSpec& coupling,
                      json& meta) {
  const CensusResult r =
      initial_winding_census(cfg.n, cfg.trials, cfg.seed, cfg.threads);
  write_results_csv(cfg, census_csv(r));
  meta["k_hat"] = r.k_hat;
  meta["boundary_rejections"] = r.boundary_rejections;
  std::ostringstream msg;
  msg << "census: n=" << cfg.n << " trials=" << cfg.trials
      << " bins=" << r.counts.size() << " k_hat=" << io::format_double(r.k_hat);
  (void)coupling;
  return {kExitOk, msg.str()};
}

RunOutcome run_dynamical_census(const ExperimentConfig& cfg,
                                const CouplingSpec& coupling, json& meta) {
  if (!coupling.strictly_increasing && !cfg.allow_non_monotone) {
    return {kExitHypothesisViolation,
            "dynamical-census: coupling '" + coupling.id +
                "' is not strictly increasing on (-pi, pi), so winding "
                "conservation is not guaranteed; pass --allow-non-monotone "
                "to run anyway"};
  }
  DynamicalCensusOptions opts;
  opts.threads = cfg.threads;
  opts.allow_non_monotone = cfg.allow_non_monotone;
  opts.integration = cfg.integration;
  const DynamicalCensusResult r =
      dynamical_census(cfg.n, cfg.trials, coupling, cfg.seed, opts);
  write_results_csv(cfg, census_csv(r.census));
  meta["mismatches"] = r.mismatches;
  meta["non_converged"] = r.non_converged;
  meta["k_hat"] = r.census.k_hat;
  std::ostringstream msg;
  msg << "dynamical-census: n=" << cfg.n << " trials=" << cfg.trials
      << " mismatches=" << r.mismatches << " non_converged=" << r.non_converged;
  return {kExitOk, msg.str()};
}

RunOutcome run_master_distance(const ExperimentConfig& cfg,
                               const CouplingSpec&, json& meta) {
  const DistanceSummary s = master_distance_experiment(
      cfg.n, cfg.trials, cfg.q_filter, cfg.seed, cfg.threads);
  std::ostringstream csv;
  csv << "bin_lo,bin_hi,count\n";
  const double width = (s.hist_hi - s.hist_lo) / s.histogram.size();
  for (size_t b = 0; b < s.histogram.size(); ++b) {
    csv << io::format_double(s.hist_lo + b * width) << ','
        << io::format_double(s.hist_lo + (b + 1) * width) << ','
        << s.histogram[b] << '\n';
  }
  write_results_csv(cfg, csv.str());
  meta["mean_d"] = s.mean_d;
  meta["std_d"] = s.std_d;
  meta["mean_d2"] = s.mean_d2;
  meta["var_d2"] = s.var_d2;
  meta["rejected"] = s.rejected;
  std::ostringstream msg;
  msg << "master-distance: mean=" << io::format_double(s.mean_d)
      << " (limit " << io::format_double(std::sqrt(kPi * kPi / 3.0)) << ")";
  return {kExitOk, msg.str()};
}

RunOutcome run_boundary(const ExperimentConfig& cfg, const CouplingSpec&,
                        json& meta) {
  // Histogram of near-boundary counts over uniform samples.
  std::vector<int> counts(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](long long i) {
    SplitMix64 rng(trial_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    DiffState d;
    d.eta.resize(cfg.n);
    double sum = 0.0;
    for (int j = 0; j + 1 < cfg.n; ++j) {
      d.eta[j] = rng.uniform_angle();
      sum += d.eta[j];
    }
    d.eta[cfg.n - 1] = wrap_angle(-sum);
    counts[i] = boundary_proximity_count(d, cfg.delta);
  });

  std::map<int, long long> hist;
  double mean = 0.0;
  for (int c : counts) {
    ++hist[c];
    mean += c;
  }
  mean /= static_cast<double>(cfg.trials);
  double var = 0.0;
  for (int c : counts) var += (c - mean) * (c - mean);
  var /= static_cast<double>(cfg.trials - 1);

  const double p = cfg.delta / kPi;
  std::ostringstream csv;
  csv << "k,count,empirical,binomial_pmf\n";
  for (const auto& [k, c] : hist) {
    // Binomial(n-1, delta/pi) reference pmf.
    double logpmf = std::lgamma(cfg.n) - std::lgamma(k + 1.0) -
                    std::lgamma(cfg.n - k) + k * std::log(p) +
                    (cfg.n - 1 - k) * std::log1p(-p);
    csv << k << ',' << c << ','
        << io::format_double(static_cast<double>(c) / cfg.trials) << ','
        << io::format_double(std::exp(logpmf)) << '\n';
  }
  write_results_csv(cfg, csv.str());
  meta["mean_count"] = mean;
  meta["var_count"] = var;
  meta["binomial_mean"] = (cfg.n - 1) * p;
  meta["binomial_var"] = (cfg.n - 1) * p * (1.0 - p);
  std::ostringstream msg;
  msg << "boundary: mean=" << io::format_double(mean) << " expected "
      << io::format_double((cfg.n - 1) * p);
  return {kExitOk, msg.str()};
}

RunOutcome run_ray(const ExperimentConfig& cfg, const CouplingSpec&, json& meta) {
  const RayDirection v = sample_ray_direction(cfg.n, cfg.seed);
  double step = cfg.step;
  if (step <= 0.0) step = max_survey_step(v);
  const RayResult r = ray_survey(cfg.q, v, cfg.T, step);

  std::ostringstream csv;
  csv << "q,occupation,exact\n";
  for (const auto& [q, frac] : r.occupation) {
    csv << q << ',' << io::format_double(frac) << ',';
    if (cfg.n <= kExactMeasureMaxN && 2 * std::abs(q) < cfg.n)
      csv << io::format_double(exact_basin_measure(cfg.n, q));
    csv << '\n';
  }
  write_results_csv(cfg, csv.str());

  std::ostringstream cross;
  cross << "lambda,q_before,q_after\n";
  for (const auto& ev : r.crossing_log)
    cross << io::format_double(ev.lambda) << ',' << ev.q_before << ','
          << ev.q_after << '\n';
  io::write_text_file(
      (std::filesystem::path(cfg.out_dir) / "crossings.csv").string(),
      cross.str());

  meta["step"] = step;
  meta["samples"] = r.samples;
  meta["boundary_samples"] = r.boundary_samples;
  meta["crossings"] = r.crossings;
  if (r.first_exit) meta["first_exit"] = *r.first_exit;
  try {
    meta["lambda_star_closed_form"] = lambda_star_closed_form(v, cfg.q);
  } catch (const std::domain_error&) {
    meta["lambda_star_closed_form"] = nullptr;
  }
  std::ostringstream msg;
  msg << "ray: crossings=" << r.crossings << " first_exit="
      << (r.first_exit ? io::format_double(*r.first_exit) : "none");
  return {kExitOk, msg.str()};
}

RunOutcome run_head(const ExperimentConfig& cfg, const CouplingSpec&, json& meta) {
  const HeadStats h = head_statistics(cfg.n, cfg.trials, cfg.seed, cfg.threads);
  std::ostringstream csv;
  csv << "statistic,value\n";
  csv << "lambda_star_median," << io::format_double(h.lambda_stars.median) << '\n';
  csv << "lambda_star_mean," << io::format_double(h.lambda_stars.mean) << '\n';
  csv << "lambda_star_q10," << io::format_double(h.lambda_stars.q10) << '\n';
  csv << "lambda_star_q90," << io::format_double(h.lambda_stars.q90) << '\n';
  csv << "lambda_star_min," << io::format_double(h.lambda_stars.min) << '\n';
  csv << "w_inf_median," << io::format_double(h.w_inf.median) << '\n';
  csv << "lambda_ratio," << io::format_double(h.lambda_ratio) << '\n';
  csv << "w_inf_ratio," << io::format_double(h.w_inf_ratio) << '\n';
  csv << "r_q_exact," << io::format_double(h.r_q_exact) << '\n';
  write_results_csv(cfg, csv.str());
  meta["lambda_ratio"] = h.lambda_ratio;
  meta["w_inf_ratio"] = h.w_inf_ratio;
  meta["r_q_exact"] = h.r_q_exact;
  std::ostringstream msg;
  msg << "head: median(lambda*)=" << io::format_double(h.lambda_stars.median)
      << " ratio=" << io::format_double(h.lambda_ratio);
  return {kExitOk, msg.str()};
}

RunOutcome run_stability(const ExperimentConfig& cfg,
                         const CouplingSpec& coupling, json& meta) {
  std::ostringstream csv;
  csv << "q,fprime,max_nonzero_eigenvalue,verdict\n";
  int stable = 0, unstable = 0, marginal = 0;
  const int qmax = (cfg.n - 1) / 2;
  for (int q = -qmax; q <= qmax; ++q) {
    const SpectrumReport rep = twisted_spectrum(cfg.n, q, coupling);
    csv << q << ',' << io::format_double(rep.fprime_at_twist) << ','
        << io::format_double(rep.max_nonzero_eigenvalue) << ','
        << to_string(rep.verdict) << '\n';
    switch (rep.verdict) {
      case StabilityVerdict::stable: ++stable; break;
      case StabilityVerdict::unstable: ++unstable; break;
      case StabilityVerdict::marginal: ++marginal; break;
    }
  }
  write_results_csv(cfg, csv.str());
  meta["stable"] = stable;
  meta["unstable"] = unstable;
  meta["marginal"] = marginal;
  std::ostringstream msg;
  msg << "stability: stable=" << stable << " unstable=" << unstable
      << " marginal=" << marginal;
  return {kExitOk, msg.str()};
}

RunOutcome run_validate(const ExperimentConfig& cfg,
                        const CouplingSpec& coupling, json& meta) {
  const ValidationReport rep = validate_hypotheses(coupling);
  std::ostringstream csv;
  csv << "check,pass,worst,witness_x\n";
  const auto row = [&](const char* name, const HypothesisCheck& c) {
    csv << name << ',' << (c.pass ? "true" : "false") << ','
        << io::format_double(c.worst) << ',' << io::format_double(c.witness_x)
        << '\n';
  };
  row("odd_symmetry", rep.odd_symmetry);
  row("strict_monotonicity", rep.monotonicity);
  row("antiderivative_consistency", rep.antiderivative);
  csv << "periodization_jump," << (rep.jump_at_pi ? "true" : "false") << ','
      << io::format_double(rep.jump_magnitude) << ',' << io::format_double(kPi)
      << '\n';
  write_results_csv(cfg, csv.str());
  meta["all_pass"] = rep.all_pass();
  meta["jump_at_pi"] = rep.jump_at_pi;
  std::ostringstream msg;
  msg << "validate-coupling '" << coupling.id << "': "
      << (rep.all_pass() ? "all hypotheses hold" : "hypothesis violation")
      << (rep.jump_at_pi ? " (periodization jump at +-pi, permitted)" : "");
  return {rep.all_pass() ? kExitOk : kExitHypothesisViolation, msg.str()};
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  io::ensure_directory(cfg.out_dir);
  const CouplingSpec coupling = resolve_coupling(cfg);
  json meta = base_meta(cfg, coupling);

  RunOutcome outcome;
  if (cfg.experiment == "census") outcome = run_census(cfg, coupling, meta);
  else if (cfg.experiment == "dynamical-census") outcome = run_dynamical_census(cfg, coupling, meta);
  else if (cfg.experiment == "master-distance") outcome = run_master_distance(cfg, coupling, meta);
  else if (cfg.experiment == "boundary") outcome = run_boundary(cfg, coupling, meta);
  else if (cfg.experiment == "ray") outcome = run_ray(cfg, coupling, meta);
  else if (cfg.experiment == "head") outcome = run_head(cfg, coupling, meta);
  else if (cfg.experiment == "stability") outcome = run_stability(cfg, coupling, meta);
  else if (cfg.experiment == "validate-coupling") outcome = run_validate(cfg, coupling, meta);
  else throw std::invalid_argument("unknown experiment: " + cfg.experiment);

  meta["exit_code"] = outcome.exit_code;
  const auto t1 = std::chrono::steady_clock::now();
  write_meta(cfg, std::move(meta),
             std::chrono::duration<double>(t1 - t0).count());
  return outcome;
}

}  // namespace ringlab
