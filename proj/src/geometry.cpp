#include "ringlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ringlab/parallel.hpp"
#include "ringlab/rng.hpp"

namespace ringlab {

double torus_distance(const RingState& a, const RingState& b) {
  if (a.n() != b.n())
    throw std::invalid_argument("torus_distance: dimension mismatch");
  double sum = 0.0;
  for (int i = 0; i < a.n(); ++i) {
    const double di = circular_distance(a.theta[i], b.theta[i]);
    sum += di * di;
  }
  return std::sqrt(sum / a.n());
}

namespace {

RingState sample_uniform_ringstate(SplitMix64& rng, int n) {
  RingState s;
  s.theta.resize(n);
  for (int i = 0; i < n; ++i) s.theta[i] = rng.uniform_angle();
  return s;
}

double percentile(std::vector<double> sorted, double p) {
  // sorted must be ascending; linear interpolation between order statistics.
  const size_t m = sorted.size();
  if (m == 0) return 0.0;
  const double pos = p * (m - 1);
  const size_t lo = static_cast<size_t>(pos);
  const size_t hi = std::min(lo + 1, m - 1);
  const double frac = pos - lo;
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

SummaryStats summarize(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  SummaryStats s;
  s.min = values.front();
  s.max = values.back();
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  s.median = percentile(values, 0.5);
  s.q10 = percentile(values, 0.1);
  s.q90 = percentile(values, 0.9);
  return s;
}

}  // namespace

DistanceSummary master_distance_experiment(int n, long long trials,
                                           std::optional<int> q_filter,
                                           std::uint64_t seed, int threads,
                                           int histogram_bins) {
  if (n < 3) throw std::invalid_argument("master_distance_experiment: n >= 3");
  if (trials < 1) throw std::invalid_argument("master_distance_experiment: trials >= 1");

  if (q_filter) {
    const double limit = 2.0 * std::sqrt(static_cast<double>(n));
    const double acceptance = n <= kExactMeasureMaxN
                                  ? exact_basin_measure(n, *q_filter)
                                  : gaussian_prediction(n, *q_filter);
    if (std::abs(*q_filter) > limit || acceptance < 1e-4)
      throw std::invalid_argument(
          "master_distance_experiment: predicted acceptance rate below 1e-4 "
          "for q_filter=" + std::to_string(*q_filter) +
          "; use a larger n or a smaller |q|");
  }

  const RingState reference = twisted_ring_state(n, q_filter.value_or(0));

  std::vector<double> dist(trials);
  std::vector<long long> rejected(trials, 0);
  parallel_for(trials, threads, [&](long long i) {
    SplitMix64 rng(trial_seed(seed, static_cast<std::uint64_t>(i)));
    for (;;) {
      const RingState s = sample_uniform_ringstate(rng, n);
      if (q_filter) {
        const auto q = winding_number(theta_to_eta(s));
        if (!q || *q != *q_filter) {
          ++rejected[i];
          continue;
        }
      }
      dist[i] = torus_distance(s, reference);
      break;
    }
  });

  DistanceSummary out;
  out.n = n;
  out.trials = trials;
  out.q_filter = q_filter;
  out.seed = seed;
  out.rejected = std::accumulate(rejected.begin(), rejected.end(), 0LL);

  double sum = 0, sum2 = 0, sumsq = 0, sumsq2 = 0;
  for (double d : dist) {
    sum += d;
    sumsq += d * d;
    const double d2 = d * d;
    sum2 += d2;
    sumsq2 += d2 * d2;
  }
  const double N = static_cast<double>(trials);
  out.mean_d = sum / N;
  out.std_d = trials > 1 ? std::sqrt(std::max(0.0, (sumsq - sum * sum / N) / (N - 1)))
                         : 0.0;
  out.mean_d2 = sum2 / N;
  out.var_d2 = trials > 1 ? std::max(0.0, (sumsq2 - sum2 * sum2 / N) / (N - 1)) : 0.0;

  out.hist_lo = 0.0;
  out.hist_hi = kPi;
  out.histogram.assign(histogram_bins, 0);
  for (double d : dist) {
    int bin = static_cast<int>(d / kPi * histogram_bins);
    bin = std::clamp(bin, 0, histogram_bins - 1);
    ++out.histogram[bin];
  }
  return out;
}

int boundary_proximity_count(const DiffState& d, double delta) {
  if (!(delta > 0.0 && delta < kPi))
    throw std::invalid_argument("boundary_proximity_count: delta in (0, pi)");
  int count = 0;
  for (int i = 0; i + 1 < d.n(); ++i)  // first n-1 indices: independent ones
    if (circular_distance(d.eta[i], kPi) < delta) ++count;
  return count;
}

RayDirection sample_ray_direction(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_ray_direction: n >= 2");
  SplitMix64 rng(seed);
  RayDirection dir;
  dir.v.resize(n);
  double norm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    dir.v[i] = rng.normal();
    norm2 += dir.v[i] * dir.v[i];
  }
  const double norm = std::sqrt(norm2);
  for (double& x : dir.v) x /= norm;
  return dir;
}

namespace {

std::vector<double> cycle_difference(const std::vector<double>& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = v[(i + 1) % n] - v[i];
  return w;
}

// Winding of eta_i = wrap(base + lambda w_i); nullopt on the boundary set.
std::optional<int> ray_winding(const std::vector<double>& w, double base,
                               double lambda) {
  double sum = 0.0;
  for (double wi : w) {
    const double e = wrap_angle(base + lambda * wi);
    if (std::fabs(e) >= kPi - kBoundaryTol) return std::nullopt;
    sum += e;
  }
  return static_cast<int>(std::llround(sum / kTwoPi));
}

}  // namespace

double max_survey_step(const RayDirection& v) {
  const std::vector<double> w = cycle_difference(v.v);
  double winf = 0.0;
  for (double x : w) winf = std::max(winf, std::fabs(x));
  if (winf == 0.0) return std::numeric_limits<double>::infinity();
  return 0.01 * kPi / winf;
}

RayResult ray_survey(int q_start, const RayDirection& v, double T, double step) {
  const int n = v.n();
  if (2 * std::abs(q_start) >= n)
    throw std::invalid_argument("ray_survey: |q_start| < n/2 required");
  if (!(T > 0.0)) throw std::invalid_argument("ray_survey: T > 0 required");
  const double step_limit = max_survey_step(v);
  if (!(step > 0.0) || step > step_limit)
    throw std::invalid_argument(
        "ray_survey: need 0 < step <= 0.01*pi/||Av||_inf = " +
        std::to_string(step_limit));

  const std::vector<double> w = cycle_difference(v.v);
  const double base = kTwoPi * q_start / n;

  RayResult res;
  res.q_start = q_start;
  res.T = T;
  res.step = step;

  std::map<int, long long> hits;
  std::optional<int> last_valid;
  std::optional<double> exit_bracket_lo;
  const long long nsamples = static_cast<long long>(std::floor(T / step)) + 1;

  for (long long k = 0; k < nsamples; ++k) {
    const double lambda = k * step;
    const auto q = ray_winding(w, base, lambda);
    ++res.samples;
    if (!q) {
      ++res.boundary_samples;
    } else {
      ++hits[*q];
      if (last_valid && *q != *last_valid) {
        ++res.crossings;
        res.crossing_log.push_back({lambda, *last_valid, *q});
      }
      last_valid = q;
    }
    if (!res.first_exit && !exit_bracket_lo && !(q && *q == q_start) && k > 0)
      exit_bracket_lo = lambda - step;
  }

  // Refine the first departure from the starting basin by bisection.
  if (exit_bracket_lo) {
    double lo = *exit_bracket_lo, hi = lo + step;
    while (hi - lo > 1e-9) {
      const double mid = 0.5 * (lo + hi);
      const auto q = ray_winding(w, base, mid);
      if (q && *q == q_start)
        lo = mid;
      else
        hi = mid;
    }
    res.first_exit = hi;
  }

  for (const auto& [q, c] : hits)
    res.occupation[q] = static_cast<double>(c) / static_cast<double>(res.samples);
  return res;
}

double lambda_star_closed_form(const RayDirection& v, int q_start) {
  const int n = v.n();
  if (2 * std::abs(q_start) >= n)
    throw std::invalid_argument("lambda_star_closed_form: |q_start| < n/2");
  const std::vector<double> w = cycle_difference(v.v);
  const double base = kTwoPi * q_start / n;

  double best = std::numeric_limits<double>::infinity();
  for (double wi : w) {
    if (wi > 0.0)
      best = std::min(best, (kPi - base) / wi);
    else if (wi < 0.0)
      best = std::min(best, (-kPi - base) / wi);
  }
  if (!std::isfinite(best))
    throw std::domain_error(
        "lambda_star_closed_form: direction is proportional to the constant "
        "vector; the ray stays inside the basin forever");
  return best;
}

HeadStats head_statistics(int n, long long trials, std::uint64_t seed,
                          int threads) {
  if (n < 10) throw std::invalid_argument("head_statistics: n >= 10");
  if (trials < 100) throw std::invalid_argument("head_statistics: trials >= 100");

  std::vector<double> lambdas(trials), winfs(trials);
  parallel_for(trials, threads, [&](long long i) {
    const RayDirection v =
        sample_ray_direction(n, trial_seed(seed, static_cast<std::uint64_t>(i)));
    const std::vector<double> w = cycle_difference(v.v);
    double winf = 0.0;
    for (double x : w) winf = std::max(winf, std::fabs(x));
    winfs[i] = winf;
    lambdas[i] = kPi / winf;  // q = 0 exit length
  });

  HeadStats out;
  out.n = n;
  out.trials = trials;
  out.seed = seed;
  out.lambda_stars = summarize(lambdas);
  out.w_inf = summarize(winfs);
  const double logn = std::log(static_cast<double>(n));
  out.lambda_ratio = out.lambda_stars.median / std::sqrt(n / logn);
  out.w_inf_ratio = out.w_inf.median / (2.0 * std::sqrt(logn / n));
  out.r_q_exact = kPi / std::sqrt(2.0);
  return out;
}

}  // namespace ringlab
