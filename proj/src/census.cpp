#include "ringlab/census.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ringlab/parallel.hpp"
#include "ringlab/rng.hpp"

namespace ringlab {

namespace {

using quad = boost::multiprecision::cpp_bin_float_quad;

DiffState sample_from_stream(SplitMix64& rng, int n) {
  DiffState d;
  d.eta.resize(n);
  double sum = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    d.eta[i] = rng.uniform_angle();
    sum += d.eta[i];
  }
  d.eta[n - 1] = wrap_angle(-sum);
  return d;
}

bool near_boundary(const DiffState& d) {
  for (double e : d.eta)
    if (std::fabs(e) >= kPi - kBoundaryTol) return true;
  return false;
}

// Winding of a fresh uniform sample, resampling the measure-zero boundary
// states within the trial's own stream so the result does not depend on
// other trials.
int sample_winding(SplitMix64& rng, int n, long long& rejections) {
  for (;;) {
    const DiffState d = sample_from_stream(rng, n);
    if (near_boundary(d)) {
      ++rejections;
      continue;
    }
    double sum = 0.0;
    for (double e : d.eta) sum += e;
    return static_cast<int>(std::llround(sum / kTwoPi));
  }
}

void finalize_census(CensusResult& r) {
  for (const auto& [q, c] : r.counts)
    r.empirical[q] = static_cast<double>(c) / static_cast<double>(r.trials);
  if (r.n <= kExactMeasureMaxN) {
    for (const auto& [q, c] : r.counts) r.exact[q] = exact_basin_measure(r.n, q);
  }
  for (const auto& [q, c] : r.counts) r.gaussian[q] = gaussian_prediction(r.n, q);
  try {
    r.k_hat = fit_decay_constant(r);
  } catch (const std::exception&) {
    r.k_hat = std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

DiffState sample_uniform_diffstate(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_uniform_diffstate: n >= 2");
  SplitMix64 rng(seed);
  return sample_from_stream(rng, n);
}

CensusResult initial_winding_census(int n, long long trials, std::uint64_t seed,
                                    int threads) {
  if (n < 2) throw std::invalid_argument("initial_winding_census: n >= 2");
  if (trials < 1) throw std::invalid_argument("initial_winding_census: trials >= 1");

  CensusResult r;
  r.n = n;
  r.trials = trials;
  r.seed = seed;

  threads = std::max(1, threads);
  // Integer counts merge order-independently, so per-thread histograms give
  // bit-identical results for any worker count.
  const int slots = threads;
  std::vector<std::map<int, long long>> counts(slots);
  std::vector<long long> rejections(slots, 0);
  const long long chunk = (trials + slots - 1) / slots;

  parallel_for(slots, threads, [&](long long w) {
    const long long lo = w * chunk;
    const long long hi = std::min<long long>(trials, lo + chunk);
    for (long long i = lo; i < hi; ++i) {
      SplitMix64 rng(trial_seed(seed, static_cast<std::uint64_t>(i)));
      const int q = sample_winding(rng, n, rejections[w]);
      ++counts[w][q];
    }
  });

  for (int w = 0; w < slots; ++w) {
    for (const auto& [q, c] : counts[w]) r.counts[q] += c;
    r.boundary_rejections += rejections[w];
  }
  finalize_census(r);
  return r;
}

DynamicalCensusResult dynamical_census(int n, long long trials,
                                       const CouplingSpec& coupling,
                                       std::uint64_t seed,
                                       const DynamicalCensusOptions& opts) {
  if (!coupling.strictly_increasing && !opts.allow_non_monotone)
    throw std::invalid_argument(
        "dynamical_census: coupling '" + coupling.id +
        "' is not strictly increasing on (-pi, pi); pass allow_non_monotone "
        "to run anyway");

  DynamicalCensusResult out;
  out.coupling_id = coupling.id;
  out.census.n = n;
  out.census.trials = trials;
  out.census.seed = seed;

  struct Trial {
    bool converged = false;
    bool mismatch = false;
    int final_q = 0;
    long long rejections = 0;
  };
  std::vector<Trial> slots(trials);

  parallel_for(trials, opts.threads, [&](long long i) {
    SplitMix64 rng(trial_seed(seed, static_cast<std::uint64_t>(i)));
    DiffState d0 = sample_from_stream(rng, n);
    while (near_boundary(d0)) {
      ++slots[i].rejections;
      d0 = sample_from_stream(rng, n);
    }
    const int q0 = *winding_number(d0);
    const TrajectoryRecord rec = integrate(d0, coupling, opts.integration);
    slots[i].converged = rec.converged;
    if (rec.converged && rec.final_winding) {
      slots[i].final_q = *rec.final_winding;
      slots[i].mismatch = *rec.final_winding != q0;
    } else {
      slots[i].converged = false;  // boundary-final states count as unresolved
    }
  });

  for (const Trial& t : slots) {
    out.census.boundary_rejections += t.rejections;
    if (!t.converged) {
      ++out.non_converged;
      continue;
    }
    ++out.census.counts[t.final_q];
    if (t.mismatch) ++out.mismatches;
  }
  out.census.trials = trials - out.non_converged;
  if (out.census.trials > 0) finalize_census(out.census);
  return out;
}

// ---------------------------------------------------------------------------
// Exact uniform-sum oracle (Irwin-Hall alternating sum).
// ---------------------------------------------------------------------------

namespace {

// CDF of a sum of m i.i.d. uniform(0,1) variables at y in [0, m]:
//   (1/m!) * sum_{k=0}^{floor(y)} (-1)^k C(m,k) (y-k)^m.
// The terms alternate and grow to ~1e12 at m = 79, so the sum runs in
// binary128 with Neumaier compensation; the final rounding to double is the
// only loss.
quad irwin_hall_cdf(int m, const quad& y) {
  if (y <= 0) return 0;
  if (y >= m) return 1;

  quad factorial = 1;
  for (int i = 2; i <= m; ++i) factorial *= i;

  quad sum = 0, comp = 0;
  quad binom = 1;  // C(m, k), exact in 113-bit mantissa for m <= 80
  const int kmax = static_cast<int>(std::floor(static_cast<double>(y)));
  for (int k = 0; k <= kmax; ++k) {
    const quad term = binom * boost::multiprecision::pow(y - k, m);
    const quad signed_term = (k % 2 == 0) ? term : -term;
    // Neumaier update
    const quad t = sum + signed_term;
    if (boost::multiprecision::fabs(sum) >= boost::multiprecision::fabs(signed_term))
      comp += (sum - t) + signed_term;
    else
      comp += (signed_term - t) + sum;
    sum = t;
    binom = binom * (m - k) / (k + 1);
  }
  return (sum + comp) / factorial;
}

}  // namespace

double exact_basin_measure(int n, int q) {
  if (n < 2 || n > kExactMeasureMaxN)
    throw std::invalid_argument(
        "exact_basin_measure: exact mode supports 2 <= n <= " +
        std::to_string(kExactMeasureMaxN) +
        " (alternating-sum cancellation); use gaussian_prediction beyond");
  if (2 * std::abs(q) >= n)
    throw std::invalid_argument("exact_basin_measure: |q| < n/2 required");

  const int m = n - 1;
  const int aq = std::abs(q);  // canonical sign: exact symmetry in q -> -q
  // Shift S by m/2: S + m/2 is Irwin-Hall(m) on [0, m].
  const quad half = quad(1) / 2;
  const quad lo = quad(aq) - half + quad(m) / 2;
  const quad hi = quad(aq) + half + quad(m) / 2;
  const quad p = irwin_hall_cdf(m, hi) - irwin_hall_cdf(m, lo);
  return static_cast<double>(p);
}

// ---------------------------------------------------------------------------
// Grid-convolution oracle.
//
// Maintains the CDF F_t of the partial sums on a uniform grid with K cells
// per unit length and applies F_{t+1}(x) = integral of F_t over
// [x - 1/2, x + 1/2]. The first convolution uses the trapezoid rule (exact:
// F_1 is piecewise linear with grid-aligned kinks), later ones composite
// Simpson. All window sums come from parity-split prefix arrays in long
// double, so each step is O(grid).
// ---------------------------------------------------------------------------

namespace {

std::vector<double> uniform_sum_cdf_grid(int m, int K) {
  const int pad = K / 2;
  const long long core = static_cast<long long>(m) * K + 1;  // [-m/2, m/2]
  const long long M = core + 2 * pad;
  const double h = 1.0 / K;
  const auto x_of = [&](long long i) {
    return (static_cast<double>(i - pad) / K) - 0.5 * m;
  };

  std::vector<double> F(M), G(M);
  // F_1: CDF of uniform(-1/2, 1/2].
  for (long long i = 0; i < M; ++i)
    F[i] = std::clamp(x_of(i) + 0.5, 0.0, 1.0);

  std::vector<long double> pe(M), po(M);  // prefix sums over even/odd indices
  const auto build_prefix = [&]() {
    long double se = 0.0L, so = 0.0L;
    for (long long i = 0; i < M; ++i) {
      if (i % 2 == 0)
        se += F[i];
      else
        so += F[i];
      pe[i] = se;
      po[i] = so;
    }
  };
  const auto parity_range = [&](long long lo, long long hi,
                                int parity) -> long double {
    // sum of F[i] for lo <= i <= hi with i % 2 == parity; lo >= 1
    if (hi < lo) return 0.0L;
    const auto& p = (parity == 0) ? pe : po;
    return p[hi] - p[lo - 1];
  };

  for (int t = 2; t <= m; ++t) {
    build_prefix();
    if (t == 2) {
      // Trapezoid over the K-cell window.
      for (long long j = pad; j < M - pad; ++j) {
        const long long a = j - pad, b = j + pad;
        const long double interior =
            parity_range(a + 1, b - 1, 0) + parity_range(a + 1, b - 1, 1);
        G[j] = static_cast<double>(h * (interior + 0.5L * (F[a] + F[b])));
      }
    } else {
      // Composite Simpson: h/3 * (F[a] + F[b] + 4*odd-offsets + 2*even-interior).
      for (long long j = pad; j < M - pad; ++j) {
        const long long a = j - pad, b = j + pad;
        const int odd_par = static_cast<int>((a + 1) % 2);
        const long double s4 = parity_range(a + 1, b - 1, odd_par);
        const long double s2 = parity_range(a + 2, b - 2, static_cast<int>(a % 2));
        G[j] = static_cast<double>(h / 3.0L * (F[a] + F[b] + 4.0L * s4 + 2.0L * s2));
      }
    }
    // Outside the support the CDF is exactly 0 / 1.
    for (long long j = 0; j < pad; ++j) G[j] = 0.0;
    for (long long j = M - pad; j < M; ++j) G[j] = 1.0;
    F.swap(G);
  }
  return F;
}

}  // namespace

std::map<int, double> grid_convolution_basin_measures(int n, int cells_per_unit) {
  if (n < 2 || n > 128)
    throw std::invalid_argument("grid_convolution_basin_measures: 2 <= n <= 128");
  if (cells_per_unit < 4 || cells_per_unit % 2 != 0)
    throw std::invalid_argument(
        "grid_convolution_basin_measures: cells_per_unit must be even and >= 4");

  const int m = n - 1;
  const int K = cells_per_unit;
  const int pad = K / 2;
  const std::vector<double> F = uniform_sum_cdf_grid(m, K);

  // Array index of the grid point at value s (s is a multiple of 1/2).
  const auto idx = [&](double s) {
    return pad + static_cast<long long>(std::llround((s + 0.5 * m) * K));
  };

  std::map<int, double> out;
  const int qmax = (n - 1) / 2;
  for (int q = -qmax; q <= qmax; ++q) {
    const double lo = std::max(q - 0.5, -0.5 * m);
    const double hi = std::min(q + 0.5, 0.5 * m);
    out[q] = F[idx(hi)] - F[idx(lo)];
  }
  return out;
}

double grid_convolution_basin_measure(int n, int q, int cells_per_unit) {
  if (2 * std::abs(q) >= n)
    throw std::invalid_argument("grid_convolution_basin_measure: |q| < n/2");
  return grid_convolution_basin_measures(n, cells_per_unit).at(q);
}

double gaussian_prediction(int n, int q) {
  if (n < 2) throw std::invalid_argument("gaussian_prediction: n >= 2");
  return std::sqrt(6.0 / (kPi * n)) * std::exp(-6.0 * q * q / n);
}

double fit_decay_constant(const CensusResult& result, long long min_count) {
  std::vector<double> x, y, w;  // x = q^2, y = log empirical, w = counts
  for (const auto& [q, c] : result.counts) {
    if (c < min_count) continue;
    x.push_back(static_cast<double>(q) * q);
    y.push_back(std::log(static_cast<double>(c) / result.trials));
    w.push_back(static_cast<double>(c));
  }
  if (x.size() < 3)
    throw std::invalid_argument(
        "fit_decay_constant: need at least 3 bins with count >= " +
        std::to_string(min_count));

  double W = 0, mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    W += w[i];
    mx += w[i] * x[i];
    my += w[i] * y[i];
  }
  mx /= W;
  my /= W;
  double cov = 0, var = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    cov += w[i] * (x[i] - mx) * (y[i] - my);
    var += w[i] * (x[i] - mx) * (x[i] - mx);
  }
  if (var == 0.0)
    throw std::invalid_argument("fit_decay_constant: degenerate q bins");
  // Model log mu_q = a - k q^2; the slope of y against x is -k.
  return -cov / var;
}

}  // namespace ringlab
