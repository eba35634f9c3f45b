#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "ringlab/integrate.hpp"
#include "ringlab/ring.hpp"

namespace ringlab {

// Largest n served by the exact uniform-sum oracle. The alternating Irwin-Hall
// sum is evaluated in quadruple precision; at n = 80 the worst intermediate
// term is ~1e12, leaving ~20 correct digits after cancellation. Beyond that,
// callers are pointed at gaussian_prediction.
inline constexpr int kExactMeasureMaxN = 80;

struct CensusResult {
  int n = 0;
  long long trials = 0;
  std::uint64_t seed = 0;
  std::map<int, long long> counts;     // winding -> occurrences
  std::map<int, double> empirical;     // counts / trials
  std::map<int, double> exact;         // uniform-sum oracle (n <= 80)
  std::map<int, double> gaussian;      // sqrt(6/(pi n)) exp(-6 q^2 / n)
  double k_hat = 0.0;                  // NaN when the fit is not possible
  long long boundary_rejections = 0;
};

// First n-1 entries i.i.d. uniform on (-pi, pi], last entry closes the sum
// to a multiple of 2*pi. Deterministic function of the seed.
DiffState sample_uniform_diffstate(int n, std::uint64_t seed);

// Histogram of the winding number over uniform random states. No
// integration: basin membership is decided by the initial condition alone.
// Boundary states (some |eta_i| within 1e-12 of pi) are resampled within the
// trial's own stream and counted in boundary_rejections.
CensusResult initial_winding_census(int n, long long trials, std::uint64_t seed,
                                    int threads = 1);

struct DynamicalCensusOptions {
  IntegrationOptions integration;
  int threads = 1;
  // Refuse couplings that fail strict monotonicity unless explicitly allowed.
  bool allow_non_monotone = false;
};

struct DynamicalCensusResult {
  CensusResult census;         // histogram over final windings (converged only)
  std::string coupling_id;
  long long mismatches = 0;    // converged trials with final != initial winding
  long long non_converged = 0; // excluded from the census counts
};

// Cross-validation census: every sample is integrated to convergence and the
// final winding is compared with the initial one.
DynamicalCensusResult dynamical_census(int n, long long trials,
                                       const CouplingSpec& coupling,
                                       std::uint64_t seed,
                                       const DynamicalCensusOptions& opts = {});

// P(q - 1/2 < S <= q + 1/2) for S a sum of n-1 i.i.d. uniform(-1/2, 1/2]
// variables: the exact basin measure of winding class q. Symmetric in q by
// construction (the sign of q is canonicalized before evaluation).
// Requires 2 <= n <= kExactMeasureMaxN and |q| < n/2.
double exact_basin_measure(int n, int q);

// Independent check of exact_basin_measure: the uniform-sum CDF computed by
// sliding-window quadrature on a grid (trapezoid for the first convolution,
// Simpson afterwards; cells_per_unit grid cells per unit length). Agrees
// with the alternating-sum oracle to well below 1e-8.
double grid_convolution_basin_measure(int n, int q, int cells_per_unit = 16384);
std::map<int, double> grid_convolution_basin_measures(int n,
                                                      int cells_per_unit = 16384);

// Gaussian limit of the basin measure: sqrt(6/(pi n)) * exp(-6 q^2 / n).
double gaussian_prediction(int n, int q);

// Weighted least-squares slope of log(empirical[q]) against -q^2 (weights =
// counts), over bins with at least min_count samples. Throws if fewer than
// three such bins exist.
double fit_decay_constant(const CensusResult& result, long long min_count = 100);

}  // namespace ringlab
