#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "ringlab/census.hpp"
#include "ringlab/ring.hpp"

namespace ringlab {

// Unit vector in R^n (Euclidean norm 1).
struct RayDirection {
  std::vector<double> v;
  int n() const { return static_cast<int>(v.size()); }
};

struct CrossingEvent {
  double lambda;
  int q_before;
  int q_after;
};

struct RayResult {
  int q_start = 0;
  double T = 0.0;
  double step = 0.0;
  long long samples = 0;
  long long boundary_samples = 0;         // excluded from occupation
  std::map<int, double> occupation;       // fraction of all samples per winding
  long long crossings = 0;                // winding changes between samples
  std::optional<double> first_exit;       // refined to 1e-9; nullopt = never left
  std::vector<CrossingEvent> crossing_log;
};

struct SummaryStats {
  double mean = 0.0;
  double median = 0.0;
  double q10 = 0.0;
  double q90 = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct HeadStats {
  int n = 0;
  long long trials = 0;
  std::uint64_t seed = 0;
  SummaryStats lambda_stars;   // first-exit lengths, closed form
  SummaryStats w_inf;          // ||Av||_inf over sampled directions
  double lambda_ratio = 0.0;   // median(lambda*) / sqrt(n / log n)
  double w_inf_ratio = 0.0;    // median(||Av||_inf) / (2 sqrt(log n / n))
  double r_q_exact = 0.0;      // inscribed-ball radius pi/sqrt(2)
};

struct DistanceSummary {
  int n = 0;
  long long trials = 0;
  std::optional<int> q_filter;
  std::uint64_t seed = 0;
  double mean_d = 0.0;
  double std_d = 0.0;
  double mean_d2 = 0.0;
  double var_d2 = 0.0;  // unbiased sample variance of d^2
  long long rejected = 0;
  double hist_lo = 0.0, hist_hi = 0.0;
  std::vector<long long> histogram;
};

// l2 distance on phases, normalized by n: sqrt(mean_i d_i^2) with d_i the
// circular distance of the i-th coordinates. Throws on dimension mismatch.
double torus_distance(const RingState& a, const RingState& b);

// Distance from uniform random states to a fixed reference point (the
// twisted state of q_filter, or the origin when unconditioned). Conditioning
// on a winding class is done by rejection; the operation refuses filters
// whose predicted acceptance rate is below 1e-4.
DistanceSummary master_distance_experiment(int n, long long trials,
                                           std::optional<int> q_filter,
                                           std::uint64_t seed, int threads = 1,
                                           int histogram_bins = 100);

// Number of indices i <= n-1 whose eta_i lies within circular distance delta
// of pi. Requires delta in (0, pi).
int boundary_proximity_count(const DiffState& d, double delta);

// Uniform direction on the sphere S^{n-1}: normalized standard normals.
RayDirection sample_ray_direction(int n, std::uint64_t seed);

// Walks the ray theta^{(q_start)} + lambda v for lambda in [0, T] with the
// given step, classifying each sample by winding number. Requires
// step <= 0.01 * pi / ||Av||_inf so no coordinate can cross a boundary
// unseen. first_exit is bisection-refined to 1e-9.
RayResult ray_survey(int q_start, const RayDirection& v, double T, double step);

// Pick the largest step allowed by the survey precondition.
double max_survey_step(const RayDirection& v);

// First exit length along v from the basin of the q_start-twisted state, in
// closed form: the smallest lambda at which some coordinate of
// eta = 2*pi*q/n + lambda * Av reaches +-pi. For q_start = 0 this is
// pi / ||Av||_inf. Throws when v is proportional to the constant vector
// (the ray stays inside the basin forever).
double lambda_star_closed_form(const RayDirection& v, int q_start);

// Samples directions and evaluates the exit length in closed form.
HeadStats head_statistics(int n, long long trials, std::uint64_t seed,
                          int threads = 1);

}  // namespace ringlab
