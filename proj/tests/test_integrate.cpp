#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "ringlab/census.hpp"
#include "ringlab/integrate.hpp"
#include "ringlab/rng.hpp"

using namespace ringlab;

namespace {

double dist_to_twist(const DiffState& d, int q) {
  const double target = kTwoPi * q / d.n();
  double worst = 0.0;
  for (double e : d.eta) worst = std::max(worst, circular_distance(e, target));
  return worst;
}

// Uniform sample conditioned on all |eta_i| < pi/2 (rejection on the closing
// entry).
DiffState sample_in_half_region(SplitMix64& rng, int n) {
  for (;;) {
    DiffState d;
    d.eta.resize(n);
    double sum = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
      d.eta[i] = (0.5 - rng.uniform01()) * kPi;  // (-pi/2, pi/2]
      sum += d.eta[i];
    }
    d.eta[n - 1] = wrap_angle(-sum);
    if (std::fabs(d.eta[n - 1]) < kPi / 2) return d;
  }
}

}  // namespace

TEST_CASE("integrate: exact twisted state converges immediately") {
  const auto rec =
      integrate(twisted_diff_state(6, 1), builtin_coupling("sawtooth"));
  CHECK(rec.converged);
  CHECK(rec.steps_taken == 0);
  CHECK(rec.final_time == 0.0);
  CHECK(rec.final_winding == 1);
  REQUIRE(rec.twist_proximity_ok.has_value());
  CHECK(*rec.twist_proximity_ok);
}

TEST_CASE("integrate: small perturbation returns to the twisted state") {
  SplitMix64 rng(41);
  DiffState d0 = twisted_diff_state(6, 0);
  double shift = 0.0;
  for (int i = 0; i + 1 < 6; ++i) {
    const double delta = 0.01 * (2.0 * rng.uniform01() - 1.0);
    d0.eta[i] += delta;
    shift += delta;
  }
  d0.eta[5] = wrap_angle(d0.eta[5] - shift);  // keep the sum in 2*pi*Z

  const auto rec = integrate(d0, builtin_coupling("sawtooth"));
  CHECK(rec.converged);
  CHECK(rec.initial_winding == 0);
  CHECK(rec.final_winding == 0);
  CHECK(rec.winding_constant);
  CHECK(dist_to_twist(rec.final_state(), 0) < 1e-5);
  REQUIRE(rec.twist_proximity_ok.has_value());
  CHECK(*rec.twist_proximity_ok);
  for (const auto& q : rec.winding) CHECK(q == 0);
}

TEST_CASE("integrate: conservation, invariance and descent at n = 20") {
  const CouplingSpec hs = builtin_coupling("half-sine");
  const int n = 20;
  int converged = 0;
  for (int trial = 0; trial < 100; ++trial) {
    SplitMix64 rng(trial_seed(2024, trial));
    DiffState d0 = sample_uniform_diffstate(n, trial_seed(2024, trial));
    const auto q0 = winding_number(d0);
    REQUIRE(q0.has_value());

    const auto rec = integrate(d0, hs);
    if (rec.converged) ++converged;
    CHECK(rec.converged);
    CHECK(rec.final_winding == *q0);
    CHECK(rec.winding_constant);
    CHECK(rec.max_abs_eta < kPi);       // the region never leaks
    CHECK(rec.wrap_events == 0);
    CHECK(rec.energy_violations == 0);  // gradient flow descends
    REQUIRE(rec.twist_proximity_ok.has_value());
    CHECK(*rec.twist_proximity_ok);

    // Snapshot energies are non-increasing within the slack.
    for (size_t k = 1; k < rec.energies.size(); ++k)
      CHECK(rec.energies[k] <= rec.energies[k - 1] + kEnergySlack);
  }
  CHECK(converged == 100);
}

TEST_CASE("integrate: sine coupling changes winding for some random states") {
  const CouplingSpec sine = builtin_coupling("sine");
  const int n = 20;
  IntegrationOptions opts;
  opts.snapshot_stride = 1 << 30;  // diagnostics only, skip dense snapshots

  int changed = 0, converged = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const DiffState d0 = sample_uniform_diffstate(n, trial_seed(555, trial));
    const auto q0 = winding_number(d0);
    REQUIRE(q0.has_value());
    const auto rec = integrate(d0, sine, opts);
    if (!rec.converged) continue;
    ++converged;
    if (rec.final_winding && *rec.final_winding != *q0) ++changed;
  }
  INFO("sine winding changes: ", changed, " of ", converged, " converged");
  CHECK(changed > 0);
}

TEST_CASE("integrate: sine conserves winding inside the half region") {
  const CouplingSpec sine = builtin_coupling("sine");
  const int n = 20;
  IntegrationOptions opts;
  opts.snapshot_stride = 1 << 30;
  for (int trial = 0; trial < 100; ++trial) {
    SplitMix64 rng(trial_seed(777, trial));
    const DiffState d0 = sample_in_half_region(rng, n);
    const auto q0 = winding_number(d0);
    REQUIRE(q0.has_value());
    const auto rec = integrate(d0, sine, opts);
    CHECK(rec.converged);
    CHECK(rec.winding_constant);
    CHECK(rec.final_winding == *q0);
  }
}

TEST_CASE("integrate: non-finite coupling raises with a partial record") {
  CouplingSpec broken;
  broken.id = "broken";
  broken.f = [](double) { return std::numeric_limits<double>::quiet_NaN(); };
  broken.f_prime = [](double) { return 0.0; };
  broken.F = [](double) { return 0.0; };

  DiffState d0;
  d0.eta = {0.5, -0.5, 0.0};
  try {
    integrate(d0, broken);
    FAIL("expected IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(e.partial.times.size() >= 1);
    CHECK(e.partial.times.front() == 0.0);
  }
}

TEST_CASE("integrate: t_max reached reports non-convergence") {
  IntegrationOptions opts;
  opts.t_max = 1e-3;  // far too short to converge
  const DiffState d0 = sample_uniform_diffstate(10, 99);
  const auto rec = integrate(d0, builtin_coupling("half-sine"), opts);
  CHECK_FALSE(rec.converged);
  CHECK(rec.final_time == doctest::Approx(1e-3));
}

TEST_CASE("trajectory serialization") {
  const DiffState d0 = sample_uniform_diffstate(5, 4);
  IntegrationOptions opts;
  opts.snapshot_stride = 10;
  const auto rec = integrate(d0, builtin_coupling("sawtooth"), opts);

  std::ostringstream csv;
  write_trajectory_csv(rec, csv);
  std::istringstream lines(csv.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "t,eta_1,eta_2,eta_3,eta_4,eta_5,E,q");
  size_t rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == rec.times.size());

  std::ostringstream meta;
  write_trajectory_meta_json(rec, meta);
  CHECK(meta.str().find("\"converged\": true") != std::string::npos);
  CHECK(meta.str().find("\"coupling\": \"sawtooth\"") != std::string::npos);
}

TEST_CASE("integrate: snapshots honor the stride but keep the endpoints") {
  const DiffState d0 = sample_uniform_diffstate(8, 12);
  IntegrationOptions opts;
  opts.snapshot_stride = 1000000;  // only endpoints survive
  const auto rec = integrate(d0, builtin_coupling("half-sine"), opts);
  CHECK(rec.converged);
  CHECK(rec.times.size() == 2);
  CHECK(rec.times.front() == 0.0);
  CHECK(rec.times.back() == rec.final_time);
}
