#include <doctest.h>

#include <cmath>

#include "ringlab/census.hpp"
#include "ringlab/ring.hpp"
#include "ringlab/rng.hpp"

using namespace ringlab;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::fabs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("theta_to_eta basics") {
  RingState zero;
  zero.theta = {0, 0, 0, 0};
  const DiffState d0 = theta_to_eta(zero);
  for (double e : d0.eta) CHECK(e == 0.0);

  const DiffState tw = theta_to_eta(twisted_ring_state(10, 2));
  for (double e : tw.eta) CHECK(e == doctest::Approx(kTwoPi / 5).epsilon(1e-14));

  RingState s;
  s.theta = {0.0, kPi / 2, kPi, -kPi / 2};
  const DiffState d = theta_to_eta(s);
  for (double e : d.eta) CHECK(e == doctest::Approx(kPi / 2).epsilon(1e-14));
  double sum = 0.0;
  for (double e : d.eta) sum += e;
  CHECK(sum == doctest::Approx(kTwoPi).epsilon(1e-14));
}

TEST_CASE("eta_to_theta section and round trips") {
  DiffState z;
  z.eta.assign(6, 0.0);
  const RingState s = eta_to_theta(z, 0.0);
  for (double t : s.theta) CHECK(t == 0.0);

  const RingState tw = eta_to_theta(twisted_diff_state(8, 1), 0.0);
  for (int j = 0; j < 8; ++j)
    CHECK(tw.theta[j] == doctest::Approx(wrap_angle(kTwoPi * j / 8)).epsilon(1e-13));

  for (int trial = 0; trial < 100; ++trial) {
    const DiffState d = sample_uniform_diffstate(9, trial_seed(99, trial));
    const DiffState back = theta_to_eta(eta_to_theta(d, 0.3));
    CHECK(max_abs_diff(d.eta, back.eta) < 1e-12);
  }

  DiffState bad;
  bad.eta = {1.0, 1.0, 1.0};  // sum = 3, not a multiple of 2*pi
  CHECK_THROWS_AS(eta_to_theta(bad), std::invalid_argument);
}

TEST_CASE("twisted state range checks") {
  CHECK_THROWS_AS(twisted_diff_state(10, 5), std::invalid_argument);
  CHECK_THROWS_AS(twisted_ring_state(10, -5), std::invalid_argument);
  CHECK_NOTHROW(twisted_diff_state(10, 4));
  CHECK_NOTHROW(twisted_diff_state(11, 5));
}

TEST_CASE("rhs_theta: twisted states are equilibria") {
  for (const auto& id : builtin_coupling_ids()) {
    const CouplingSpec c = builtin_coupling(id);
    const auto rhs = rhs_theta(twisted_ring_state(12, 3), c);
    for (double r : rhs) CHECK(std::fabs(r) < 1e-14);
  }
}

TEST_CASE("rhs_theta: direct evaluation and zero-sum") {
  const CouplingSpec saw = builtin_coupling("sawtooth");
  RingState s;
  s.theta = {0.0, 1.0, 0.0};
  const auto rhs = rhs_theta(s, saw);
  CHECK(rhs[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rhs[1] == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(rhs[2] == doctest::Approx(1.0).epsilon(1e-14));

  for (const auto& id : builtin_coupling_ids()) {
    const CouplingSpec c = builtin_coupling(id);
    SplitMix64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
      RingState r;
      r.theta.resize(7);
      for (double& t : r.theta) t = rng.uniform_angle();
      double sum = 0.0;
      for (double v : rhs_theta(r, c)) sum += v;
      CHECK(std::fabs(sum) < 1e-12);
    }
  }
}

TEST_CASE("rhs_eta: direct evaluation, zero-sum, and chain-rule consistency") {
  const CouplingSpec saw = builtin_coupling("sawtooth");

  const auto zero = rhs_eta(twisted_diff_state(5, 1), saw);
  for (double r : zero) CHECK(std::fabs(r) < 1e-14);

  DiffState d;
  d.eta = {1.0, -1.0, 0.0};
  const auto rhs = rhs_eta(d, saw);
  CHECK(rhs[0] == doctest::Approx(-3.0).epsilon(1e-14));
  CHECK(rhs[1] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(rhs[2] == doctest::Approx(0.0).epsilon(1e-14));

  // d(eta_i)/dt = rhs_theta_{i+1} - rhs_theta_i.
  const CouplingSpec hs = builtin_coupling("half-sine");
  SplitMix64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    RingState s;
    s.theta.resize(8);
    for (double& t : s.theta) t = rng.uniform_angle();
    const auto rt = rhs_theta(s, hs);
    const auto re = rhs_eta(theta_to_eta(s), hs);
    for (int i = 0; i < 8; ++i)
      CHECK(std::fabs(re[i] - (rt[(i + 1) % 8] - rt[i])) < 1e-12);

    double sum = 0.0;
    for (double v : re) sum += v;
    CHECK(std::fabs(sum) < 1e-12);
  }
}

TEST_CASE("winding_number basics") {
  DiffState z;
  z.eta.assign(5, 0.0);
  CHECK(winding_number(z) == 0);

  CHECK(winding_number(twisted_diff_state(10, 2)) == 2);

  DiffState d;
  d.eta = {2.0, 2.0, 2.0, wrap_angle(-6.0)};
  REQUIRE(winding_number(d));
  CHECK(*winding_number(d) == 1);

  DiffState boundary;
  boundary.eta = {kPi, -kPi / 2, -kPi / 2};
  CHECK_FALSE(winding_number(boundary).has_value());
}

TEST_CASE("winding_number agrees with the partial-sum form") {
  for (int trial = 0; trial < 1000; ++trial) {
    const DiffState d = sample_uniform_diffstate(12, trial_seed(3, trial));
    const auto full = winding_number(d);
    const auto part = winding_number_partial(d);
    REQUIRE(full.has_value());
    REQUIRE(part.has_value());
    CHECK(*full == *part);
  }
}

TEST_CASE("energy values and convexity lower bound") {
  const CouplingSpec saw = builtin_coupling("sawtooth");

  DiffState z;
  z.eta.assign(7, 0.0);
  for (const auto& id : builtin_coupling_ids())
    CHECK(energy(z, builtin_coupling(id)) == 0.0);

  for (int n : {6, 11, 20}) {
    for (int q = -(n - 1) / 2; q <= (n - 1) / 2; ++q) {
      const double expected = 2.0 * kPi * kPi * q * q / n;
      CHECK(energy(twisted_diff_state(n, q), saw) ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  }

  // Any state with winding q has at least the twisted state's energy.
  for (int trial = 0; trial < 200; ++trial) {
    const DiffState d = sample_uniform_diffstate(15, trial_seed(8, trial));
    const auto q = winding_number(d);
    REQUIRE(q.has_value());
    CHECK(energy(d, saw) >= 2.0 * kPi * kPi * (*q) * (*q) / 15 - 1e-12);
  }
}

TEST_CASE("rhs_theta equals minus the finite-difference energy gradient") {
  const CouplingSpec hs = builtin_coupling("half-sine");
  const int n = 20;
  const double h = 1e-6;
  SplitMix64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    RingState s;
    s.theta.resize(n);
    for (double& t : s.theta) t = rng.uniform_angle();
    const auto rhs = rhs_theta(s, hs);

    double rhs_norm = 0.0, err_norm = 0.0;
    for (int i = 0; i < n; ++i) {
      RingState plus = s, minus = s;
      plus.theta[i] += h;
      minus.theta[i] -= h;
      const double grad = (energy(theta_to_eta(plus), hs) -
                           energy(theta_to_eta(minus), hs)) /
                          (2.0 * h);
      err_norm = std::max(err_norm, std::fabs(rhs[i] + grad));
      rhs_norm = std::max(rhs_norm, std::fabs(rhs[i]));
    }
    CHECK(err_norm <= 1e-5 * std::max(1.0, rhs_norm));
  }
}
