#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "ringlab/coupling.hpp"
#include "ringlab/rng.hpp"

using namespace ringlab;

TEST_CASE("wrap_angle canonical values") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(3.0 * kPi) == kPi);   // 3*pi - 2*pi, boundary maps to +pi
  CHECK(wrap_angle(-kPi) == kPi);        // interval is half-open at -pi
  CHECK(wrap_angle(kPi) == kPi);
  CHECK(wrap_angle(kTwoPi) == 0.0);
  CHECK(wrap_angle(1.0) == 1.0);
  CHECK(wrap_angle(-2.5) == -2.5);
  CHECK_THROWS_AS(wrap_angle(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(wrap_angle(INFINITY), std::invalid_argument);
}

TEST_CASE("wrap_angle range and congruence on random inputs") {
  SplitMix64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double x = (rng.uniform01() - 0.5) * 100.0;
    const double r = wrap_angle(x);
    CHECK(r > -kPi);
    CHECK(r <= kPi);
    CHECK(std::fabs(std::remainder(r - x, kTwoPi)) < 1e-9);
  }
}

TEST_CASE("builtin couplings: periodization is exact") {
  // f(wrap(x + 2*pi)) == f(wrap(x)) bit-for-bit: the wrapped arguments agree.
  for (const auto& id : builtin_coupling_ids()) {
    const CouplingSpec c = builtin_coupling(id);
    SplitMix64 rng(11);
    for (int i = 0; i < 10000; ++i) {
      const double x = (rng.uniform01() - 0.5) * 20.0;
      CHECK(c.eval(x + kTwoPi) == c.eval(x));
    }
  }
}

TEST_CASE("builtin couplings: oddness, F(0)=0, F even") {
  for (const auto& id : builtin_coupling_ids()) {
    const CouplingSpec c = builtin_coupling(id);
    CAPTURE(id);
    CHECK(c.F(0.0) == 0.0);
    double worst_odd = 0.0, worst_even = 0.0;
    for (int j = 0; j < 1000; ++j) {
      const double x = -kPi + (j + 0.5) * (kTwoPi / 1000);
      worst_odd = std::max(worst_odd, std::fabs(c.f(x) + c.f(-x)));
      worst_even = std::max(worst_even, std::fabs(c.F(x) - c.F(-x)));
    }
    CHECK(worst_odd < 1e-12);
    CHECK(worst_even < 1e-12);
  }
}

TEST_CASE("validate_hypotheses: sine fails monotonicity") {
  const CouplingSpec sine = builtin_coupling("sine");
  const ValidationReport rep = validate_hypotheses(sine);
  CHECK(rep.odd_symmetry.pass);
  CHECK_FALSE(rep.monotonicity.pass);
  CHECK(rep.monotonicity.worst < 0.0);
  // x = 2.0 witnesses the failure: f'(2) = cos(2) < 0.
  CHECK(sine.f_prime(2.0) < 0.0);
  CHECK(rep.antiderivative.pass);
  CHECK_FALSE(rep.jump_at_pi);  // sin is continuous through +-pi
  CHECK_FALSE(rep.all_pass());
}

TEST_CASE("validate_hypotheses: sawtooth passes with a jump at +-pi") {
  const ValidationReport rep = validate_hypotheses(builtin_coupling("sawtooth"));
  CHECK(rep.all_pass());
  CHECK(rep.monotonicity.worst == 1.0);
  CHECK(rep.jump_at_pi);
  CHECK(rep.jump_magnitude == doctest::Approx(kTwoPi).epsilon(1e-2));
}

TEST_CASE("validate_hypotheses: half-sine and tanh-pi pass") {
  for (const char* id : {"half-sine", "tanh-pi"}) {
    const ValidationReport rep = validate_hypotheses(builtin_coupling(id));
    CAPTURE(id);
    CHECK(rep.all_pass());
    CHECK(rep.monotonicity.worst > 0.0);
    CHECK(rep.odd_symmetry.worst < 1e-12);
    CHECK(rep.antiderivative.worst < 1e-6);
  }
}

TEST_CASE("validate_hypotheses rejects too few probes") {
  CHECK_THROWS_AS(validate_hypotheses(builtin_coupling("sawtooth"), 2),
                  std::invalid_argument);
}

TEST_CASE("unknown builtin id throws") {
  CHECK_THROWS_AS(builtin_coupling("kuramoto"), std::invalid_argument);
}

namespace {

std::vector<double> grid(int m) {
  std::vector<double> xs(m);
  for (int i = 0; i < m; ++i) xs[i] = -kPi + kTwoPi * i / (m - 1);
  return xs;
}

}  // namespace

TEST_CASE("tabulated coupling reproduces sawtooth exactly") {
  // Fritsch-Carlson slopes on linear data give back the straight line.
  const auto xs = grid(201);
  std::vector<double> ys(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) ys[i] = xs[i];
  const CouplingSpec t = make_tabulated_coupling("saw-table", xs, ys);
  CHECK(t.strictly_increasing);
  for (double x : {-3.0, -1.2, 0.0, 0.7, 2.9}) {
    CHECK(t.f(x) == doctest::Approx(x).epsilon(1e-12));
    CHECK(t.f_prime(x) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(t.F(x) == doctest::Approx(0.5 * x * x).epsilon(1e-10));
  }
  CHECK(validate_hypotheses(t).all_pass());
}

TEST_CASE("tabulated coupling interpolates half-sine accurately") {
  const auto xs = grid(401);
  std::vector<double> ys(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) ys[i] = std::sin(0.5 * xs[i]);
  const CouplingSpec t = make_tabulated_coupling("half-sine-table", xs, ys);
  CHECK(t.strictly_increasing);
  const CouplingSpec ref = builtin_coupling("half-sine");
  double worst = 0.0;
  for (int j = 0; j < 1000; ++j) {
    const double x = -kPi + (j + 0.5) * (kTwoPi / 1000);
    worst = std::max(worst, std::fabs(t.f(x) - ref.f(x)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("tabulated sine is flagged as non-monotone") {
  const auto xs = grid(401);
  std::vector<double> ys(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) ys[i] = std::sin(xs[i]);
  const CouplingSpec t = make_tabulated_coupling("sine-table", xs, ys);
  CHECK_FALSE(t.strictly_increasing);
  CHECK_FALSE(validate_hypotheses(t).monotonicity.pass);
}

TEST_CASE("coupling table CSV loader") {
  const std::string path = "coupling_table_test.csv";
  {
    std::ofstream out(path);
    out << "x,f\n";
    const auto xs = grid(101);
    for (double x : xs) out << x << "," << std::tanh(x) << "\n";
  }
  const CouplingSpec t = load_coupling_table(path);
  CHECK(t.strictly_increasing);
  CHECK(t.f(1.0) == doctest::Approx(std::tanh(1.0)).epsilon(1e-6));
  std::remove(path.c_str());

  CHECK_THROWS(load_coupling_table("does_not_exist.csv"));
}

TEST_CASE("coupling table rejects bad input") {
  CHECK_THROWS_AS(
      make_tabulated_coupling("bad", {0.0, 1.0, 0.5, 2.0}, {0, 1, 2, 3}),
      std::invalid_argument);  // not increasing
  CHECK_THROWS_AS(make_tabulated_coupling("bad", {-1.0, 0.0, 0.5, 1.0},
                                          {0, 1, 2, 3}),
                  std::invalid_argument);  // does not cover [-pi, pi]
  CHECK_THROWS_AS(make_tabulated_coupling("bad", {-kPi, 0.0, kPi}, {0, 1, 2}),
                  std::invalid_argument);  // too few rows

  const std::string path = "coupling_table_malformed.csv";
  {
    std::ofstream out(path);
    out << "x,f\n0.0,zero\n";
  }
  CHECK_THROWS(load_coupling_table(path));
  std::remove(path.c_str());
}
