#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ringlab/angles.hpp"

namespace ringlab {

// A nearest-neighbour coupling function: odd, 2*pi-periodic, C^1 on
// (-pi, pi), together with its derivative and antiderivative.
//
// f and f_prime take arguments already in (-pi, pi]; use eval()/eval_prime()
// for arbitrary reals (they wrap first, which is how the 2*pi-periodization
// is realized). F is the antiderivative with F(0) = 0; it is even whenever
// f is odd. At the half-open endpoint the one-sided limit f(pi^-) is used.
struct CouplingSpec {
  std::string id;
  std::function<double(double)> f;
  std::function<double(double)> f_prime;
  std::function<double(double)> F;
  bool strictly_increasing = false;  // true iff f' > 0 everywhere on (-pi, pi)

  double eval(double x) const { return f(wrap_angle(x)); }
  double eval_prime(double x) const { return f_prime(wrap_angle(x)); }
  double eval_antiderivative(double x) const { return F(wrap_angle(x)); }
};

// Built-in couplings:
//   sawtooth  f(x) = x          F(x) = x^2/2
//   half-sine f(x) = sin(x/2)   F(x) = 2 - 2 cos(x/2)
//   tanh-pi   f(x) = tanh(x)    F(x) = log cosh(x)
//   sine      f(x) = sin(x)     F(x) = 1 - cos(x)   (not strictly increasing)
CouplingSpec builtin_coupling(const std::string& id);
std::vector<std::string> builtin_coupling_ids();

struct HypothesisCheck {
  bool pass = false;
  double worst = 0.0;      // worst observed value (meaning depends on check)
  double witness_x = 0.0;  // probe point where the worst value occurred
};

struct ValidationReport {
  int probes = 0;
  HypothesisCheck odd_symmetry;       // worst = max |f(x) + f(-x)|
  HypothesisCheck monotonicity;       // worst = min f'(x); pass iff > 0
  HypothesisCheck antiderivative;     // worst = max scaled |F' - f| (central FD)
  bool jump_at_pi = false;            // periodization jump at +-pi
  double jump_magnitude = 0.0;        // |f(pi^-) - f(-pi^+)|

  bool all_pass() const {
    return odd_symmetry.pass && monotonicity.pass && antiderivative.pass;
  }
};

// Checks odd symmetry and strict monotonicity of f on a uniform probe grid
// in (-pi, pi) (endpoints excluded by half a grid step), verifies F' = f by
// central finite differences, and reports whether the periodization jumps
// at +-pi. Failures are report entries, never exceptions.
ValidationReport validate_hypotheses(const CouplingSpec& spec, int probes = 4096);

// Coupling from tabulated samples (x strictly increasing, covering
// [-pi, pi]) using monotone cubic (Fritsch-Carlson) interpolation. The
// antiderivative is the exact piecewise integral of the interpolant,
// shifted so F(0) = 0. strictly_increasing is set from a probe sweep of
// the interpolant's derivative.
CouplingSpec make_tabulated_coupling(std::string id, std::vector<double> x,
                                     std::vector<double> y);

// Loads the two-column CSV table format: header line required, then rows
// "x,f(x)" with strictly increasing x covering [-pi, pi].
CouplingSpec load_coupling_table(const std::string& csv_path);

}  // namespace ringlab
