#pragma once

#include <map>
#include <string>
#include <vector>

#include "ringlab/coupling.hpp"

namespace ringlab {

// Linearization at a twisted state is inconclusive when f'(2*pi*q/n) = 0;
// such states are reported as marginal, never stable.
enum class StabilityVerdict { stable, unstable, marginal };

const char* to_string(StabilityVerdict v);

struct SpectrumReport {
  int n = 0;
  int q = 0;
  std::string coupling_id;
  double fprime_at_twist = 0.0;
  std::vector<double> eigenvalues;       // sorted descending, size n
  double max_nonzero_eigenvalue = 0.0;   // largest over the n-1 non-constant modes
  StabilityVerdict verdict = StabilityVerdict::marginal;
  bool stable = false;
};

// Spectrum of the phase-difference flow linearized at the q-twisted state:
// lambda_k = -4 f'(2*pi*q/n) sin^2(pi k / n), k = 0..n-1 (circulant
// second-difference structure; k = 0 is the zero mode from rotation
// symmetry). Requires |q| < n/2.
SpectrumReport twisted_spectrum(int n, int q, const CouplingSpec& c);

// Independent cross-check: eigenvalues of the dense central-difference
// Jacobian of rhs_eta at the twisted state, sorted descending.
std::vector<double> numerical_twisted_spectrum(int n, int q,
                                               const CouplingSpec& c,
                                               double fd_step = 1e-6);

// Verdict for every twisted state |q| < n/2.
std::map<int, StabilityVerdict> stability_table(int n, const CouplingSpec& c);

}  // namespace ringlab
