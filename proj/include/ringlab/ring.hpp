#pragma once

#include <optional>
#include <vector>

#include "ringlab/coupling.hpp"

namespace ringlab {

// Some |eta_i| >= pi - kBoundaryTol marks a state as lying on (or too close
// to) the set where the winding number is ill-defined.
inline constexpr double kBoundaryTol = 1e-12;

// Phases of n oscillators on a ring, each angle in (-pi, pi].
struct RingState {
  std::vector<double> theta;
  int n() const { return static_cast<int>(theta.size()); }
};

// Phase differences eta_i = theta_{i+1} - theta_i (indices cyclic), each in
// (-pi, pi]. The sum of all entries is a multiple of 2*pi.
struct DiffState {
  std::vector<double> eta;
  int n() const { return static_cast<int>(eta.size()); }
};

// The q-twisted equilibrium: phases advance by 2*pi*q/n per site.
// Requires |q| < n/2.
RingState twisted_ring_state(int n, int q, double anchor = 0.0);
DiffState twisted_diff_state(int n, int q);

DiffState theta_to_eta(const RingState& s);

// Section of the quotient map: theta_1 = anchor, then cumulative sums.
// Throws if the entries of d do not sum to a multiple of 2*pi (tol 1e-9).
RingState eta_to_theta(const DiffState& d, double anchor = 0.0);

// dtheta_i/dt = f(theta_{i+1} - theta_i) + f(theta_{i-1} - theta_i).
// Components sum to zero by oddness of f.
std::vector<double> rhs_theta(const RingState& s, const CouplingSpec& c);

// deta_i/dt = f(eta_{i+1}) - 2 f(eta_i) + f(eta_{i-1}): the discrete
// Laplacian of f on the cycle. Telescopes to zero-sum.
std::vector<double> rhs_eta(const DiffState& d, const CouplingSpec& c);

// Winding number round(sum(eta)/2pi); nullopt when some |eta_i| is within
// kBoundaryTol of pi (ill-defined on the boundary).
std::optional<int> winding_number(const DiffState& d);

// Same integer computed as the nearest integer to sum(eta_1..eta_{n-1})/2pi.
std::optional<int> winding_number_partial(const DiffState& d);

// E = sum_j F(eta_j). The flow is the gradient descent of E; for strictly
// increasing couplings the unique minimizer on each winding class is the
// twisted state.
double energy(const DiffState& d, const CouplingSpec& c);

}  // namespace ringlab
