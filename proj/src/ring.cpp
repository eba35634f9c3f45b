#include "ringlab/ring.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ringlab {

namespace {

void require_twist_range(int n, int q) {
  if (n < 2) throw std::invalid_argument("twisted state: n >= 2 required");
  if (2 * std::abs(q) >= n)
    throw std::invalid_argument("twisted state: |q| < n/2 required (n=" +
                                std::to_string(n) + ", q=" + std::to_string(q) +
                                ")");
}

}  // namespace

RingState twisted_ring_state(int n, int q, double anchor) {
  require_twist_range(n, q);
  RingState s;
  s.theta.resize(n);
  for (int j = 0; j < n; ++j)
    s.theta[j] = wrap_angle(anchor + kTwoPi * q * j / n);
  return s;
}

DiffState twisted_diff_state(int n, int q) {
  require_twist_range(n, q);
  DiffState d;
  d.eta.assign(n, wrap_angle(kTwoPi * q / n));
  return d;
}

DiffState theta_to_eta(const RingState& s) {
  const int n = s.n();
  DiffState d;
  d.eta.resize(n);
  for (int i = 0; i < n; ++i)
    d.eta[i] = wrap_angle(s.theta[(i + 1) % n] - s.theta[i]);
  return d;
}

RingState eta_to_theta(const DiffState& d, double anchor) {
  const int n = d.n();
  double sum = 0.0;
  for (double e : d.eta) sum += e;
  const double excess = std::fabs(std::remainder(sum, kTwoPi));
  if (excess > 1e-9)
    throw std::invalid_argument(
        "eta_to_theta: entries do not sum to a multiple of 2*pi (excess " +
        std::to_string(excess) + ")");
  RingState s;
  s.theta.resize(n);
  s.theta[0] = wrap_angle(anchor);
  for (int i = 0; i + 1 < n; ++i)
    s.theta[i + 1] = wrap_angle(s.theta[i] + d.eta[i]);
  return s;
}

std::vector<double> rhs_theta(const RingState& s, const CouplingSpec& c) {
  const int n = s.n();
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double fwd = s.theta[(i + 1) % n] - s.theta[i];
    const double bwd = s.theta[(i + n - 1) % n] - s.theta[i];
    out[i] = c.eval(fwd) + c.eval(bwd);
  }
  return out;
}

std::vector<double> rhs_eta(const DiffState& d, const CouplingSpec& c) {
  const int n = d.n();
  std::vector<double> fe(n), out(n);
  for (int i = 0; i < n; ++i) fe[i] = c.eval(d.eta[i]);
  for (int i = 0; i < n; ++i)
    out[i] = fe[(i + 1) % n] - 2.0 * fe[i] + fe[(i + n - 1) % n];
  return out;
}

namespace {

bool on_boundary(const DiffState& d) {
  for (double e : d.eta)
    if (std::fabs(e) >= kPi - kBoundaryTol) return true;
  return false;
}

}  // namespace

std::optional<int> winding_number(const DiffState& d) {
  if (on_boundary(d)) return std::nullopt;
  double sum = 0.0;
  for (double e : d.eta) sum += e;
  return static_cast<int>(std::llround(sum / kTwoPi));
}

std::optional<int> winding_number_partial(const DiffState& d) {
  if (on_boundary(d)) return std::nullopt;
  double sum = 0.0;
  for (int i = 0; i + 1 < d.n(); ++i) sum += d.eta[i];
  return static_cast<int>(std::llround(sum / kTwoPi));
}

double energy(const DiffState& d, const CouplingSpec& c) {
  double e = 0.0;
  for (double x : d.eta) e += c.eval_antiderivative(x);
  return e;
}

}  // namespace ringlab
