#include "ringlab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "ringlab/ring.hpp"

namespace ringlab {

namespace {
constexpr double kZeroEig = 1e-12;
}

const char* to_string(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::stable: return "stable";
    case StabilityVerdict::unstable: return "unstable";
    case StabilityVerdict::marginal: return "marginal";
  }
  return "?";
}

SpectrumReport twisted_spectrum(int n, int q, const CouplingSpec& c) {
  if (n < 2) throw std::invalid_argument("twisted_spectrum: n >= 2");
  if (2 * std::abs(q) >= n)
    throw std::invalid_argument("twisted_spectrum: |q| < n/2 required");

  SpectrumReport rep;
  rep.n = n;
  rep.q = q;
  rep.coupling_id = c.id;
  rep.fprime_at_twist = c.eval_prime(kTwoPi * q / n);
  if (!std::isfinite(rep.fprime_at_twist))
    throw std::domain_error("twisted_spectrum: f' undefined at 2*pi*q/n");

  rep.eigenvalues.resize(n);
  double max_nonzero = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const double s = std::sin(kPi * k / n);
    rep.eigenvalues[k] = -4.0 * rep.fprime_at_twist * s * s;
    if (k != 0) max_nonzero = std::max(max_nonzero, rep.eigenvalues[k]);
  }
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
            std::greater<double>());
  rep.max_nonzero_eigenvalue = max_nonzero;

  if (max_nonzero < -kZeroEig)
    rep.verdict = StabilityVerdict::stable;
  else if (max_nonzero > kZeroEig)
    rep.verdict = StabilityVerdict::unstable;
  else
    rep.verdict = StabilityVerdict::marginal;
  rep.stable = rep.verdict == StabilityVerdict::stable;
  return rep;
}

std::vector<double> numerical_twisted_spectrum(int n, int q,
                                               const CouplingSpec& c,
                                               double fd_step) {
  const DiffState twist = twisted_diff_state(n, q);

  // Dense central-difference Jacobian of rhs_eta; no circulant structure
  // assumed, that is the point of the cross-check.
  Eigen::MatrixXd J(n, n);
  DiffState plus = twist, minus = twist;
  for (int j = 0; j < n; ++j) {
    plus.eta[j] = twist.eta[j] + fd_step;
    minus.eta[j] = twist.eta[j] - fd_step;
    const auto fp = rhs_eta(plus, c);
    const auto fm = rhs_eta(minus, c);
    for (int i = 0; i < n; ++i) J(i, j) = (fp[i] - fm[i]) / (2.0 * fd_step);
    plus.eta[j] = twist.eta[j];
    minus.eta[j] = twist.eta[j];
  }

  // The Jacobian at a twisted state is symmetric; symmetrize away the
  // finite-difference noise and use a selfadjoint solver.
  const Eigen::MatrixXd S = 0.5 * (J + J.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("numerical_twisted_spectrum: eigensolver failed");

  std::vector<double> eig(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + n);
  std::sort(eig.begin(), eig.end(), std::greater<double>());
  return eig;
}

std::map<int, StabilityVerdict> stability_table(int n, const CouplingSpec& c) {
  if (n < 3) throw std::invalid_argument("stability_table: n >= 3");
  std::map<int, StabilityVerdict> table;
  const int qmax = (n - 1) / 2;
  for (int q = -qmax; q <= qmax; ++q)
    table[q] = twisted_spectrum(n, q, c).verdict;
  return table;
}

}  // namespace ringlab
