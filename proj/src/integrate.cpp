#include "ringlab/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "ringlab/io.hpp"

namespace ringlab {

namespace {

// Dormand-Prince 5(4) coefficients (7 stages, FSAL).
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - bhat: weights of the embedded 4th-order error estimate.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

TrajectoryRecord integrate(const DiffState& d0, const CouplingSpec& c,
                           const IntegrationOptions& opts) {
  const int n = d0.n();
  if (n < 2) throw std::invalid_argument("integrate: n >= 2 required");

  TrajectoryRecord rec;
  rec.n = n;
  rec.coupling_id = c.id;

  DiffState y = d0;
  for (double& e : y.eta) e = wrap_angle(e);

  auto rhs = [&](const DiffState& s) { return rhs_eta(s, c); };

  auto snapshot = [&](double t, const std::vector<double>& k) {
    rec.times.push_back(t);
    rec.states.push_back(y);
    rec.energies.push_back(energy(y, c));
    rec.winding.push_back(winding_number(y));
    rec.final_time = t;
    rec.final_residual = inf_norm(k);
  };

  std::vector<double> k1 = rhs(y);
  rec.initial_winding = winding_number(y);
  rec.max_abs_eta = inf_norm(y.eta);
  snapshot(0.0, k1);

  double prev_energy = rec.energies.front();
  std::optional<int> prev_winding = rec.winding.front();

  auto finish = [&](bool converged) {
    rec.converged = converged;
    rec.final_winding = winding_number(y);
    if (converged && c.strictly_increasing && rec.initial_winding) {
      const double target = kTwoPi * (*rec.initial_winding) / n;
      double prox = 0.0;
      for (double e : y.eta) prox = std::max(prox, circular_distance(e, target));
      rec.twist_proximity_ok = prox < opts.twist_tol;
    }
    return rec;
  };

  if (inf_norm(k1) < opts.conv_tol) return finish(true);  // already at rest

  double t = 0.0;
  double h = opts.h_init > 0.0
                 ? opts.h_init
                 : std::min(opts.h_max, 0.1 / (1.0 + inf_norm(k1)));

  std::vector<double> y2(n), y3(n), y4(n), y5(n), y6(n), ynew(n);
  DiffState stage;
  stage.eta.resize(n);

  while (t < opts.t_max) {
    h = std::min(h, opts.t_max - t);

    auto at = [&](const std::vector<double>& v) -> const DiffState& {
      stage.eta = v;
      return stage;
    };

    for (int i = 0; i < n; ++i) y2[i] = y.eta[i] + h * a21 * k1[i];
    const auto k2 = rhs(at(y2));
    for (int i = 0; i < n; ++i)
      y3[i] = y.eta[i] + h * (a31 * k1[i] + a32 * k2[i]);
    const auto k3 = rhs(at(y3));
    for (int i = 0; i < n; ++i)
      y4[i] = y.eta[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    const auto k4 = rhs(at(y4));
    for (int i = 0; i < n; ++i)
      y5[i] = y.eta[i] +
              h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    const auto k5 = rhs(at(y5));
    for (int i = 0; i < n; ++i)
      y6[i] = y.eta[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                              a64 * k4[i] + a65 * k5[i]);
    const auto k6 = rhs(at(y6));
    for (int i = 0; i < n; ++i)
      ynew[i] = y.eta[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                b5 * k5[i] + b6 * k6[i]);
    const auto k7 = rhs(at(ynew));  // FSAL: also the rhs at the new point

    double err = 0.0;
    bool finite = true;
    for (int i = 0; i < n; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                             e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc =
          opts.abs_tol +
          opts.rel_tol * std::max(std::fabs(y.eta[i]), std::fabs(ynew[i]));
      err += (ei / sc) * (ei / sc);
      finite = finite && std::isfinite(ynew[i]);
    }
    err = std::sqrt(err / n);
    if (!finite || !std::isfinite(err))
      throw IntegrationError("integrate: non-finite state encountered", rec);

    if (err <= 1.0) {
      t += h;
      ++rec.steps_taken;
      rec.max_abs_eta = std::max(rec.max_abs_eta, inf_norm(ynew));

      bool wrapped = false;
      for (int i = 0; i < n; ++i) {
        if (ynew[i] > kPi || ynew[i] <= -kPi) {
          ynew[i] = wrap_angle(ynew[i]);
          wrapped = true;
        }
      }
      if (wrapped) ++rec.wrap_events;

      y.eta = ynew;
      k1 = k7;  // exact: rhs is invariant under the re-wrap

      const double E = energy(y, c);
      if (E > prev_energy + kEnergySlack) ++rec.energy_violations;
      prev_energy = E;
      const auto q = winding_number(y);
      if (q && prev_winding && *q != *prev_winding) rec.winding_constant = false;
      if (q) prev_winding = q;

      const double residual = inf_norm(k1);
      const bool converged = residual < opts.conv_tol;
      const bool at_tmax = t >= opts.t_max;
      if (converged || at_tmax || rec.steps_taken % opts.snapshot_stride == 0) {
        if (rec.times.back() != t) snapshot(t, k1);
      }
      if (converged) return finish(true);
    }

    const double shrink =
        err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(shrink, 0.2, 5.0);
    h = std::min(h, opts.h_max);
    if (h < 1e-13 * std::max(1.0, std::fabs(t)))
      throw IntegrationError("integrate: step size underflow", rec);
  }

  if (rec.times.back() != t) snapshot(t, k1);
  return finish(false);
}

void write_trajectory_csv(const TrajectoryRecord& rec, std::ostream& out) {
  out << "t";
  for (int i = 1; i <= rec.n; ++i) out << ",eta_" << i;
  out << ",E,q\n";
  for (size_t k = 0; k < rec.times.size(); ++k) {
    out << io::format_double(rec.times[k]);
    for (double e : rec.states[k].eta) out << ',' << io::format_double(e);
    out << ',' << io::format_double(rec.energies[k]) << ',';
    if (rec.winding[k]) out << *rec.winding[k];
    out << '\n';
  }
}

void write_trajectory_meta_json(const TrajectoryRecord& rec, std::ostream& out) {
  nlohmann::json j;
  j["n"] = rec.n;
  j["coupling"] = rec.coupling_id;
  j["converged"] = rec.converged;
  j["steps_taken"] = rec.steps_taken;
  j["final_time"] = rec.final_time;
  j["final_residual"] = rec.final_residual;
  j["max_abs_eta"] = rec.max_abs_eta;
  j["wrap_events"] = rec.wrap_events;
  j["energy_violations"] = rec.energy_violations;
  j["winding_constant"] = rec.winding_constant;
  j["snapshots"] = rec.times.size();
  if (rec.initial_winding) j["initial_winding"] = *rec.initial_winding;
  if (rec.final_winding) j["final_winding"] = *rec.final_winding;
  if (rec.twist_proximity_ok) j["twist_proximity_ok"] = *rec.twist_proximity_ok;
  out << j.dump(2) << '\n';
}

}  // namespace ringlab
