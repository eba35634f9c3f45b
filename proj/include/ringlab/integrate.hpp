#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ringlab/ring.hpp"

namespace ringlab {

// Energy may not increase between accepted steps by more than this slack.
inline constexpr double kEnergySlack = 1e-9;

struct IntegrationOptions {
  double abs_tol = 1e-9;
  double rel_tol = 1e-7;
  double t_max = 1e5;
  double conv_tol = 1e-8;    // convergence: ||rhs_eta||_inf below this
  double twist_tol = 1e-5;   // max-norm proximity check to the twisted state
  int snapshot_stride = 1;   // record every k-th accepted step
  double h_init = 0.0;       // 0 = choose automatically
  double h_max = 10.0;
};

struct TrajectoryRecord {
  int n = 0;
  std::string coupling_id;

  // Snapshots (always include t = 0 and the final accepted state).
  std::vector<double> times;
  std::vector<DiffState> states;
  std::vector<double> energies;
  std::vector<std::optional<int>> winding;

  bool converged = false;
  long long steps_taken = 0;  // accepted steps
  double final_time = 0.0;
  double final_residual = 0.0;  // ||rhs_eta||_inf at the final state

  // Diagnostics tracked at every accepted step, not just snapshots.
  double max_abs_eta = 0.0;        // max_t max_i |eta_i(t)|, before re-wrap
  long long wrap_events = 0;       // accepted steps where re-wrap triggered
  long long energy_violations = 0; // energy rose by more than kEnergySlack
  bool winding_constant = true;    // no change between defined windings
  std::optional<int> initial_winding;
  std::optional<int> final_winding;

  // Set on convergence for strictly increasing couplings: is the final state
  // within twist_tol (max norm on eta) of the twisted state predicted by the
  // initial winding?
  std::optional<bool> twist_proximity_ok;

  const DiffState& final_state() const { return states.back(); }
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, TrajectoryRecord partial_record)
      : std::runtime_error(what), partial(std::move(partial_record)) {}
  TrajectoryRecord partial;
};

// Integrates the phase-difference flow with an adaptive embedded
// Runge-Kutta 5(4) scheme (Dormand-Prince pair). Stops when
// ||rhs_eta||_inf < conv_tol (converged) or t reaches t_max (not
// converged). Eta is re-wrapped into (-pi, pi] after every accepted step;
// for strictly increasing couplings a triggered wrap would signal an
// invariance violation and is counted in wrap_events.
//
// Throws IntegrationError (with the partial record) on step-size underflow
// or a non-finite state.
TrajectoryRecord integrate(const DiffState& d0, const CouplingSpec& c,
                           const IntegrationOptions& opts = {});

// Snapshot table: t, eta_1..eta_n, E, q (q empty where ill-defined).
void write_trajectory_csv(const TrajectoryRecord& rec, std::ostream& out);

// Run metadata as JSON.
void write_trajectory_meta_json(const TrajectoryRecord& rec, std::ostream& out);

}  // namespace ringlab
