#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ringlab/census.hpp"
#include "ringlab/coupling.hpp"
#include "ringlab/geometry.hpp"
#include "ringlab/integrate.hpp"
#include "ringlab/ring.hpp"
#include "ringlab/stability.hpp"
#include "ringlab/version.hpp"

namespace py = pybind11;
using namespace ringlab;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Basins of attraction in coupled oscillator rings";
  m.attr("__version__") = kVersion;
  m.attr("PI") = kPi;

  m.def("wrap_angle", &wrap_angle, py::arg("x"),
        "Canonical representative of x on the circle, in (-pi, pi]");

  // --- coupling ---
  py::class_<CouplingSpec>(m, "CouplingSpec")
      .def_readonly("id", &CouplingSpec::id)
      .def_readonly("strictly_increasing", &CouplingSpec::strictly_increasing)
      .def("__call__", &CouplingSpec::eval, py::arg("x"))
      .def("prime", &CouplingSpec::eval_prime, py::arg("x"))
      .def("antiderivative", &CouplingSpec::eval_antiderivative, py::arg("x"));

  py::class_<HypothesisCheck>(m, "HypothesisCheck")
      .def_readonly("pass_", &HypothesisCheck::pass)
      .def_readonly("worst", &HypothesisCheck::worst)
      .def_readonly("witness_x", &HypothesisCheck::witness_x);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("probes", &ValidationReport::probes)
      .def_readonly("odd_symmetry", &ValidationReport::odd_symmetry)
      .def_readonly("monotonicity", &ValidationReport::monotonicity)
      .def_readonly("antiderivative", &ValidationReport::antiderivative)
      .def_readonly("jump_at_pi", &ValidationReport::jump_at_pi)
      .def_readonly("jump_magnitude", &ValidationReport::jump_magnitude)
      .def("all_pass", &ValidationReport::all_pass);

  m.def("builtin_coupling", &builtin_coupling, py::arg("id"));
  m.def("builtin_coupling_ids", &builtin_coupling_ids);
  m.def("validate_hypotheses", &validate_hypotheses, py::arg("spec"),
        py::arg("probes") = 4096);
  m.def("make_tabulated_coupling", &make_tabulated_coupling, py::arg("id"),
        py::arg("x"), py::arg("y"));
  m.def("load_coupling_table", &load_coupling_table, py::arg("csv_path"));

  // --- ring dynamics ---
  py::class_<RingState>(m, "RingState")
      .def(py::init([](std::vector<double> theta) {
             RingState s;
             s.theta = std::move(theta);
             return s;
           }),
           py::arg("theta"))
      .def_readonly("theta", &RingState::theta)
      .def_property_readonly("n", &RingState::n);

  py::class_<DiffState>(m, "DiffState")
      .def(py::init([](std::vector<double> eta) {
             DiffState d;
             d.eta = std::move(eta);
             return d;
           }),
           py::arg("eta"))
      .def_readonly("eta", &DiffState::eta)
      .def_property_readonly("n", &DiffState::n);

  m.def("twisted_ring_state", &twisted_ring_state, py::arg("n"), py::arg("q"),
        py::arg("anchor") = 0.0);
  m.def("twisted_diff_state", &twisted_diff_state, py::arg("n"), py::arg("q"));
  m.def("theta_to_eta", &theta_to_eta, py::arg("state"));
  m.def("eta_to_theta", &eta_to_theta, py::arg("diff"), py::arg("anchor") = 0.0);
  m.def("rhs_theta", &rhs_theta, py::arg("state"), py::arg("coupling"));
  m.def("rhs_eta", &rhs_eta, py::arg("diff"), py::arg("coupling"));
  m.def("winding_number", &winding_number, py::arg("diff"));
  m.def("winding_number_partial", &winding_number_partial, py::arg("diff"));
  m.def("energy", &energy, py::arg("diff"), py::arg("coupling"));

  py::class_<IntegrationOptions>(m, "IntegrationOptions")
      .def(py::init<>())
      .def_readwrite("abs_tol", &IntegrationOptions::abs_tol)
      .def_readwrite("rel_tol", &IntegrationOptions::rel_tol)
      .def_readwrite("t_max", &IntegrationOptions::t_max)
      .def_readwrite("conv_tol", &IntegrationOptions::conv_tol)
      .def_readwrite("twist_tol", &IntegrationOptions::twist_tol)
      .def_readwrite("snapshot_stride", &IntegrationOptions::snapshot_stride)
      .def_readwrite("h_init", &IntegrationOptions::h_init)
      .def_readwrite("h_max", &IntegrationOptions::h_max);

  py::class_<TrajectoryRecord>(m, "TrajectoryRecord")
      .def_readonly("n", &TrajectoryRecord::n)
      .def_readonly("coupling_id", &TrajectoryRecord::coupling_id)
      .def_readonly("times", &TrajectoryRecord::times)
      .def_readonly("energies", &TrajectoryRecord::energies)
      .def_readonly("winding", &TrajectoryRecord::winding)
      .def_readonly("converged", &TrajectoryRecord::converged)
      .def_readonly("steps_taken", &TrajectoryRecord::steps_taken)
      .def_readonly("final_time", &TrajectoryRecord::final_time)
      .def_readonly("final_residual", &TrajectoryRecord::final_residual)
      .def_readonly("max_abs_eta", &TrajectoryRecord::max_abs_eta)
      .def_readonly("wrap_events", &TrajectoryRecord::wrap_events)
      .def_readonly("energy_violations", &TrajectoryRecord::energy_violations)
      .def_readonly("winding_constant", &TrajectoryRecord::winding_constant)
      .def_readonly("initial_winding", &TrajectoryRecord::initial_winding)
      .def_readonly("final_winding", &TrajectoryRecord::final_winding)
      .def_readonly("twist_proximity_ok", &TrajectoryRecord::twist_proximity_ok)
      .def_property_readonly(
          "states",
          [](const TrajectoryRecord& r) {
            std::vector<std::vector<double>> out;
            out.reserve(r.states.size());
            for (const auto& s : r.states) out.push_back(s.eta);
            return out;
          })
      .def("final_state", &TrajectoryRecord::final_state);

  m.def("integrate", &integrate, py::arg("d0"), py::arg("coupling"),
        py::arg("options") = IntegrationOptions{},
        py::call_guard<py::gil_scoped_release>());

  // --- basin census ---
  py::class_<CensusResult>(m, "CensusResult")
      .def_readonly("n", &CensusResult::n)
      .def_readonly("trials", &CensusResult::trials)
      .def_readonly("seed", &CensusResult::seed)
      .def_readonly("counts", &CensusResult::counts)
      .def_readonly("empirical", &CensusResult::empirical)
      .def_readonly("exact", &CensusResult::exact)
      .def_readonly("gaussian", &CensusResult::gaussian)
      .def_readonly("k_hat", &CensusResult::k_hat)
      .def_readonly("boundary_rejections", &CensusResult::boundary_rejections);

  py::class_<DynamicalCensusResult>(m, "DynamicalCensusResult")
      .def_readonly("census", &DynamicalCensusResult::census)
      .def_readonly("coupling_id", &DynamicalCensusResult::coupling_id)
      .def_readonly("mismatches", &DynamicalCensusResult::mismatches)
      .def_readonly("non_converged", &DynamicalCensusResult::non_converged);

  m.def("sample_uniform_diffstate", &sample_uniform_diffstate, py::arg("n"),
        py::arg("seed"));
  m.def("initial_winding_census", &initial_winding_census, py::arg("n"),
        py::arg("trials"), py::arg("seed"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "dynamical_census",
      [](int n, long long trials, const CouplingSpec& c, std::uint64_t seed,
         int threads, bool allow_non_monotone) {
        DynamicalCensusOptions opts;
        opts.threads = threads;
        opts.allow_non_monotone = allow_non_monotone;
        py::gil_scoped_release release;
        return dynamical_census(n, trials, c, seed, opts);
      },
      py::arg("n"), py::arg("trials"), py::arg("coupling"), py::arg("seed"),
      py::arg("threads") = 1, py::arg("allow_non_monotone") = false);
  m.def("exact_basin_measure", &exact_basin_measure, py::arg("n"), py::arg("q"));
  m.def("grid_convolution_basin_measure", &grid_convolution_basin_measure,
        py::arg("n"), py::arg("q"), py::arg("cells_per_unit") = 16384);
  m.def("gaussian_prediction", &gaussian_prediction, py::arg("n"), py::arg("q"));
  m.def("fit_decay_constant", &fit_decay_constant, py::arg("result"),
        py::arg("min_count") = 100);

  // --- geometry ---
  py::class_<RayDirection>(m, "RayDirection")
      .def(py::init([](std::vector<double> v) {
             RayDirection d;
             d.v = std::move(v);
             return d;
           }),
           py::arg("v"))
      .def_readonly("v", &RayDirection::v)
      .def_property_readonly("n", &RayDirection::n);

  py::class_<CrossingEvent>(m, "CrossingEvent")
      .def_readonly("lambda_", &CrossingEvent::lambda)
      .def_readonly("q_before", &CrossingEvent::q_before)
      .def_readonly("q_after", &CrossingEvent::q_after);

  py::class_<RayResult>(m, "RayResult")
      .def_readonly("q_start", &RayResult::q_start)
      .def_readonly("T", &RayResult::T)
      .def_readonly("step", &RayResult::step)
      .def_readonly("samples", &RayResult::samples)
      .def_readonly("boundary_samples", &RayResult::boundary_samples)
      .def_readonly("occupation", &RayResult::occupation)
      .def_readonly("crossings", &RayResult::crossings)
      .def_readonly("first_exit", &RayResult::first_exit)
      .def_readonly("crossing_log", &RayResult::crossing_log);

  py::class_<SummaryStats>(m, "SummaryStats")
      .def_readonly("mean", &SummaryStats::mean)
      .def_readonly("median", &SummaryStats::median)
      .def_readonly("q10", &SummaryStats::q10)
      .def_readonly("q90", &SummaryStats::q90)
      .def_readonly("min", &SummaryStats::min)
      .def_readonly("max", &SummaryStats::max);

  py::class_<HeadStats>(m, "HeadStats")
      .def_readonly("n", &HeadStats::n)
      .def_readonly("trials", &HeadStats::trials)
      .def_readonly("seed", &HeadStats::seed)
      .def_readonly("lambda_stars", &HeadStats::lambda_stars)
      .def_readonly("w_inf", &HeadStats::w_inf)
      .def_readonly("lambda_ratio", &HeadStats::lambda_ratio)
      .def_readonly("w_inf_ratio", &HeadStats::w_inf_ratio)
      .def_readonly("r_q_exact", &HeadStats::r_q_exact);

  py::class_<DistanceSummary>(m, "DistanceSummary")
      .def_readonly("n", &DistanceSummary::n)
      .def_readonly("trials", &DistanceSummary::trials)
      .def_readonly("q_filter", &DistanceSummary::q_filter)
      .def_readonly("seed", &DistanceSummary::seed)
      .def_readonly("mean_d", &DistanceSummary::mean_d)
      .def_readonly("std_d", &DistanceSummary::std_d)
      .def_readonly("mean_d2", &DistanceSummary::mean_d2)
      .def_readonly("var_d2", &DistanceSummary::var_d2)
      .def_readonly("rejected", &DistanceSummary::rejected)
      .def_readonly("hist_lo", &DistanceSummary::hist_lo)
      .def_readonly("hist_hi", &DistanceSummary::hist_hi)
      .def_readonly("histogram", &DistanceSummary::histogram);

  m.def("torus_distance", &torus_distance, py::arg("a"), py::arg("b"));
  m.def("master_distance_experiment", &master_distance_experiment, py::arg("n"),
        py::arg("trials"), py::arg("q_filter"), py::arg("seed"),
        py::arg("threads") = 1, py::arg("histogram_bins") = 100,
        py::call_guard<py::gil_scoped_release>());
  m.def("boundary_proximity_count", &boundary_proximity_count, py::arg("diff"),
        py::arg("delta"));
  m.def("sample_ray_direction", &sample_ray_direction, py::arg("n"),
        py::arg("seed"));
  m.def("ray_survey", &ray_survey, py::arg("q_start"), py::arg("v"),
        py::arg("T"), py::arg("step"),
        py::call_guard<py::gil_scoped_release>());
  m.def("max_survey_step", &max_survey_step, py::arg("v"));
  m.def("lambda_star_closed_form", &lambda_star_closed_form, py::arg("v"),
        py::arg("q_start") = 0);
  m.def("head_statistics", &head_statistics, py::arg("n"), py::arg("trials"),
        py::arg("seed"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());

  // --- stability ---
  py::enum_<StabilityVerdict>(m, "StabilityVerdict")
      .value("stable", StabilityVerdict::stable)
      .value("unstable", StabilityVerdict::unstable)
      .value("marginal", StabilityVerdict::marginal);

  py::class_<SpectrumReport>(m, "SpectrumReport")
      .def_readonly("n", &SpectrumReport::n)
      .def_readonly("q", &SpectrumReport::q)
      .def_readonly("coupling_id", &SpectrumReport::coupling_id)
      .def_readonly("fprime_at_twist", &SpectrumReport::fprime_at_twist)
      .def_readonly("eigenvalues", &SpectrumReport::eigenvalues)
      .def_readonly("max_nonzero_eigenvalue",
                    &SpectrumReport::max_nonzero_eigenvalue)
      .def_readonly("verdict", &SpectrumReport::verdict)
      .def_readonly("stable", &SpectrumReport::stable);

  m.def("twisted_spectrum", &twisted_spectrum, py::arg("n"), py::arg("q"),
        py::arg("coupling"));
  m.def("numerical_twisted_spectrum", &numerical_twisted_spectrum, py::arg("n"),
        py::arg("q"), py::arg("coupling"), py::arg("fd_step") = 1e-6);
  m.def("stability_table", &stability_table, py::arg("n"), py::arg("coupling"));
}
