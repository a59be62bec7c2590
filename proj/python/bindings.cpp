#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mfcoop/costs.hpp"
#include "mfcoop/deviation.hpp"
#include "mfcoop/equilibria.hpp"
#include "mfcoop/error.hpp"
#include "mfcoop/incentives.hpp"
#include "mfcoop/model.hpp"

namespace py = pybind11;
using namespace mfcoop;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Linear-quadratic mean field cooperation lab";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result(
      [&]() { return py::exception<Error>(m, "Error", PyExc_RuntimeError); });
  // Raised as Error(code_name, message).
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error_type.get_stored(), py::make_tuple(to_string(e.code()), e.what()));
    }
  });

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double q, double T, double x0, double sigma) { return ModelParams{q, T, x0, sigma}; }),
           py::arg("q") = 0.0, py::arg("T") = 1.0, py::arg("x0") = 1.0, py::arg("sigma") = 1.0)
      .def_readwrite("q", &ModelParams::q)
      .def_readwrite("T", &ModelParams::T)
      .def_readwrite("x0", &ModelParams::x0)
      .def_readwrite("sigma", &ModelParams::sigma)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(q=" + std::to_string(p.q) + ", T=" + std::to_string(p.T) +
               ", x0=" + std::to_string(p.x0) + ", sigma=" + std::to_string(p.sigma) + ")";
      });

  py::class_<TimeGrid>(m, "TimeGrid")
      .def_readonly("horizon", &TimeGrid::horizon)
      .def_readonly("n_steps", &TimeGrid::n_steps)
      .def_property_readonly("dt", &TimeGrid::dt)
      .def("t", &TimeGrid::t);
  m.def("make_grid", &make_grid, py::arg("params"), py::arg("n_steps") = 2000);

  py::class_<ModelDiagnostics>(m, "ModelDiagnostics")
      .def_readonly("mfg_singular", &ModelDiagnostics::mfg_singular)
      .def_readonly("mfc_singular", &ModelDiagnostics::mfc_singular)
      .def_readonly("mfg_degenerate", &ModelDiagnostics::mfg_degenerate)
      .def_readonly("mfc_degenerate", &ModelDiagnostics::mfc_degenerate)
      .def_readonly("monotone", &ModelDiagnostics::monotone)
      .def_readonly("contraction_constant", &ModelDiagnostics::contraction_constant);
  m.def("validate", &validate, py::arg("params"), py::arg("grid"));

  py::class_<FbodeSolution>(m, "FbodeSolution")
      .def_readonly("eta", &FbodeSolution::eta)
      .def_readonly("r", &FbodeSolution::r)
      .def_readonly("s", &FbodeSolution::s)
      .def_readonly("xbar", &FbodeSolution::xbar)
      .def_readonly("xbar_T", &FbodeSolution::xbar_T);

  py::class_<Equilibrium>(m, "Equilibrium")
      .def_property_readonly("kind", [](const Equilibrium& e) { return to_string(e.kind); })
      .def_readonly("parameter", &Equilibrium::parameter)
      .def_readonly("solution", &Equilibrium::solution)
      .def_readonly("cost", &Equilibrium::cost)
      .def_readonly("xbar_T", &Equilibrium::xbar_T);

  py::class_<PPartialEquilibrium>(m, "PPartialEquilibrium")
      .def_readonly("p", &PPartialEquilibrium::p)
      .def_readonly("deviator", &PPartialEquilibrium::deviator)
      .def_readonly("xbar_mfc_T", &PPartialEquilibrium::xbar_mfc_T)
      .def_readonly("population_xbar_T", &PPartialEquilibrium::population_xbar_T)
      .def_readonly("hat_J_p", &PPartialEquilibrium::hat_J_p)
      .def_readonly("star_J_p", &PPartialEquilibrium::star_J_p);

  auto grid_or_default = [](const ModelParams& p, std::optional<TimeGrid> g) {
    return g ? *g : make_grid(p);
  };
  m.def("solve_mfg", [=](const ModelParams& p, std::optional<TimeGrid> g) { return solve_mfg(p, grid_or_default(p, g)); },
        py::arg("params"), py::arg("grid") = py::none());
  m.def("solve_mfc", [=](const ModelParams& p, std::optional<TimeGrid> g) { return solve_mfc(p, grid_or_default(p, g)); },
        py::arg("params"), py::arg("grid") = py::none());
  m.def("solve_p_partial",
        [=](const ModelParams& p, double pp, std::optional<TimeGrid> g) {
          return solve_p_partial(p, pp, grid_or_default(p, g));
        },
        py::arg("params"), py::arg("p"), py::arg("grid") = py::none());
  m.def("solve_lambda_interpolated",
        [=](const ModelParams& p, double lam, std::optional<TimeGrid> g) {
          return solve_lambda_interpolated(p, lam, grid_or_default(p, g));
        },
        py::arg("params"), py::arg("lam"), py::arg("grid") = py::none());
  m.def("best_response",
        [=](const ModelParams& p, double env, std::optional<TimeGrid> g) {
          return best_response(p, EnvironmentMean{env}, grid_or_default(p, g));
        },
        py::arg("params"), py::arg("env_xbar_T"), py::arg("grid") = py::none());

  py::class_<CostReport>(m, "CostReport")
      .def_readonly("p", &CostReport::p)
      .def_readonly("hat_J_p", &CostReport::hat_J_p)
      .def_readonly("star_J_p", &CostReport::star_J_p)
      .def_readonly("J_star", &CostReport::J_star)
      .def_readonly("hat_J_0", &CostReport::hat_J_0)
      .def_readonly("hat_J_1", &CostReport::hat_J_1)
      .def_readonly("PoI", &CostReport::PoI)
      .def_readonly("PoA", &CostReport::PoA);
  m.def("cost_report",
        [=](const ModelParams& p, double pp, std::optional<TimeGrid> g) {
          return cost_report(p, pp, grid_or_default(p, g));
        },
        py::arg("params"), py::arg("p") = 0.0, py::arg("grid") = py::none());

  py::class_<AdjointDiagnostic>(m, "AdjointDiagnostic")
      .def_readonly("Y_path", &AdjointDiagnostic::Y_path)
      .def_readonly("integral_Y_sq", &AdjointDiagnostic::integral_Y_sq)
      .def_readonly("vanishes", &AdjointDiagnostic::vanishes);
  m.def("poi_adjoint", [=](const ModelParams& p, std::optional<TimeGrid> g) { return poi_adjoint(p, grid_or_default(p, g)); },
        py::arg("params"), py::arg("grid") = py::none());

  py::class_<PStarResult>(m, "PStarResult")
      .def_property_readonly("status", [](const PStarResult& r) { return to_string(r.status); })
      .def_readonly("p_star", &PStarResult::p_star)
      .def_readonly("gap", &PStarResult::gap)
      .def_readonly("J_star", &PStarResult::J_star);
  m.def("p_star",
        [=](const ModelParams& p, double tol, std::optional<TimeGrid> g) { return p_star(p, grid_or_default(p, g), tol); },
        py::arg("params"), py::arg("tol") = 1e-12, py::arg("grid") = py::none());

  py::class_<ValueMatchingReport>(m, "ValueMatchingReport")
      .def_readonly("value_gap", &ValueMatchingReport::value_gap)
      .def_readonly("probe_value_gap", &ValueMatchingReport::probe_value_gap)
      .def_readonly("control_gap", &ValueMatchingReport::control_gap);
  m.def("verify_value_matching",
        [=](const ModelParams& p, double tol, std::optional<TimeGrid> g) {
          return verify_value_matching(p, grid_or_default(p, g), tol);
        },
        py::arg("params"), py::arg("tol") = 1e-5, py::arg("grid") = py::none());

  py::class_<IterationRecord>(m, "IterationRecord")
      .def_readonly("n", &IterationRecord::n)
      .def_readonly("Q_n", &IterationRecord::Q_n)
      .def_readonly("population_xbar_T", &IterationRecord::population_xbar_T)
      .def_readonly("best_response_xbar_T", &IterationRecord::best_response_xbar_T)
      .def_readonly("residual", &IterationRecord::residual);
  py::class_<IterationTrace>(m, "IterationTrace")
      .def_readonly("records", &IterationTrace::records)
      .def_readonly("converged", &IterationTrace::converged)
      .def_readonly("limit", &IterationTrace::limit)
      .def_readonly("p_star_inf", &IterationTrace::p_star_inf)
      .def_readonly("condition_constant", &IterationTrace::condition_constant)
      .def_readonly("C_x", &IterationTrace::C_x)
      .def_readonly("distance_to_partial", &IterationTrace::distance_to_partial);
  m.def("run_fixed_point",
        [=](const ModelParams& p, std::vector<double> ps, int N, double tol, std::optional<TimeGrid> g) {
          return run_fixed_point(p, ps, N, tol, grid_or_default(p, g));
        },
        py::arg("params"), py::arg("p_sequence"), py::arg("N"), py::arg("tol") = 1e-12,
        py::arg("grid") = py::none());
  m.def("run_constant_deviation",
        [=](const ModelParams& p, double pp, int N, double tol, std::optional<TimeGrid> g) {
          return run_fixed_point(p, WeightSchedule::constant(pp), N, tol, grid_or_default(p, g));
        },
        py::arg("params"), py::arg("p"), py::arg("N"), py::arg("tol") = 1e-12, py::arg("grid") = py::none());
  m.def("run_fictitious_play",
        [=](const ModelParams& p, double q_tilde, int N, std::optional<TimeGrid> g) {
          return run_fictitious_play(p, q_tilde, N, grid_or_default(p, g));
        },
        py::arg("params"), py::arg("q_tilde"), py::arg("N"), py::arg("grid") = py::none());
  m.def("identify_limit",
        [=](const ModelParams& p, double ps, std::optional<TimeGrid> g) {
          return identify_limit(p, ps, grid_or_default(p, g));
        },
        py::arg("params"), py::arg("p_star"), py::arg("grid") = py::none());
  m.def("check_convergence_condition", [](const ModelParams& p) {
    const ConvergenceCondition c = check_convergence_condition(p);
    return py::make_tuple(c.constant, c.satisfied);
  });
}
