#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "chromsim/errors.hpp"
#include "chromsim/ideal.hpp"
#include "chromsim/isotherm.hpp"
#include "chromsim/mmocaa.hpp"
#include "chromsim/reference.hpp"
#include "chromsim/report.hpp"
#include "chromsim/scenario.hpp"
#include "chromsim/study.hpp"

namespace py = pybind11;
using namespace chromsim;

namespace {

std::vector<std::vector<double>> matrix_rows(const CouplingMatrix& m) {
  std::vector<std::vector<double>> rows(m.m, std::vector<double>(m.m));
  for (int i = 0; i < m.m; ++i)
    for (int j = 0; j < m.m; ++j) rows[i][j] = m(i, j);
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Semi-Lagrangian multi-component liquid chromatography solver";
  mod.attr("__version__") = kVersion;

  py::register_exception<ValidationError>(mod, "ScenarioError", PyExc_ValueError);
  py::register_exception<SolverError>(mod, "SolverError", PyExc_RuntimeError);
  py::register_exception<IoError>(mod, "IoError", PyExc_OSError);

  py::class_<ColumnSpec>(mod, "ColumnSpec")
      .def(py::init<>())
      .def_readwrite("length", &ColumnSpec::length)
      .def_readwrite("velocity", &ColumnSpec::velocity)
      .def_readwrite("porosity", &ColumnSpec::porosity)
      .def_readwrite("phase_ratio", &ColumnSpec::phase_ratio)
      .def_readwrite("plate_count", &ColumnSpec::plate_count)
      .def_readwrite("diffusion", &ColumnSpec::diffusion);

  py::class_<IsothermParams>(mod, "IsothermParams")
      .def(py::init<>())
      .def_readwrite("a", &IsothermParams::a)
      .def_readwrite("b", &IsothermParams::b)
      .def_readwrite("phase_ratio", &IsothermParams::phase_ratio)
      .def_property_readonly("m", &IsothermParams::components);

  py::class_<InjectionProfile>(mod, "InjectionProfile")
      .def(py::init<>())
      .def_readwrite("feed", &InjectionProfile::feed)
      .def_readwrite("t_inj", &InjectionProfile::duration);

  py::class_<GridSpec>(mod, "GridSpec")
      .def(py::init<>())
      .def_readwrite("n_x", &GridSpec::cells)
      .def_readwrite("n_t", &GridSpec::steps)
      .def_readwrite("t_max", &GridSpec::horizon)
      .def_readonly("dx", &GridSpec::dx)
      .def_readonly("dt", &GridSpec::dt);

  py::class_<SolverOptions>(mod, "SolverOptions")
      .def(py::init<>())
      .def_readwrite("eta", &SolverOptions::eta)
      .def_readwrite("inner_tol", &SolverOptions::inner_tol)
      .def_readwrite("inner_cap", &SolverOptions::inner_cap)
      .def_readwrite("mass_adjust", &SolverOptions::mass_adjust)
      .def_readwrite("relax_cfl", &SolverOptions::relax_cfl)
      .def_readwrite("corrected_310", &SolverOptions::corrected_310)
      .def_readwrite("snapshot_times", &SolverOptions::snapshot_times);

  py::class_<ScenarioConfig>(mod, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("column", &ScenarioConfig::column)
      .def_readwrite("isotherm", &ScenarioConfig::isotherm)
      .def_readwrite("injection", &ScenarioConfig::injection)
      .def_readwrite("grid", &ScenarioConfig::grid)
      .def_readwrite("initial", &ScenarioConfig::initial)
      .def_readwrite("solver", &ScenarioConfig::solver)
      .def_readonly("diffusion", &ScenarioConfig::diffusion)
      .def_readonly("phase_ratio", &ScenarioConfig::phase_ratio)
      .def_readonly("cfl", &ScenarioConfig::cfl)
      .def_readonly("validated", &ScenarioConfig::validated)
      .def_property_readonly("m", &ScenarioConfig::components);

  py::class_<MassLedger>(mod, "MassLedger")
      .def_readonly("injected", &MassLedger::injected)
      .def_readonly("holdup", &MassLedger::holdup)
      .def_readonly("outflow", &MassLedger::outflow)
      .def_readonly("deficit", &MassLedger::deficit)
      .def_readonly("times", &MassLedger::times)
      .def_readonly("history_deficit", &MassLedger::hist_deficit);

  py::class_<Snapshot>(mod, "Snapshot")
      .def_readonly("time", &Snapshot::time)
      .def_readonly("level", &Snapshot::level)
      .def_readonly("components", &Snapshot::components)
      .def_readonly("values", &Snapshot::values);

  py::class_<Trajectory>(mod, "Trajectory")
      .def_readonly("times", &Trajectory::times)
      .def_readonly("outlet", &Trajectory::outlet)
      .def_readonly("snapshots", &Trajectory::snapshots)
      .def_readonly("ledger", &Trajectory::ledger)
      .def_readonly("min_values", &Trajectory::min_values)
      .def_readonly("mode", &Trajectory::mode);

  mod.def("load_scenario", &load_scenario_file, py::arg("path"),
          "Read a scenario file; validate() before running");
  mod.def("validate_scenario", &validate_scenario, py::arg("scenario"));
  mod.def(
      "derive_coefficients",
      [](const ColumnSpec& col) {
        const auto d = derive_coefficients(col);
        return py::make_tuple(d.diffusion, d.phase_ratio);
      },
      py::arg("column"), "Returns (diffusion, phase_ratio)");
  mod.def("injection_value", &injection_value, py::arg("profile"), py::arg("t"));
  mod.def(
      "langmuir_q",
      [](const std::vector<double>& u, const IsothermParams& p) {
        const auto eval = langmuir_q(u, p);
        return py::make_tuple(eval.q, eval.denominator);
      },
      py::arg("u"), py::arg("params"), "Returns (q, denominator)");
  mod.def(
      "langmuir_jacobian",
      [](const std::vector<double>& u, const IsothermParams& p) {
        return matrix_rows(langmuir_jacobian(u, p));
      },
      py::arg("u"), py::arg("params"));
  mod.def(
      "secant_derivative",
      [](const std::vector<double>& u_old, const std::vector<double>& u_new,
         const IsothermParams& p) { return matrix_rows(secant_derivative(u_old, u_new, p)); },
      py::arg("u_old"), py::arg("u_new"), py::arg("params"));
  mod.def("w_of_u", &w_of_u, py::arg("u"), py::arg("phase_ratio"), py::arg("a"), py::arg("b"));
  mod.def("u_of_w", &u_of_w, py::arg("w"), py::arg("phase_ratio"), py::arg("a"), py::arg("b"));
  mod.def(
      "analytic_outlet",
      [](const ScenarioConfig& scenario, const std::vector<double>& times) {
        const RetardedTransportParams p = retarded_params(scenario);
        std::vector<double> out(times.size());
        for (size_t j = 0; j < times.size(); ++j) out[j] = linear_analytic_outlet(p, times[j]);
        return out;
      },
      py::arg("scenario"), py::arg("times"),
      "Closed-form outlet curve of the linear single-component model");
  mod.def(
      "run",
      [](const ScenarioConfig& scenario, const std::string& mode) {
        return solve_scenario(scenario.validated ? scenario : validate_scenario(scenario),
                              solver_mode_from_string(mode));
      },
      py::arg("scenario"), py::arg("mode") = "auto",
      py::call_guard<py::gil_scoped_release>());
  mod.def(
      "l1_error",
      [](const std::vector<double>& times_a, const std::vector<std::vector<double>>& series_a,
         const std::vector<double>& times_b, const std::vector<std::vector<double>>& series_b) {
        return l1_error({times_a, series_a}, {times_b, series_b});
      },
      py::arg("times"), py::arg("series"), py::arg("ref_times"), py::arg("ref_series"),
      "Time-integrated outlet error per component");
  mod.def(
      "fine_grid_reference",
      [](const ScenarioConfig& scenario, int cells, int steps, const std::string& cache_dir) {
        const auto rec = fine_grid_reference(scenario, cells, steps, cache_dir);
        return py::make_tuple(rec.times, rec.series);
      },
      py::arg("scenario"), py::arg("cells") = 3000, py::arg("steps") = 20000,
      py::arg("cache_dir") = std::string(), py::call_guard<py::gil_scoped_release>());
}
