#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gqme/hilbert.hpp"
#include "gqme/maxent.hpp"
#include "gqme/oscillator.hpp"
#include "gqme/phase_average.hpp"
#include "gqme/random.hpp"

namespace py = pybind11;
using namespace gqme;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Phase-torus microcanonical averages, maximum-entropy ensembles "
            "and the two-constraint oscillator solver";

  py::register_exception<Error>(m, "GqmeError", PyExc_RuntimeError);

  py::class_<Spectrum>(m, "Spectrum")
      .def(py::init<std::vector<double>, double, double>(), py::arg("levels"),
           py::arg("hbar") = 1.0, py::arg("gap_tol") = tol::gap)
      .def_property_readonly("levels", &Spectrum::levels)
      .def_property_readonly("hbar", &Spectrum::hbar)
      .def_property_readonly("degenerate", &Spectrum::degenerate)
      .def_property_readonly("gap_degenerate", &Spectrum::gap_degenerate)
      .def_property_readonly("dim", &Spectrum::dim);

  py::class_<StateVector>(m, "StateVector")
      .def(py::init<Vector, double>(), py::arg("amps"),
           py::arg("norm_tol") = tol::norm)
      .def_property_readonly("amps", &StateVector::amps)
      .def_property_readonly("dim", &StateVector::dim);

  py::class_<Observable>(m, "Observable")
      .def(py::init<Matrix, double>(), py::arg("matrix"),
           py::arg("herm_tol") = tol::herm)
      .def_property_readonly("matrix", &Observable::matrix)
      .def_property_readonly("dim", &Observable::dim)
      .def_static("identity", &Observable::identity, py::arg("dim"));

  py::class_<DephasedDensity>(m, "DephasedDensity")
      .def(py::init<std::vector<double>, double>(), py::arg("weights"),
           py::arg("norm_tol") = tol::norm)
      .def_property_readonly("weights", &DephasedDensity::weights)
      .def_property_readonly("dim", &DephasedDensity::dim);

  m.def("normalize", &normalize, py::arg("raw"),
        py::arg("underflow_tol") = tol::underflow);
  m.def("expectation", &expectation, py::arg("psi"), py::arg("a"),
        py::arg("herm_tol") = tol::herm);
  m.def("dephase", &dephase, py::arg("psi"));
  m.def("diag_trace", &diag_trace, py::arg("rho"), py::arg("a"));

  py::enum_<AverageMethod>(m, "AverageMethod")
      .value("time", AverageMethod::time)
      .value("torus_mc", AverageMethod::torus_mc)
      .value("torus_grid", AverageMethod::torus_grid)
      .value("analytic", AverageMethod::analytic);

  py::class_<AverageReport>(m, "AverageReport")
      .def_readonly("value", &AverageReport::value)
      .def_readonly("method", &AverageReport::method)
      .def_readonly("samples", &AverageReport::samples)
      .def_readonly("error_estimate", &AverageReport::error_estimate);

  py::class_<StateFunction>(m, "StateFunction")
      .def_static("linear", &StateFunction::linear, py::arg("a"))
      .def_static("covariance", &StateFunction::covariance, py::arg("a"),
                  py::arg("b"))
      .def_static("custom", &StateFunction::custom, py::arg("evaluator"),
                  py::arg("degree") = py::none())
      .def("__call__", &StateFunction::operator(), py::arg("psi"))
      .def_property_readonly("degree", &StateFunction::degree);

  m.def("evolve", &evolve, py::arg("psi"), py::arg("spec"), py::arg("t"));
  m.def("time_average", &time_average, py::arg("f"), py::arg("psi"),
        py::arg("spec"), py::arg("total_time"), py::arg("steps"));
  m.def("torus_average_mc", &torus_average_mc, py::arg("f"), py::arg("psi"),
        py::arg("samples"), py::arg("seed"));
  m.def("torus_average_grid", &torus_average_grid, py::arg("f"), py::arg("psi"),
        py::arg("grid_budget") = tol::grid_budget);
  m.def("linear_analytic", &linear_analytic, py::arg("psi"), py::arg("a"));
  m.def("covariance_analytic", &covariance_analytic, py::arg("psi"),
        py::arg("a"), py::arg("b"));
  m.def("default_time_horizon", &default_time_horizon, py::arg("spec"));

  py::class_<CanonicalSolution>(m, "CanonicalSolution")
      .def_readonly("beta", &CanonicalSolution::beta)
      .def_readonly("alpha", &CanonicalSolution::alpha)
      .def_readonly("weights", &CanonicalSolution::weights)
      .def_readonly("energy", &CanonicalSolution::energy)
      .def_readonly("entropy", &CanonicalSolution::entropy)
      .def_readonly("heat_capacity", &CanonicalSolution::heat_capacity);

  m.def("entropy", &entropy, py::arg("mu"), py::arg("kb") = 1.0);
  m.def("weights_at", &weights_at, py::arg("spec"), py::arg("beta"),
        py::arg("kb") = 1.0);
  m.def("solve_beta", &solve_beta, py::arg("spec"), py::arg("energy_target"),
        py::arg("e_tol") = 1e-12, py::arg("kb") = 1.0);
  m.def("thermo_consistency", &thermo_consistency, py::arg("spec"),
        py::arg("energy_target"), py::arg("h"), py::arg("kb") = 1.0);

  py::class_<OscillatorConfig>(m, "OscillatorConfig")
      .def(py::init([](double mass, double omega, double hbar, int n_levels,
                       double tail_tol) {
             return OscillatorConfig{mass, omega, hbar, n_levels, tail_tol};
           }),
           py::arg("mass") = 1.0, py::arg("omega") = 1.0, py::arg("hbar") = 1.0,
           py::arg("n_levels") = 2, py::arg("tail_tol") = tol::tail)
      .def_readwrite("mass", &OscillatorConfig::mass)
      .def_readwrite("omega", &OscillatorConfig::omega)
      .def_readwrite("hbar", &OscillatorConfig::hbar)
      .def_readwrite("n_levels", &OscillatorConfig::n_levels)
      .def_readwrite("tail_tol", &OscillatorConfig::tail_tol)
      .def_property_readonly("lambda_q", &OscillatorConfig::lambda_q)
      .def_property_readonly("lambda_p", &OscillatorConfig::lambda_p);

  py::class_<PortraitPoint>(m, "PortraitPoint")
      .def_readonly("t", &PortraitPoint::t)
      .def_readonly("q", &PortraitPoint::q)
      .def_readonly("p", &PortraitPoint::p);

  py::class_<SolverOptions>(m, "SolverOptions")
      .def(py::init<>())
      .def_readwrite("solver_tol", &SolverOptions::solver_tol)
      .def_readwrite("theta", &SolverOptions::theta)
      .def_readwrite("max_iter", &SolverOptions::max_iter);

  py::class_<EnsembleSolution>(m, "EnsembleSolution")
      .def_readonly("state", &EnsembleSolution::state)
      .def_readonly("alpha", &EnsembleSolution::alpha)
      .def_readonly("beta", &EnsembleSolution::beta)
      .def_readonly("gamma", &EnsembleSolution::gamma)
      .def_readonly("zeta", &EnsembleSolution::zeta)
      .def_readonly("energy", &EnsembleSolution::energy)
      .def_readonly("classical_energy", &EnsembleSolution::classical_energy)
      .def_readonly("residual", &EnsembleSolution::residual)
      .def_readonly("iterations", &EnsembleSolution::iterations)
      .def_readonly("hbar_omega", &EnsembleSolution::hbar_omega);

  py::class_<AsymptoticProfile>(m, "AsymptoticProfile")
      .def_readonly("n_start", &AsymptoticProfile::n_start)
      .def_readonly("x", &AsymptoticProfile::x)
      .def_readonly("ratio_drift", &AsymptoticProfile::ratio_drift);

  m.def("oscillator_spectrum", &oscillator_spectrum, py::arg("cfg"));
  m.def("ladder_observables", &ladder_observables, py::arg("cfg"));
  m.def("coherent_state", &coherent_state, py::arg("z"), py::arg("cfg"));
  m.def("zeta", &zeta, py::arg("psi"));
  m.def("classical_energy", &classical_energy, py::arg("psi"), py::arg("cfg"));
  m.def("phase_portrait", &phase_portrait, py::arg("psi"), py::arg("cfg"),
        py::arg("samples"));
  m.def("solve_two_constraint", &solve_two_constraint, py::arg("beta"),
        py::arg("gamma"), py::arg("lambda0"), py::arg("cfg"),
        py::arg("options") = SolverOptions{});
  m.def("asymptotic_profile", &asymptotic_profile, py::arg("sol"));
}
