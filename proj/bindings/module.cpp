#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "osatcom/beamform.hpp"
#include "osatcom/channel_models.hpp"
#include "osatcom/link_sim.hpp"
#include "osatcom/pulse.hpp"
#include "osatcom/robust_bound.hpp"

namespace py = pybind11;
using namespace osatcom;

PYBIND11_MODULE(_core, m) {
  m.doc() = "MIMO CDMA optical SATCOM toolkit core";

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"));

  py::enum_<FadingFamily>(m, "FadingFamily")
      .value("Nakagami", FadingFamily::Nakagami)
      .value("Rayleigh", FadingFamily::Rayleigh)
      .value("LogNormal", FadingFamily::LogNormal)
      .value("Suzuki", FadingFamily::Suzuki);

  py::class_<FadingSpec>(m, "FadingSpec")
      .def_static("nakagami", &FadingSpec::nakagami, py::arg("m"),
                  py::arg("omega"), py::arg("mean") = 0.0)
      .def_static("rayleigh", &FadingSpec::rayleigh, py::arg("omega"))
      .def_static("log_normal", &FadingSpec::log_normal, py::arg("log_mu"),
                  py::arg("log_sigma"))
      .def_static("suzuki", &FadingSpec::suzuki, py::arg("log_mu"),
                  py::arg("log_sigma"), py::arg("ray_second_moment") = 1.0)
      .def_readonly("family", &FadingSpec::family)
      .def_readonly("mean_sq", &FadingSpec::mean_sq)
      .def_readonly("var", &FadingSpec::var);

  py::class_<DMatrix>(m, "DMatrix")
      .def_readonly("d", &DMatrix::d)
      .def_readonly("alpha", &DMatrix::alpha)
      .def_readonly("beta", &DMatrix::beta)
      .def_readonly("dim", &DMatrix::dim);

  m.def("sample_nakagami_amplitude", &sample_nakagami_amplitude);
  m.def("sample_suzuki_coefficient", &sample_suzuki_coefficient);
  m.def("sample_channel_matrix", &sample_channel_matrix);
  m.def("build_d_matrix", &build_d_matrix, py::arg("alpha"), py::arg("beta"),
        py::arg("dim"));
  m.def("build_d_suzuki", &build_d_suzuki, py::arg("alpha"), py::arg("beta"),
        py::arg("dim"));
  m.def("apply_rain_attenuation", &apply_rain_attenuation,
        py::arg("snr_linear"), py::arg("a_r_db"));

  py::class_<UncertaintyBall>(m, "UncertaintyBall")
      .def(py::init([](double xi, int dim) {
             return UncertaintyBall{xi, dim};
           }),
           py::arg("xi"), py::arg("dim") = 0)
      .def_readonly("xi", &UncertaintyBall::xi);

  py::class_<InterferenceBound>(m, "InterferenceBound")
      .def_readonly("value", &InterferenceBound::value)
      .def_readonly("effective_matrix", &InterferenceBound::effective_matrix);

  m.def("kron_lift_norm", &kron_lift_norm);
  m.def("effective_interference_matrix", &effective_interference_matrix);
  m.def("worst_case_interference", &worst_case_interference);
  m.def("realized_interference", &realized_interference);
  m.def("worst_case_signal_lower_bound", &worst_case_signal_lower_bound);

  py::class_<CellProblem>(m, "CellProblem")
      .def(py::init<>())
      .def_readwrite("d", &CellProblem::d)
      .def_readwrite("g_list", &CellProblem::g_list)
      .def_readwrite("a_r_db", &CellProblem::a_r_db)
      .def_readwrite("p_th", &CellProblem::p_th)
      .def_readwrite("i_th_list", &CellProblem::i_th_list)
      .def_readwrite("dim", &CellProblem::dim);

  py::class_<SolveOptions>(m, "SolveOptions")
      .def(py::init<>())
      .def_readwrite("tol", &SolveOptions::tol)
      .def_readwrite("max_iterations", &SolveOptions::max_iterations)
      .def_readwrite("initial_trust_radius",
                     &SolveOptions::initial_trust_radius)
      .def_readwrite("initial_multiplier", &SolveOptions::initial_multiplier);

  py::class_<BeamSolution>(m, "BeamSolution")
      .def_readonly("q", &BeamSolution::q)
      .def_readonly("mu1", &BeamSolution::mu1)
      .def_readonly("mu2", &BeamSolution::mu2)
      .def_readonly("capacity", &BeamSolution::capacity)
      .def_readonly("kkt_residual", &BeamSolution::kkt_residual)
      .def_readonly("iterations", &BeamSolution::iterations)
      .def_readonly("converged", &BeamSolution::converged);

  m.def("capacity", &capacity, py::arg("q"), py::arg("d"), py::arg("a_r_db"));
  m.def("lagrangian", &lagrangian);
  m.def("kkt_stationarity_residual", &kkt_stationarity_residual);
  m.def("solve_inner", &solve_inner);
  m.def("solve_cell", &solve_cell, py::arg("problem"),
        py::arg("options") = SolveOptions{});
  m.def("solve_network", &solve_network, py::arg("problems"),
        py::arg("options") = SolveOptions{});

  py::enum_<BindingConstraint>(m, "BindingConstraint")
      .value("PAPR", BindingConstraint::PAPR)
      .value("OSNR", BindingConstraint::OSNR)
      .value("Both", BindingConstraint::Both);

  py::class_<PulseConfig>(m, "PulseConfig")
      .def(py::init<>())
      .def_readwrite("bit_period_t", &PulseConfig::bit_period_t)
      .def_readwrite("amplitude_a_m", &PulseConfig::amplitude_a_m)
      .def_readwrite("papr_th_db", &PulseConfig::papr_th_db)
      .def_readwrite("osnr_tar", &PulseConfig::osnr_tar)
      .def_readwrite("fiber_norm_sq", &PulseConfig::fiber_norm_sq)
      .def_readwrite("noise_var", &PulseConfig::noise_var)
      .def_readwrite("kappa_min", &PulseConfig::kappa_min);

  py::class_<PulseSolution>(m, "PulseSolution")
      .def_readonly("t1", &PulseSolution::t1)
      .def_readonly("kappa", &PulseSolution::kappa)
      .def_readonly("overlap_prob", &PulseSolution::overlap_prob)
      .def_readonly("papr_db", &PulseSolution::papr_db)
      .def_readonly("osnr", &PulseSolution::osnr)
      .def_readonly("binding", &PulseSolution::binding);

  py::class_<DispersionSpec>(m, "DispersionSpec")
      .def(py::init<>())
      .def_readwrite("coefficients_ps_per_km",
                     &DispersionSpec::coefficients_ps_per_km)
      .def_readwrite("length_km", &DispersionSpec::length_km);

  m.def("papr_db", &papr_db, py::arg("bit_period_t"), py::arg("t1"));
  m.def("average_power", &average_power);
  m.def("osnr", &osnr);
  m.def("overlap_probability", &overlap_probability, py::arg("t1"),
        py::arg("kappa"), py::arg("bit_period_t"));
  m.def("solve_pulse", &solve_pulse);
  m.def("total_dispersion", &total_dispersion);

  py::class_<SpreadingCode>(m, "SpreadingCode")
      .def_readonly("chips", &SpreadingCode::chips);
  m.def("walsh_code", &walsh_code, py::arg("length"), py::arg("index"));
  m.def("spread", &spread);
  m.def("despread", &despread);
  m.def("network_error_probability", &network_error_probability);
}
