#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "herald/calibrate.hpp"
#include "herald/dynamics.hpp"
#include "herald/effective.hpp"
#include "herald/error.hpp"
#include "herald/gates.hpp"
#include "herald/repeater.hpp"

namespace py = pybind11;
using namespace herald;

PYBIND11_MODULE(_herald, m) {
    m.doc() = "Heralded cavity-QED gates: effective theory, master equation and calibration";

    auto base = py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    auto numerical = py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<SingularParametersError>(m, "SingularParametersError", numerical.ptr());
    py::register_exception<IntegrationError>(m, "IntegrationError", numerical.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", numerical.ptr());
    py::register_exception<SpectralAmbiguityError>(m, "SpectralAmbiguityError", numerical.ptr());
    py::register_exception<InconclusiveWindowError>(m, "InconclusiveWindowError", numerical.ptr());
    (void)base;

    py::enum_<Scheme>(m, "Scheme")
        .value("DirectDrive", Scheme::DirectDrive)
        .value("TwoPhoton", Scheme::TwoPhoton);
    py::enum_<RateSource>(m, "RateSource")
        .value("EffectiveClosedForm", RateSource::EffectiveClosedForm)
        .value("SectorLiouvillian", RateSource::SectorLiouvillian);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init<>())
        .def_readwrite("scheme", &SystemParams::scheme)
        .def_readwrite("n_qubits", &SystemParams::n_qubits)
        .def_readwrite("gamma", &SystemParams::gamma)
        .def_readwrite("kappa", &SystemParams::kappa)
        .def_readwrite("g", &SystemParams::g)
        .def_readwrite("g_f", &SystemParams::g_f)
        .def_readwrite("gamma_f", &SystemParams::gamma_f)
        .def_readwrite("gamma_g", &SystemParams::gamma_g)
        .def_readwrite("omega", &SystemParams::omega)
        .def_readwrite("omega_mw", &SystemParams::omega_mw)
        .def_readwrite("delta_E", &SystemParams::delta_E)
        .def_readwrite("delta_e", &SystemParams::delta_e)
        .def_readwrite("delta_E2", &SystemParams::delta_E2)
        .def_readwrite("photon_cutoff", &SystemParams::photon_cutoff)
        .def_property_readonly("C", &SystemParams::cooperativity)
        .def_property_readonly("C_f", &SystemParams::aux_cooperativity)
        .def_property_readonly("alpha", &SystemParams::alpha)
        .def_property_readonly("beta", &SystemParams::beta)
        .def("validate", &SystemParams::validate);

    m.def("make_params", &make_params, py::arg("C"), py::arg("alpha") = 1.0, py::arg("beta") = 1.0,
          py::arg("kappa_over_gamma") = 100.0, py::arg("gamma") = 1.0);

    py::class_<SectorCoefficients>(m, "SectorCoefficients")
        .def_readonly("n", &SectorCoefficients::n)
        .def_readonly("delta", &SectorCoefficients::delta)
        .def_readonly("Gamma", &SectorCoefficients::Gamma)
        .def_readonly("r0", &SectorCoefficients::r0)
        .def_readonly("rg", &SectorCoefficients::rg)
        .def_readonly("rf", &SectorCoefficients::rf)
        .def_readonly("rk", &SectorCoefficients::rk);
    py::class_<EffectiveModel>(m, "EffectiveModel")
        .def_readonly("sectors", &EffectiveModel::sectors)
        .def_readonly("n_qubits", &EffectiveModel::n_qubits)
        .def_readonly("global_stark_shift", &EffectiveModel::global_stark_shift);
    m.def("effective_closed_form", &effective_closed_form);
    m.def("sector_closed_form", &sector_closed_form, py::arg("params"), py::arg("n"));

    py::class_<GateReport>(m, "GateReport")
        .def_readonly("t_gate", &GateReport::t_gate)
        .def_readonly("P_success", &GateReport::P_success)
        .def_readonly("fidelity", &GateReport::fidelity)
        .def_readonly("phases", &GateReport::phases)
        .def_readonly("source", &GateReport::source)
        .def_readonly("metadata", &GateReport::metadata)
        .def_property_readonly("infidelity", &GateReport::infidelity);

    py::class_<CzDetunings>(m, "CzDetunings")
        .def_readonly("delta_E", &CzDetunings::delta_E)
        .def_readonly("delta_e", &CzDetunings::delta_e);
    m.def("cz_analytic_detunings", &cz_analytic_detunings, py::arg("C"), py::arg("alpha") = 1.0,
          py::arg("beta") = 1.0, py::arg("gamma") = 1.0);
    m.def("cz_protocol", &cz_protocol);
    m.def("toffoli_protocol", &toffoli_protocol, py::arg("eff"), py::arg("worst_case") = false);

    py::class_<ToffoliScaling>(m, "ToffoliScaling")
        .def_readonly("N", &ToffoliScaling::N)
        .def_readonly("k", &ToffoliScaling::k)
        .def_readonly("d", &ToffoliScaling::d)
        .def_readonly("error", &ToffoliScaling::error)
        .def_readonly("failure", &ToffoliScaling::failure);
    m.def("toffoli_point", &toffoli_point, py::arg("N"), py::arg("C"), py::arg("alpha") = 1.0,
          py::arg("beta") = 1.0, py::arg("kappa_over_gamma") = 100.0, py::arg("worst_case") = false);

    py::class_<CalibrationResult>(m, "CalibrationResult")
        .def_readonly("delta_E", &CalibrationResult::delta_E)
        .def_readonly("delta_e", &CalibrationResult::delta_e)
        .def_readonly("residual", &CalibrationResult::residual)
        .def_readonly("iterations", &CalibrationResult::iterations)
        .def_readonly("mode", &CalibrationResult::mode)
        .def_readonly("error", &CalibrationResult::error)
        .def_readonly("failure", &CalibrationResult::failure);
    m.def(
        "equalize_rates",
        [](const SystemParams& p, RateSource source, double liouvillian_a) {
            CalibrationOptions o;
            o.liouvillian_a = liouvillian_a;
            return equalize_rates(p, source, RateMode::Cz, o);
        },
        py::arg("params"), py::arg("source") = RateSource::EffectiveClosedForm, py::arg("liouvillian_a") = 0.05);
    m.def("tradeoff_search", &tradeoff_search, py::arg("params"), py::arg("lam"));
    m.def("sector_decay_rate", [](const SystemParams& p, const std::string& config) {
        return sector_decay_rate(p, config).Gamma;
    });

    m.def(
        "simulate_cz_full",
        [](const SystemParams& p) {
            py::gil_scoped_release release;
            return simulate_cz_full(p).report;
        },
        "Full master-equation CZ run; returns the GateReport at the fidelity maximum.");

    m.def("rate_scaling", [](double L, double L0, double p) { return rate_scaling({L, L0, p}); });
    m.def("rate_exact", [](double L, double L0, double p) { return rate_exact({L, L0, p}); });
    m.def("max_links", &max_links, py::arg("F_final"), py::arg("eps0"), py::arg("epsg"));
}
