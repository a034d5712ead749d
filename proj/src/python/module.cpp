#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "tcomb/coherence.hpp"
#include "tcomb/dephasing.hpp"
#include "tcomb/errors.hpp"
#include "tcomb/estimator.hpp"
#include "tcomb/pulse_sequence.hpp"
#include "tcomb/sensitivity.hpp"
#include "tcomb/spectrum.hpp"
#include "tcomb/system.hpp"

namespace py = pybind11;
using namespace tcomb;

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace {

Mechanisms mechanisms_from(bool t1, bool t2, bool q) { return Mechanisms{t1, t2, q}; }

py::array_t<double> as_array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Qubit time-comb mass sensing: dephasing, sensitivity and Monte Carlo estimation";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<QuadratureError>(m, "QuadratureError", PyExc_ArithmeticError);
  py::register_exception<NoBracketError>(m, "NoBracketError", PyExc_ArithmeticError);
  py::register_exception<OperatingPointError>(m, "OperatingPointError", PyExc_ArithmeticError);

  py::class_<SystemSpec>(m, "SystemSpec")
      .def(py::init<>())
      .def_readwrite("f0_hz", &SystemSpec::f0_hz)
      .def_readwrite("quality_factor", &SystemSpec::quality_factor)
      .def_readwrite("mass_g", &SystemSpec::mass_g)
      .def_readwrite("temperature_k", &SystemSpec::temperature_k)
      .def_readwrite("coupling_hz", &SystemSpec::coupling_hz)
      .def_readwrite("qubit_t1_s", &SystemSpec::qubit_t1_s)
      .def_readwrite("qubit_t2_s", &SystemSpec::qubit_t2_s)
      .def_readwrite("t2_scaling_exponent", &SystemSpec::t2_scaling_exponent)
      .def_readwrite("readout_contrast", &SystemSpec::readout_contrast)
      .def_readwrite("qubit_frequency_hz", &SystemSpec::qubit_frequency_hz)
      .def_property_readonly("omega0", &SystemSpec::omega0)
      .def_property_readonly("kappa", &SystemSpec::kappa)
      .def_property_readonly("period", &SystemSpec::period)
      .def("validate", &SystemSpec::validate)
      .def("with_mass_shift", &SystemSpec::with_mass_shift, py::arg("dm_over_m"))
      .def("__repr__", [](const SystemSpec& s) {
        return "SystemSpec(f0_hz=" + std::to_string(s.f0_hz) + ", temperature_k=" +
               std::to_string(s.temperature_k) + ", quality_factor=" + std::to_string(s.quality_factor) + ")";
      });

  m.def("fig2_system", &fig2_system);
  m.def("fig3_system", &fig3_system);
  m.def("thermal_occupation", &thermal_occupation, py::arg("f0_hz"), py::arg("temperature_k"));
  m.def("lambda_tilde_sq", py::overload_cast<const SystemSpec&>(&lambda_tilde_sq), py::arg("spec"));

  m.def(
      "chi_cpmg_closed",
      [](int pulses, const SystemSpec& spec, double t) {
        return chi_cpmg_closed(pulses, spec.omega0(), lambda_tilde_sq(spec), t).value;
      },
      py::arg("pulses"), py::arg("spec"), py::arg("t"),
      "chi of an N-pulse CPMG sequence against the delta line, closed form.");
  m.def(
      "chi_piecewise",
      [](const std::vector<double>& pulse_times, double t, const SystemSpec& spec) {
        return chi_delta_general(PulseSequence(t, pulse_times), delta_spectrum(spec));
      },
      py::arg("pulse_times"), py::arg("t"), py::arg("spec"),
      "chi for an arbitrary pi-pulse sequence against the delta line.");
  m.def(
      "chi_lorentzian",
      [](int pulses, const SystemSpec& spec, double t, double abs_tol, double rel_tol) {
        QuadratureOptions opts;
        opts.abs_tol = abs_tol;
        opts.rel_tol = rel_tol;
        const auto r = chi_spectral_quadrature(PulseSequence::cpmg(pulses, t), lorentzian_spectrum(spec), opts);
        return py::make_tuple(r.value, r.error_estimate);
      },
      py::arg("pulses"), py::arg("spec"), py::arg("t"), py::arg("abs_tol") = 1e-10, py::arg("rel_tol") = 1e-6,
      "(chi, error estimate) for a CPMG sequence against the finite-Q Lorentzian line.");

  m.def(
      "coherence_trace",
      [](const SystemSpec& spec, int pulses, const std::vector<double>& times, bool t1, bool t2,
         unsigned workers) {
        TraceOptions opts;
        opts.pulses = pulses;
        opts.mechanisms = mechanisms_from(t1, t2, false);
        opts.workers = workers;
        const auto trace = coherence_trace(spec, opts, times);
        py::dict out;
        out["t"] = as_array(trace.times);
        out["L_ideal"] = as_array(trace.l_ideal);
        out["L_bg"] = as_array(trace.l_bg);
        out["L_total"] = as_array(trace.l_total);
        return out;
      },
      py::arg("spec"), py::arg("pulses"), py::arg("times"), py::arg("t1") = false, py::arg("t2") = false,
      py::arg("workers") = 1);

  py::class_<PeakDescriptor>(m, "PeakDescriptor")
      .def_readonly("q", &PeakDescriptor::q)
      .def_readonly("t_q", &PeakDescriptor::t_q)
      .def_readonly("gamma", &PeakDescriptor::gamma)
      .def_readonly("width_expansion", &PeakDescriptor::width_expansion)
      .def_readonly("height", &PeakDescriptor::height)
      .def_readonly("is_qstar", &PeakDescriptor::is_qstar);
  py::class_<PeakCatalog>(m, "PeakCatalog")
      .def_readonly("pulses", &PeakCatalog::pulses)
      .def_readonly("q_star", &PeakCatalog::q_star)
      .def_readonly("width_closed_form", &PeakCatalog::width_closed_form)
      .def_readonly("peaks", &PeakCatalog::peaks)
      .def_readonly("missing", &PeakCatalog::missing);
  m.def(
      "peak_catalog",
      [](const SystemSpec& spec, int pulses) { return peak_catalog(spec, pulses); },
      py::arg("spec"), py::arg("pulses"));
  m.def("peak_gamma", &peak_gamma, py::arg("spec"), py::arg("pulses"), py::arg("q"));

  m.def("sensitivity_ideal", &sensitivity_ideal, py::arg("spec"), py::arg("pulses"));
  m.def(
      "sensitivity_full",
      [](const SystemSpec& spec, int pulses, bool t1, bool t2, bool q, bool quadrature) {
        SensitivityOptions opts;
        opts.mechanisms = mechanisms_from(t1, t2, q);
        opts.penalty = quadrature ? PenaltyRoute::quadrature : PenaltyRoute::closed;
        return sensitivity_full(spec, pulses, opts);
      },
      py::arg("spec"), py::arg("pulses"), py::arg("t1") = true, py::arg("t2") = true, py::arg("q") = true,
      py::arg("quadrature") = false);
  m.def("optimal_n_continuous", &optimal_n_continuous, py::arg("spec"));
  m.def("optimal_N_analytic", &optimal_N_analytic, py::arg("spec"));
  m.def("eta_optimal_universal", &eta_optimal_universal, py::arg("spec"));
  m.def(
      "optimize",
      [](const SystemSpec& spec, const std::vector<int>& n_values, bool t1, bool t2, bool q) {
        SensitivityOptions opts;
        opts.mechanisms = mechanisms_from(t1, t2, q);
        const auto r = optimize_sensitivity_numeric(spec, n_values, opts);
        py::dict out;
        out["n_opt"] = r.n_opt;
        out["eta_opt"] = r.eta_opt;
        out["eta_universal"] = r.eta_universal;
        return out;
      },
      py::arg("spec"), py::arg("n_values"), py::arg("t1") = true, py::arg("t2") = true, py::arg("q") = true,
      "Exhaustive minimum of sensitivity_full; raises NoBracketError on a boundary minimum.");

  m.def(
      "estimate_mass_shift",
      [](const SystemSpec& spec, int pulses, double mass_shift, std::int64_t runs, std::uint64_t seed,
         double contrast, double flank_offset, unsigned workers) {
        MeasurementPlan plan;
        plan.pulses = pulses;
        plan.mass_shift = mass_shift;
        plan.runs = runs;
        plan.seed = seed;
        plan.contrast = contrast;
        plan.flank_offset = flank_offset;
        plan.workers = workers;
        const auto r = estimate_mass_shift(spec, plan);
        py::dict out;
        out["seed"] = r.seed;
        out["measurement_time"] = r.measurement_time;
        out["L_ref"] = r.reference.l_hat;
        out["L_pert"] = r.perturbed.l_hat;
        out["sigma_L_ref"] = r.reference.sigma;
        out["dm_over_m"] = r.dm_over_m;
        out["sigma_dm_over_m"] = r.sigma_dm_over_m;
        out["total_time"] = r.total_time;
        out["predicted_sigma"] = r.predicted_sigma;
        return out;
      },
      py::arg("spec"), py::arg("pulses") = 100, py::arg("mass_shift") = 1e-6, py::arg("runs") = 1'000'000,
      py::arg("seed") = 1, py::arg("contrast") = 1.0, py::arg("flank_offset") = 1.0, py::arg("workers") = 1);

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
