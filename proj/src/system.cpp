#include "tcomb/system.hpp"

#include <cmath>
#include <string>

#include "tcomb/constants.hpp"
#include "tcomb/errors.hpp"
#include "tcomb/spectrum.hpp"

namespace tcomb {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

bool positive_or_inf(double v) { return v > 0.0 && !std::isnan(v); }

}  // namespace

double SystemSpec::omega0() const { return constants::two_pi * f0_hz; }
double SystemSpec::lambda() const { return constants::two_pi * coupling_hz; }
double SystemSpec::period() const { return 1.0 / f0_hz; }

double SystemSpec::kappa() const {
  return std::isinf(quality_factor) ? 0.0 : omega0() / quality_factor;
}

void SystemSpec::validate() const {
  require(std::isfinite(f0_hz) && f0_hz > 0.0, "f0 must be positive and finite");
  require(positive_or_inf(quality_factor), "quality factor must be positive");
  require(std::isfinite(mass_g) && mass_g > 0.0, "mass must be positive and finite");
  require(std::isfinite(temperature_k) && temperature_k >= 0.0,
          "temperature must be non-negative and finite");
  require(std::isfinite(coupling_hz) && coupling_hz > 0.0, "coupling must be positive and finite");
  require(positive_or_inf(qubit_t1_s), "qubit T1 must be positive");
  require(positive_or_inf(qubit_t2_s), "qubit T2 must be positive");
  require(std::isfinite(t2_scaling_exponent), "T2 scaling exponent must be finite");
  require(readout_contrast > 0.0 && readout_contrast <= 1.0, "readout contrast must lie in (0, 1]");
  require(std::isfinite(qubit_frequency_hz), "qubit frequency must be finite");
  require(coupling_ratio() < 1.0, "coupling must be weak: f_lambda / f0 < 1");
}

SystemSpec SystemSpec::with_mass_shift(double dm_over_m) const {
  if (!(dm_over_m > -1.0) || !std::isfinite(dm_over_m)) {
    throw DomainError("mass shift must be finite and greater than -1");
  }
  SystemSpec shifted = *this;
  shifted.mass_g = mass_g * (1.0 + dm_over_m);
  shifted.f0_hz = f0_hz / std::sqrt(1.0 + dm_over_m);
  return shifted;
}

double thermal_occupation(double f0_hz, double temperature_k) {
  if (!std::isfinite(f0_hz) || f0_hz <= 0.0) throw DomainError("f0 must be positive and finite");
  if (!std::isfinite(temperature_k) || temperature_k < 0.0) {
    throw DomainError("temperature must be non-negative and finite");
  }
  if (temperature_k == 0.0) return 0.0;
  const double x = constants::hbar * constants::two_pi * f0_hz / (constants::boltzmann * temperature_k);
  return 1.0 / std::expm1(x);
}

double lambda_tilde_sq(double lambda, double n_th) {
  if (!(lambda > 0.0) || !(n_th >= 0.0)) throw DomainError("need lambda > 0 and n_th >= 0");
  return lambda * lambda * (2.0 * n_th + 1.0);
}

double lambda_tilde_sq(const SystemSpec& spec) {
  return lambda_tilde_sq(spec.lambda(), thermal_occupation(spec.f0_hz, spec.temperature_k));
}

SystemSpec fig2_system() {
  SystemSpec s;
  s.f0_hz = 1.0e5;
  s.coupling_hz = 1.0e2;  // lambda = 0.001 omega0
  s.temperature_k = 10.0;
  s.mass_g = 2.3e-16;
  return s;
}

SystemSpec fig3_system() {
  SystemSpec s = fig2_system();
  s.temperature_k = 300.0;
  s.qubit_t1_s = 7.0e-3;
  s.qubit_t2_s = 100.0e-6;
  s.quality_factor = 1.0e9;
  return s;
}

DeltaLine delta_spectrum(const SystemSpec& spec) {
  return {lambda_tilde_sq(spec), spec.omega0()};
}

Lorentzian lorentzian_spectrum(const SystemSpec& spec) {
  if (std::isinf(spec.quality_factor)) {
    throw DomainError("Lorentzian spectrum needs a finite quality factor");
  }
  return {lambda_tilde_sq(spec), spec.omega0(), spec.kappa()};
}

}  // namespace tcomb
