#pragma once

#include <limits>

namespace tcomb {

/// Physical parameters of the qubit-oscillator sensor.
///
/// Frequencies are ordinary frequencies in Hz; the angular accessors return
/// rad/s. Times are seconds, mass is grams, temperature is kelvin. Q, T1 and
/// T2 may be +infinity to switch the corresponding decay channel off.
struct SystemSpec {
  double f0_hz = 1.0e5;
  double quality_factor = std::numeric_limits<double>::infinity();
  double mass_g = 2.3e-16;
  double temperature_k = 10.0;
  double coupling_hz = 100.0;
  double qubit_t1_s = std::numeric_limits<double>::infinity();
  double qubit_t2_s = std::numeric_limits<double>::infinity();
  double t2_scaling_exponent = 2.0 / 3.0;
  double readout_contrast = 1.0;
  // Stored for completeness; the qubit splitting drops out of |L(t)|.
  double qubit_frequency_hz = 2.87e9;

  double omega0() const;   ///< 2 pi f0
  double lambda() const;   ///< 2 pi f_lambda
  double kappa() const;    ///< omega0 / Q, zero for infinite Q
  double period() const;   ///< T0 = 2 pi / omega0
  double coupling_ratio() const { return coupling_hz / f0_hz; }

  /// Throws DomainError naming the first violated invariant.
  void validate() const;

  /// Same oscillator with mass M (1 + dm_over_m) at fixed spring constant.
  SystemSpec with_mass_shift(double dm_over_m) const;

  bool operator==(const SystemSpec&) const = default;
};

/// Bose-Einstein occupation 1/(exp(hbar omega0 / kB T) - 1); zero at T = 0.
double thermal_occupation(double f0_hz, double temperature_k);

/// lambda^2 (2 n_th + 1), in rad^2/s^2.
double lambda_tilde_sq(double lambda, double n_th);

/// lambda_tilde^2 for a spec, combining the two functions above.
double lambda_tilde_sq(const SystemSpec& spec);

/// Oscillator/coupling/temperature of the 100-pulse time-comb figure.
SystemSpec fig2_system();

/// Fig2 oscillator plus T1 = 7 ms, T2 = 100 us, Q = 1e9, room temperature.
SystemSpec fig3_system();

}  // namespace tcomb
