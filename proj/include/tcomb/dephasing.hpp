#pragma once

#include <complex>

#include "tcomb/pulse_sequence.hpp"
#include "tcomb/spectrum.hpp"

namespace tcomb {

/// Integral of the toggling sign f(t') e^{i w t'} over [0, t], evaluated
/// segment by segment in closed form (units: seconds).
std::complex<double> modulation_integral(const PulseSequence& seq, double omega);

/// chi for a delta-line spectrum: lambda_tilde^2 |modulation_integral(w0)|^2.
/// Throws DomainError for a Lorentzian.
double chi_delta_general(const PulseSequence& seq, const NoiseSpectrum& spectrum);

struct CpmgChi {
  double value;        ///< +infinity at cos(w0 t / 2N) = 0
  bool odd_variant;    ///< true when N is odd (cos^2 replaces sin^2)
};

/// Closed form for an N-pulse CPMG sequence against a delta line:
///   4 lt2 / w0^2 (sec(w0 t / 2N) - 1)^2 sin^2(w0 t / 2)   (even N)
/// with sin^2 -> cos^2 for odd N.
CpmgChi chi_cpmg_closed(int pulses, double omega0, double lambda_tilde_sq, double t);

/// True when w0 t / 2N sits on an odd multiple of pi/2 to within rounding,
/// i.e. where the closed form diverges.
bool cpmg_divergent(int pulses, double omega0, double t);

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-6;
  std::size_t max_intervals = 400000;
};

struct QuadratureResult {
  double value;
  double error_estimate;
};

/// chi = int_0^inf dw/pi S(w) |modulation_integral(w)|^2 by adaptive
/// Gauss-Kronrod quadrature. A delta line collapses to chi_delta_general.
/// Throws QuadratureError with the achieved estimate on non-convergence.
QuadratureResult chi_spectral_quadrature(const PulseSequence& seq,
                                         const NoiseSpectrum& spectrum,
                                         const QuadratureOptions& options = {});

}  // namespace tcomb
