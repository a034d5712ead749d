#pragma once

#include <variant>

namespace tcomb {

struct SystemSpec;

/// S(w) = lambda_tilde^2 pi delta(w - omega0).
struct DeltaLine {
  double lambda_tilde_sq;
  double omega0;
};

/// S(w) = lambda_tilde^2 kappa / ((w - omega0)^2 + kappa^2).
struct Lorentzian {
  double lambda_tilde_sq;
  double omega0;
  double kappa;

  double density(double omega) const {
    const double d = omega - omega0;
    return lambda_tilde_sq * kappa / (d * d + kappa * kappa);
  }
};

using NoiseSpectrum = std::variant<DeltaLine, Lorentzian>;

DeltaLine delta_spectrum(const SystemSpec& spec);

/// Throws DomainError if the spec has infinite Q (use delta_spectrum).
Lorentzian lorentzian_spectrum(const SystemSpec& spec);

}  // namespace tcomb
