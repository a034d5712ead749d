#include "tcomb/sensitivity.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tcomb/constants.hpp"
#include "tcomb/errors.hpp"
#include "tcomb/parallel.hpp"

namespace tcomb {

namespace {

void require_even_pulses(int pulses) {
  if (pulses < 2 || pulses % 2 != 0) {
    throw DomainError("comb analysis needs an even pulse count >= 2, got " + std::to_string(pulses));
  }
}

// Natural log of the factor multiplying the ideal sensitivity; summed in
// log space so the product only overflows when the result itself does.
double log_penalty(const SystemSpec& spec, int pulses, const SensitivityOptions& options) {
  double log_factor = -std::log(spec.readout_contrast);
  if (options.mechanisms.q) {
    log_factor += 0.5 * finite_q_chi(spec, pulses, options.penalty, options.quadrature);
  }
  if (options.mechanisms.t1 || options.mechanisms.t2) {
    const double t = narrowest_peak_time(spec, pulses);
    if (options.mechanisms.t1) log_factor += t / spec.qubit_t1_s;
    if (options.mechanisms.t2) {
      const double r = t / (spec.qubit_t2_s * std::pow(static_cast<double>(pulses), spec.t2_scaling_exponent));
      log_factor += r * r * r;
    }
  }
  return log_factor;
}

}  // namespace

double peak_gamma(const SystemSpec& spec, int pulses, int q) {
  require_even_pulses(pulses);
  const double x = std::numbers::pi * q / pulses;
  if (cpmg_divergent(pulses, spec.omega0(), q * spec.period())) {
    return std::numeric_limits<double>::infinity();
  }
  const double s = std::sin(0.5 * x);
  return std::sqrt(lambda_tilde_sq(spec)) * 2.0 * s * s / std::cos(x);
}

double peak_width_closed_form(const SystemSpec& spec, int pulses) {
  const double n_th = thermal_occupation(spec.f0_hz, spec.temperature_k);
  return spec.period() / (pulses * spec.coupling_ratio() * std::sqrt(2.0 * n_th + 1.0));
}

double narrowest_peak_time(const SystemSpec& spec, int pulses) {
  require_even_pulses(pulses);
  return (pulses / 2 - 1) * spec.period();
}

PeakCatalog peak_catalog(const SystemSpec& spec, int pulses, const PeakOptions& options) {
  spec.validate();
  require_even_pulses(pulses);
  PeakCatalog catalog;
  catalog.pulses = pulses;
  catalog.q_star = pulses / 2 - 1;
  catalog.width_closed_form = peak_width_closed_form(spec, pulses);
  catalog.missing = {pulses / 2};
  catalog.peaks.resize(static_cast<std::size_t>(std::max(0, catalog.q_star)));

  const bool lorentzian = options.mechanisms.q && std::isfinite(spec.quality_factor);
  const Mechanisms bg{options.mechanisms.t1, options.mechanisms.t2, false};
  parallel_for(catalog.peaks.size(), options.workers, [&](std::size_t i) {
    PeakDescriptor& peak = catalog.peaks[i];
    peak.q = static_cast<int>(i) + 1;
    peak.t_q = peak.q * spec.period();
    peak.gamma = peak_gamma(spec, pulses, peak.q);
    peak.width_expansion = 2.0 * std::numbers::sqrt2 / peak.gamma;
    peak.is_qstar = peak.q == catalog.q_star;
    double height = background_coherence(pulses, peak.t_q, spec, bg);
    if (lorentzian) {
      const double chi = chi_spectral_quadrature(PulseSequence::cpmg(pulses, peak.t_q),
                                                 lorentzian_spectrum(spec), options.quadrature)
                             .value;
      height *= std::exp(-0.5 * chi);
    }
    peak.height = height;
  });
  return catalog;
}

double mass_shift_from_coherence(double dl_over_l, double gamma_qstar, double t_offset,
                                 double t_qstar) {
  const double flank = std::abs(gamma_qstar * t_offset);
  if (!(flank >= 0.3 && flank <= 3.0)) {
    throw DomainError("operating point gamma*(t - t_q*) = " + std::to_string(flank) +
                      " is off the usable flank [0.3, 3]; at the peak centre dL/dw0 vanishes "
                      "and first-order sensitivity is lost");
  }
  if (!(t_qstar > 0.0)) throw DomainError("t_q* must be positive");
  return 2.0 * dl_over_l / (gamma_qstar * gamma_qstar * t_offset * t_qstar);
}

double sensitivity_ideal(const SystemSpec& spec, int pulses) {
  require_even_pulses(pulses);
  if (!(spec.temperature_k > 0.0)) throw DomainError("ideal sensitivity needs T > 0");
  const double thermal_rate = constants::boltzmann * spec.temperature_k / constants::planck;
  return spec.mass_g /
         (std::pow(2.0 * pulses, 1.5) * spec.coupling_ratio() * std::sqrt(thermal_rate));
}

bool high_temperature_regime(const SystemSpec& spec) {
  return thermal_occupation(spec.f0_hz, spec.temperature_k) >= 10.0;
}

double finite_q_chi(const SystemSpec& spec, int pulses, PenaltyRoute route,
                    const QuadratureOptions& quadrature) {
  require_even_pulses(pulses);
  if (std::isinf(spec.quality_factor)) return 0.0;
  if (route == PenaltyRoute::closed) {
    const double w0 = spec.omega0();
    const double n = pulses;
    return 4.0 * lambda_tilde_sq(spec) * n * n * n / (w0 * w0 * spec.quality_factor);
  }
  const double t = narrowest_peak_time(spec, pulses);
  return chi_spectral_quadrature(PulseSequence::cpmg(pulses, t), lorentzian_spectrum(spec),
                                 quadrature)
      .value;
}

double sensitivity_full(const SystemSpec& spec, int pulses, const SensitivityOptions& options) {
  return std::exp(std::log(sensitivity_ideal(spec, pulses)) + log_penalty(spec, pulses, options));
}

double optimal_n_continuous(const SystemSpec& spec) {
  if (std::isinf(spec.quality_factor)) throw DomainError("optimal N needs a finite Q");
  if (!(spec.temperature_k > 0.0)) throw DomainError("optimal N needs T > 0");
  const double lambda = spec.lambda();
  const double ratio =
      constants::hbar * lambda * spec.quality_factor / (constants::boltzmann * spec.temperature_k);
  return spec.omega0() / (2.0 * lambda) * std::cbrt(ratio);
}

int optimal_N_analytic(const SystemSpec& spec) {
  const double n = optimal_n_continuous(spec);
  return std::max(2, 2 * static_cast<int>(std::lround(0.5 * n)));
}

double eta_optimal_universal(const SystemSpec& spec) {
  if (std::isinf(spec.quality_factor)) throw DomainError("optimal sensitivity needs a finite Q");
  return spec.mass_g / std::sqrt(spec.f0_hz * spec.quality_factor);
}

OptimizeResult optimize_sensitivity_numeric(const SystemSpec& spec, std::span<const int> n_values,
                                            const SensitivityOptions& options, bool require_bracket,
                                            unsigned workers) {
  spec.validate();
  if (n_values.empty()) throw DomainError("empty N range");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    require_even_pulses(n_values[i]);
    if (i > 0 && n_values[i] <= n_values[i - 1]) throw DomainError("N range must be ascending");
  }
  std::vector<double> eta(n_values.size());
  parallel_for(n_values.size(), workers,
               [&](std::size_t i) { eta[i] = sensitivity_full(spec, n_values[i], options); });

  std::size_t best = 0;
  for (std::size_t i = 1; i < eta.size(); ++i) {
    if (eta[i] < eta[best]) best = i;
  }
  OptimizeResult result;
  result.n_opt = n_values[best];
  result.eta_opt = eta[best];
  result.eta_universal = std::isfinite(spec.quality_factor) ? eta_optimal_universal(spec)
                                                      : std::numeric_limits<double>::quiet_NaN();
  const bool at_low_edge = best == 0 && n_values.front() > 2;
  const bool at_high_edge = best + 1 == eta.size() && eta.size() > 1;
  result.bracketed = !at_low_edge && !at_high_edge && eta.size() > 1;
  if (require_bracket && !result.bracketed) {
    throw NoBracketError("N range [" + std::to_string(n_values.front()) + ", " +
                         std::to_string(n_values.back()) + "] does not bracket the minimum (argmin N = " +
                         std::to_string(result.n_opt) + "); widen the range");
  }
  return result;
}

std::vector<int> even_range(int lo, int hi) {
  std::vector<int> values;
  for (int n = lo + (lo % 2 != 0); n <= hi; n += 2) values.push_back(n);
  return values;
}

std::vector<int> default_n_sweep() {
  std::vector<int> values = even_range(2, 256);
  for (int n = 272; n <= 2048; n += 16) values.push_back(n);
  return values;
}

SensitivityCurve sensitivity_curve(const SystemSpec& spec, std::span<const int> n_values,
                                   PenaltyRoute penalty, unsigned workers) {
  spec.validate();
  SensitivityCurve curve(n_values.size());
  parallel_for(n_values.size(), workers, [&](std::size_t i) {
    const int n = n_values[i];
    auto eta = [&](Mechanisms m) { return sensitivity_full(spec, n, {m, penalty, {}}); };
    SensitivityRecord& r = curve[i];
    r.pulses = n;
    r.t_qstar = narrowest_peak_time(spec, n);
    r.eta_ideal = eta(Mechanisms::none());
    r.eta_t1 = eta(Mechanisms::only_t1());
    r.eta_t2 = eta(Mechanisms::only_t2());
    r.eta_q = eta(Mechanisms::only_q());
    r.eta_all = eta(Mechanisms::all());
  });
  return curve;
}

}  // namespace tcomb
