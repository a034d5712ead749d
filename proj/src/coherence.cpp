#include "tcomb/coherence.hpp"

#include <cmath>

#include "tcomb/errors.hpp"
#include "tcomb/parallel.hpp"

namespace tcomb {

double background_coherence(int pulses, double t, const SystemSpec& spec, Mechanisms mechanisms) {
  if (pulses < 1) throw DomainError("background coherence needs N >= 1");
  if (!(t >= 0.0)) throw DomainError("time must be non-negative");
  double exponent = 0.0;
  if (mechanisms.t1) exponent += t / spec.qubit_t1_s;
  if (mechanisms.t2) {
    const double t2n = spec.qubit_t2_s * std::pow(static_cast<double>(pulses), spec.t2_scaling_exponent);
    const double r = t / t2n;
    exponent += r * r * r;
  }
  return std::exp(-exponent);
}

double cpmg_chi(const SystemSpec& spec, const TraceOptions& options, double t) {
  if (t == 0.0) return 0.0;
  if (options.spectrum == SpectrumKind::lorentzian) {
    if (options.route != ChiRoute::quadrature) {
      throw DomainError("a Lorentzian spectrum is only available through the quadrature route");
    }
    return chi_spectral_quadrature(PulseSequence::cpmg(options.pulses, t),
                                   lorentzian_spectrum(spec), options.quadrature)
        .value;
  }
  const DeltaLine line = delta_spectrum(spec);
  switch (options.route) {
    case ChiRoute::closed:
      return chi_cpmg_closed(options.pulses, line.omega0, line.lambda_tilde_sq, t).value;
    case ChiRoute::piecewise:
      return chi_delta_general(PulseSequence::cpmg(options.pulses, t), line);
    case ChiRoute::quadrature:
      return chi_spectral_quadrature(PulseSequence::cpmg(options.pulses, t), line, options.quadrature)
          .value;
  }
  throw DomainError("unknown chi route");
}

CoherenceTrace coherence_trace(const SystemSpec& spec, const TraceOptions& options,
                               std::span<const double> times) {
  spec.validate();
  if (options.pulses < 1) throw DomainError("coherence trace needs N >= 1");
  CoherenceTrace trace;
  trace.times.assign(times.begin(), times.end());
  trace.l_ideal.resize(times.size());
  trace.l_bg.resize(times.size());
  trace.l_total.resize(times.size());
  parallel_for(times.size(), options.workers, [&](std::size_t i) {
    const double t = times[i];
    const double ideal = std::exp(-0.5 * cpmg_chi(spec, options, t));
    const double bg = background_coherence(options.pulses, t, spec, options.mechanisms);
    trace.l_ideal[i] = ideal;
    trace.l_bg[i] = bg;
    trace.l_total[i] = ideal * bg;
  });
  return trace;
}

}  // namespace tcomb
