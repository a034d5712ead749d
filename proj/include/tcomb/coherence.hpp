#pragma once

#include <span>
#include <vector>

#include "tcomb/dephasing.hpp"
#include "tcomb/system.hpp"

namespace tcomb {

/// Which decay channels are switched on.
struct Mechanisms {
  bool t1 = false;
  bool t2 = false;
  bool q = false;

  static constexpr Mechanisms none() { return {}; }
  static constexpr Mechanisms all() { return {true, true, true}; }
  static constexpr Mechanisms only_t1() { return {true, false, false}; }
  static constexpr Mechanisms only_t2() { return {false, true, false}; }
  static constexpr Mechanisms only_q() { return {false, false, true}; }
  static constexpr Mechanisms background() { return {true, true, false}; }

  bool operator==(const Mechanisms&) const = default;
};

/// exp[-t/T1 - (t / (T2 N^s))^3], with each term gated by `mechanisms`.
double background_coherence(int pulses, double t, const SystemSpec& spec,
                            Mechanisms mechanisms = Mechanisms::background());

enum class ChiRoute {
  closed,      ///< CPMG closed form (delta line only)
  piecewise,   ///< chi_delta_general (delta line only)
  quadrature,  ///< chi_spectral_quadrature (delta or Lorentzian)
};

enum class SpectrumKind { delta, lorentzian };

struct TraceOptions {
  int pulses = 100;
  SpectrumKind spectrum = SpectrumKind::delta;
  ChiRoute route = ChiRoute::closed;
  Mechanisms mechanisms = Mechanisms::none();
  QuadratureOptions quadrature{};
  unsigned workers = 1;
};

struct CoherenceTrace {
  std::vector<double> times;
  std::vector<double> l_ideal;
  std::vector<double> l_bg;
  std::vector<double> l_total;
};

/// chi at one time for a CPMG sequence, dispatching on route and spectrum.
double cpmg_chi(const SystemSpec& spec, const TraceOptions& options, double t);

/// |L(t)| on the given grid. Samples are independent and may be computed on
/// `options.workers` threads; the result does not depend on the worker count.
CoherenceTrace coherence_trace(const SystemSpec& spec, const TraceOptions& options,
                               std::span<const double> times);

}  // namespace tcomb
