#pragma once

#include <span>
#include <vector>

#include "tcomb/coherence.hpp"
#include "tcomb/system.hpp"

namespace tcomb {

/// One recovery peak of the time comb, L ~ exp[-gamma^2 (t - t_q)^2 / 2].
struct PeakDescriptor {
  int q = 0;
  double t_q = 0.0;             ///< q T0, seconds
  double gamma = 0.0;           ///< 1/s, lambda_tilde (sec(pi q / N) - 1)
  double width_expansion = 0.0; ///< 2 sqrt(2) / gamma
  double height = 1.0;          ///< includes the enabled penalties
  bool is_qstar = false;
};

struct PeakCatalog {
  int pulses = 0;
  int q_star = 0;
  double width_closed_form = 0.0;       ///< T0 / (N Lambda sqrt(2 n_th + 1)), narrowest peak only
  std::vector<PeakDescriptor> peaks;  ///< q = 1 .. N/2 - 1
  std::vector<int> missing;     ///< odd multiples of N/2 bounding the segment
};

struct PeakOptions {
  Mechanisms mechanisms = Mechanisms::none();
  QuadratureOptions quadrature{};
  unsigned workers = 1;
};

/// gamma_q from the second-order expansion of the CPMG closed form.
double peak_gamma(const SystemSpec& spec, int pulses, int q);

/// Width of the narrowest peak as printed in the original closed form,
/// T0 / (N Lambda sqrt(2 n_th + 1)). It is smaller than 2 sqrt(2)/gamma_{q*}
/// by about sqrt(2).
double peak_width_closed_form(const SystemSpec& spec, int pulses);

/// (N/2 - 1) T0.
double narrowest_peak_time(const SystemSpec& spec, int pulses);

/// Peaks of the first comb segment for even N >= 2.
PeakCatalog peak_catalog(const SystemSpec& spec, int pulses, const PeakOptions& options = {});

/// First-order inversion of a coherence change on the peak flank:
///   dM/M = 2 (dL/L) / (gamma^2 t_offset t_q*).
/// The factor 2 is dM/M = 2 dw0/w0. Requires 0.3 <= |gamma t_offset| <= 3.
double mass_shift_from_coherence(double dl_over_l, double gamma_qstar, double t_offset,
                                 double t_qstar);

/// M / ((2N)^{3/2} Lambda sqrt(kB T / h)), g/sqrt(Hz).
double sensitivity_ideal(const SystemSpec& spec, int pulses);

/// n_th >= 10, where the high-temperature form of sensitivity_ideal holds.
bool high_temperature_regime(const SystemSpec& spec);

enum class PenaltyRoute {
  closed,      ///< 4 lt2 N^3 / (w0^2 Q)
  quadrature,  ///< chi_spectral_quadrature at t_q*
};

struct SensitivityOptions {
  Mechanisms mechanisms = Mechanisms::all();
  PenaltyRoute penalty = PenaltyRoute::closed;
  QuadratureOptions quadrature{};
};

/// chi at the narrowest peak from the finite-Q Lorentzian broadening.
double finite_q_chi(const SystemSpec& spec, int pulses, PenaltyRoute route,
                    const QuadratureOptions& quadrature = {});

/// sensitivity_ideal x exp(chi_Q/2) x L_bg(t_q*)^-1 x 1/C, each decay
/// factor gated by options.mechanisms.
double sensitivity_full(const SystemSpec& spec, int pulses, const SensitivityOptions& options = {});

/// Unrounded optimum (w0 / 2 lambda) (hbar lambda Q / kB T)^{1/3}.
double optimal_n_continuous(const SystemSpec& spec);

/// optimal_n_continuous rounded to the nearest even integer >= 2.
int optimal_N_analytic(const SystemSpec& spec);

/// M / sqrt(f0 Q), the temperature-independent optimum.
double eta_optimal_universal(const SystemSpec& spec);

struct OptimizeResult {
  int n_opt = 0;
  double eta_opt = 0.0;
  double eta_universal = 0.0;
  bool bracketed = false;
};

/// Exhaustive scan of sensitivity_full over `n_values` (ascending even N).
/// Ties go to the smaller N. Throws NoBracketError when the argmin lies on
/// the range boundary and `require_bracket` is set.
OptimizeResult optimize_sensitivity_numeric(const SystemSpec& spec, std::span<const int> n_values,
                                            const SensitivityOptions& options = {},
                                            bool require_bracket = true, unsigned workers = 1);

/// Even integers in [lo, hi].
std::vector<int> even_range(int lo, int hi);

/// Even N up to 256, then steps of 16 up to 2048.
std::vector<int> default_n_sweep();

struct SensitivityRecord {
  int pulses = 0;
  double t_qstar = 0.0;
  double eta_ideal = 0.0;
  double eta_t1 = 0.0;
  double eta_t2 = 0.0;
  double eta_q = 0.0;
  double eta_all = 0.0;
};

using SensitivityCurve = std::vector<SensitivityRecord>;

/// One record per N, in the order given, computed on `workers` threads.
SensitivityCurve sensitivity_curve(const SystemSpec& spec, std::span<const int> n_values,
                                   PenaltyRoute penalty = PenaltyRoute::closed,
                                   unsigned workers = 1);

}  // namespace tcomb
