#pragma once

#include <cstdint>

#include "tcomb/system.hpp"

namespace tcomb {

/// Counter-based uniform stream: the i-th draw depends only on (key, i).
class TrialStream {
 public:
  explicit TrialStream(std::uint64_t key) : key_(key) {}
  static TrialStream derive(std::uint64_t seed, std::uint64_t role);

  /// Uniform double in [0, 1).
  double uniform(std::uint64_t index) const;
  std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
};

struct MeasurementPlan {
  int pulses = 100;
  double measurement_time = 0.0;  ///< seconds; 0 selects t_q* + flank_offset / gamma_q*
  double flank_offset = 1.0;      ///< gamma (t - t_q*), used when measurement_time is 0
  std::int64_t runs = 1'000'000;  ///< N_run
  double contrast = 1.0;          ///< C
  std::uint64_t seed = 1;
  double mass_shift = 0.0;        ///< true dM/M of the perturbed oscillator
  unsigned workers = 1;
};

/// Readout time actually used by `plan` for `spec`.
double operating_time(const SystemSpec& spec, const MeasurementPlan& plan);

/// Noise-free |L_total| a readout at time t sees: CPMG against the delta line
/// (or the Lorentzian when Q is finite) times the T1/T2 background.
double readout_coherence(const SystemSpec& spec, int pulses, double t);

/// Number of 1 outcomes among plan.runs Bernoulli trials with
/// p = 1/2 + C L / 2 evaluated for `spec` at the plan's measurement time.
/// `role` selects an independent stream for the same seed.
std::int64_t simulate_readout(const MeasurementPlan& plan, const SystemSpec& spec,
                              double measurement_time, std::uint64_t role = 0);

struct CoherenceEstimate {
  double l_hat = 0.0;
  double sigma = 0.0;
  bool clamped = false;
};

/// L = (2 p - 1)/C, sigma = 2 sqrt(p(1-p)/N_run)/C, clamped to [-1, 1].
CoherenceEstimate estimate_coherence(std::int64_t counts, std::int64_t runs, double contrast);

struct EstimateReport {
  std::uint64_t seed = 0;
  double measurement_time = 0.0;
  double t_qstar = 0.0;
  double gamma_qstar = 0.0;
  CoherenceEstimate reference;
  CoherenceEstimate perturbed;
  double dl_over_l = 0.0;
  double dm_over_m = 0.0;
  double sigma_dm_over_m = 0.0;
  double sigma_bound = 0.0;        ///< 1/(C sqrt(N_run)), binomial upper bound on sigma_L
  double total_time = 0.0;         ///< N_run t_q*
  double predicted_sigma = 0.0;    ///< sensitivity_full / (M sqrt(T_tot))
};

/// Two-point protocol: read out the reference and the mass-shifted
/// oscillator at the same time on the late flank of the narrowest peak and
/// invert the coherence change. Throws OperatingPointError when the
/// reference coherence estimate falls below 0.1.
EstimateReport estimate_mass_shift(const SystemSpec& reference, const MeasurementPlan& plan);

}  // namespace tcomb
