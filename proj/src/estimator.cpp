#include "tcomb/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "tcomb/coherence.hpp"
#include "tcomb/errors.hpp"
#include "tcomb/parallel.hpp"
#include "tcomb/sensitivity.hpp"

namespace tcomb {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::int64_t kBlock = 1 << 16;

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double success_probability(double contrast, double coherence) {
  const double p = 0.5 + 0.5 * contrast * coherence;
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::logic_error("readout probability " + std::to_string(p) + " outside [0, 1]");
  }
  return p;
}

// Blocks are fixed-size so the per-block counts, and their sum, do not
// depend on how blocks are spread over workers.
std::int64_t count_ones(const TrialStream& stream, std::int64_t runs, double p, unsigned workers) {
  const auto blocks = static_cast<std::size_t>((runs + kBlock - 1) / kBlock);
  std::vector<std::int64_t> partial(blocks, 0);
  parallel_for(blocks, workers, [&](std::size_t b) {
    const std::int64_t begin = static_cast<std::int64_t>(b) * kBlock;
    const std::int64_t end = std::min(runs, begin + kBlock);
    std::int64_t ones = 0;
    for (std::int64_t i = begin; i < end; ++i) {
      ones += stream.uniform(static_cast<std::uint64_t>(i)) < p ? 1 : 0;
    }
    partial[b] = ones;
  });
  std::int64_t total = 0;
  for (auto c : partial) total += c;
  return total;
}

}  // namespace

TrialStream TrialStream::derive(std::uint64_t seed, std::uint64_t role) {
  return TrialStream(mix64(mix64(seed) + (role + 1) * kGolden));
}

double TrialStream::uniform(std::uint64_t index) const {
  return static_cast<double>(mix64(key_ + (index + 1) * kGolden) >> 11) * 0x1.0p-53;
}

double operating_time(const SystemSpec& spec, const MeasurementPlan& plan) {
  if (plan.measurement_time > 0.0) return plan.measurement_time;
  const int q_star = plan.pulses / 2 - 1;
  return narrowest_peak_time(spec, plan.pulses) +
         plan.flank_offset / peak_gamma(spec, plan.pulses, q_star);
}

double readout_coherence(const SystemSpec& spec, int pulses, double t) {
  double chi = 0.0;
  if (t > 0.0) {
    if (std::isfinite(spec.quality_factor)) {
      chi = chi_spectral_quadrature(PulseSequence::cpmg(pulses, t), lorentzian_spectrum(spec)).value;
    } else {
      chi = chi_cpmg_closed(pulses, spec.omega0(), lambda_tilde_sq(spec), t).value;
    }
  }
  return std::exp(-0.5 * chi) * background_coherence(pulses, t, spec, Mechanisms::background());
}

std::int64_t simulate_readout(const MeasurementPlan& plan, const SystemSpec& spec,
                              double measurement_time, std::uint64_t role) {
  if (plan.runs < 1) throw DomainError("need at least one trial");
  const double p =
      success_probability(plan.contrast, readout_coherence(spec, plan.pulses, measurement_time));
  return count_ones(TrialStream::derive(plan.seed, role), plan.runs, p, plan.workers);
}

CoherenceEstimate estimate_coherence(std::int64_t counts, std::int64_t runs, double contrast) {
  if (runs < 1 || counts < 0 || counts > runs) throw DomainError("need 0 <= counts <= runs, runs >= 1");
  if (!(contrast > 0.0 && contrast <= 1.0)) throw DomainError("contrast must lie in (0, 1]");
  const double p = static_cast<double>(counts) / static_cast<double>(runs);
  CoherenceEstimate e;
  e.l_hat = (2.0 * p - 1.0) / contrast;
  e.sigma = 2.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(runs)) / contrast;
  if (e.l_hat > 1.0 || e.l_hat < -1.0) {
    e.l_hat = std::clamp(e.l_hat, -1.0, 1.0);
    e.clamped = true;
  }
  return e;
}

EstimateReport estimate_mass_shift(const SystemSpec& reference, const MeasurementPlan& plan) {
  reference.validate();
  if (plan.runs < 1) throw DomainError("need at least one trial");
  SystemSpec spec = reference;
  spec.readout_contrast = plan.contrast;
  spec.validate();

  EstimateReport r;
  r.seed = plan.seed;
  r.t_qstar = narrowest_peak_time(spec, plan.pulses);
  r.gamma_qstar = peak_gamma(spec, plan.pulses, plan.pulses / 2 - 1);
  r.measurement_time = operating_time(spec, plan);
  const double t_offset = r.measurement_time - r.t_qstar;

  const SystemSpec perturbed = spec.with_mass_shift(plan.mass_shift);
  const auto counts_ref = simulate_readout(plan, spec, r.measurement_time, 0);
  const auto counts_pert = simulate_readout(plan, perturbed, r.measurement_time, 1);
  r.reference = estimate_coherence(counts_ref, plan.runs, plan.contrast);
  r.perturbed = estimate_coherence(counts_pert, plan.runs, plan.contrast);
  if (r.reference.l_hat < 0.1) {
    throw OperatingPointError("reference coherence " + std::to_string(r.reference.l_hat) +
                              " is below 0.1 at the operating point; background decay is too strong");
  }

  const double l_ref = r.reference.l_hat;
  const double ratio = r.perturbed.l_hat / l_ref;
  r.dl_over_l = ratio - 1.0;
  r.dm_over_m = mass_shift_from_coherence(r.dl_over_l, r.gamma_qstar, t_offset, r.t_qstar);
  const double sigma_dl = std::hypot(r.perturbed.sigma, ratio * r.reference.sigma) / l_ref;
  r.sigma_dm_over_m =
      std::abs(mass_shift_from_coherence(sigma_dl, r.gamma_qstar, t_offset, r.t_qstar));
  r.sigma_bound = 1.0 / (plan.contrast * std::sqrt(static_cast<double>(plan.runs)));
  r.total_time = static_cast<double>(plan.runs) * r.t_qstar;
  r.predicted_sigma =
      sensitivity_full(spec, plan.pulses, {Mechanisms::all(), PenaltyRoute::closed, {}}) /
      (spec.mass_g * std::sqrt(r.total_time));
  return r;
}

}  // namespace tcomb
