#pragma once

#include <span>
#include <vector>

namespace tcomb {

/// Instantaneous pi pulses at strictly increasing times inside (0, t).
class PulseSequence {
 public:
  /// Throws DomainError unless 0 < t_1 < ... < t_N < total_time.
  PulseSequence(double total_time, std::vector<double> pulse_times);

  /// Carr-Purcell-Meiboom-Gill: t_j = (2j - 1) t / (2N), j = 1..N.
  static PulseSequence cpmg(int pulses, double total_time);

  /// No pulses (free induction decay).
  static PulseSequence free_evolution(double total_time);

  double total_time() const noexcept { return total_time_; }
  std::span<const double> pulse_times() const noexcept { return pulse_times_; }
  int pulse_count() const noexcept { return static_cast<int>(pulse_times_.size()); }

 private:
  double total_time_;
  std::vector<double> pulse_times_;
};

}  // namespace tcomb
