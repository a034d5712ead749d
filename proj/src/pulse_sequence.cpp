#include "tcomb/pulse_sequence.hpp"

#include <cmath>
#include <string>

#include "tcomb/errors.hpp"

namespace tcomb {

PulseSequence::PulseSequence(double total_time, std::vector<double> pulse_times)
    : total_time_(total_time), pulse_times_(std::move(pulse_times)) {
  if (!std::isfinite(total_time_) || total_time_ < 0.0) {
    throw DomainError("total time must be finite and non-negative");
  }
  double previous = 0.0;
  for (std::size_t j = 0; j < pulse_times_.size(); ++j) {
    const double tj = pulse_times_[j];
    if (!(tj > previous) || !(tj < total_time_)) {
      throw DomainError("pulse " + std::to_string(j + 1) +
                        " is not strictly increasing inside (0, t)");
    }
    previous = tj;
  }
}

PulseSequence PulseSequence::cpmg(int pulses, double total_time) {
  if (pulses < 0) throw DomainError("pulse count must be non-negative");
  if (pulses > 0 && !(total_time > 0.0)) throw DomainError("CPMG needs t > 0");
  std::vector<double> times(static_cast<std::size_t>(pulses));
  for (int j = 1; j <= pulses; ++j) {
    times[static_cast<std::size_t>(j - 1)] = (2.0 * j - 1.0) / (2.0 * pulses) * total_time;
  }
  return PulseSequence(total_time, std::move(times));
}

PulseSequence PulseSequence::free_evolution(double total_time) {
  return PulseSequence(total_time, {});
}

}  // namespace tcomb
