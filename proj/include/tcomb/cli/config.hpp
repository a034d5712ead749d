#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tcomb/coherence.hpp"
#include "tcomb/sensitivity.hpp"
#include "tcomb/system.hpp"

namespace tcomb::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OptimizeMode { all, q_only };

/// Everything a subcommand needs. Keys in the text format carry their unit
/// in the name (f0_hz, mass_g, qubit_t1_s, temperature_k, ...).
struct RunConfig {
  SystemSpec system = fig2_system();
  std::vector<double> temperatures_k;  ///< sweep temperatures; empty uses system.temperature_k

  // comb / peaks
  int pulses = 100;
  double t_min_s = 0.0;
  double t_max_s = 5.0e-4;
  int n_points = 5001;
  SpectrumKind spectrum = SpectrumKind::delta;
  ChiRoute chi_route = ChiRoute::closed;
  Mechanisms mechanisms = Mechanisms::none();

  // sensitivity / optimize
  PenaltyRoute penalty_route = PenaltyRoute::closed;
  std::vector<int> n_values;  ///< empty selects default_n_sweep()
  int optimize_n_min = 2;
  int optimize_n_max = 0;     ///< 0 selects max(2048, 4 N_opt)
  OptimizeMode optimize_mode = OptimizeMode::all;

  // estimate
  std::int64_t runs = 1'000'000;
  double mass_shift = 1.0e-6;
  int n_seeds = 100;
  std::uint64_t seed = 1;
  double flank_offset = 1.0;
  double measurement_time_s = 0.0;  ///< 0 selects t_q* + flank_offset / gamma

  std::string out;      ///< empty writes the CSV to standard output
  unsigned workers = 1; ///< 0 uses all hardware threads

  bool operator==(const RunConfig&) const = default;

  /// Temperatures to sweep, ascending.
  std::vector<double> sweep_temperatures() const;
  std::vector<int> sweep_n_values() const;
};

/// "fig2" or "fig3"; throws ConfigError otherwise.
RunConfig preset(std::string_view name);

/// Sets one key from its text value. Throws ConfigError.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Applies a `key = value` document (# starts a comment) on top of `base`.
RunConfig parse_config(std::string_view text, RunConfig base = {});

/// Reads and parses a file; throws ConfigError when it cannot be read.
RunConfig load_config_file(const std::string& path, RunConfig base = {});

/// Every key, one per line, in a form parse_config reads back exactly.
std::string serialize_config(const RunConfig& config);

/// Re-checks all physical and command invariants. Throws ConfigError.
void validate_config(const RunConfig& config);

}  // namespace tcomb::cli
