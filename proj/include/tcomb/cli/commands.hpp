#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tcomb/cli/config.hpp"

namespace tcomb::cli {

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 2,
  kIoError = 3,
  kComputeError = 4,
};

struct Streams {
  std::ostream& out;  ///< CSV when no output path is set, and summaries
  std::ostream& err;  ///< notes and diagnostics
};

/// Time grid with any closed-form divergence point pushed up by a few ulps.
/// Each nudge is reported on `err`.
std::vector<double> comb_time_grid(const RunConfig& config, std::ostream& err);

std::string comb_csv(const RunConfig& config, std::ostream& err);
std::string peaks_csv(const RunConfig& config, std::ostream& summary);
std::string sensitivity_csv(const RunConfig& config, std::ostream& err);
std::string optimize_csv(const RunConfig& config, std::ostream& summary);
std::string estimate_csv(const RunConfig& config, std::ostream& summary);

/// Runs a subcommand by name and maps failures onto exit codes.
int run_command(const std::string& name, const RunConfig& config, Streams streams);

}  // namespace tcomb::cli
