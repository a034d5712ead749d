#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tcomb/cli/commands.hpp"
#include "tcomb/cli/config.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string preset_name;
  std::string out;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "key = value configuration file");
  cmd->add_option("--preset", flags.preset_name, "parameter preset")->check(CLI::IsMember({"fig2", "fig3"}));
  cmd->add_option("--out", flags.out, "CSV output path (default: standard output)");
  cmd->add_option("--seed", flags.seed, "base RNG seed");
  cmd->add_option("--workers", flags.workers, "worker threads (0 = all cores)");
  cmd->add_option("--set", flags.overrides, "override a configuration key, key=value")->allow_extra_args(false);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace tcomb::cli;
  CLI::App app{"Qubit time-comb mass sensing: coherence traces, peaks, sensitivity, estimation"};
  app.require_subcommand(1);
  CommonFlags flags;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"comb", "coherence trace |L(t)| on a time grid"},
      {"peaks", "comb peak catalog for the first segment"},
      {"sensitivity", "mass sensitivity versus pulse number"},
      {"optimize", "analytic and numeric optimal pulse number"},
      {"estimate", "Monte Carlo readout and mass-shift estimation"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  const CLI::App* sub = app.get_subcommands().front();

  RunConfig config;
  try {
    if (!flags.preset_name.empty()) config = preset(flags.preset_name);
    if (!flags.config_path.empty()) config = load_config_file(flags.config_path, config);
    for (const auto& item : flags.overrides) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + item + "'");
      apply_setting(config, item.substr(0, eq), item.substr(eq + 1));
    }
    if (sub->count("--out") > 0) config.out = flags.out;
    if (sub->count("--seed") > 0) config.seed = flags.seed;
    if (sub->count("--workers") > 0) config.workers = flags.workers;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  return run_command(command, config, {std::cout, std::cerr});
}
