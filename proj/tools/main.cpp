#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "toasync/toasync.h"

#include "commands.hpp"
#include "config.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Configuration file (key = value)");
  cmd->add_option("--out", args.out_path, "Output CSV path");
  cmd->add_option("--seed", args.seed, "Master seed override")
      ->each([&args](const std::string&) { args.seed_set = true; });
}

toasync_cli::RunConfig resolve(const CommonArgs& args) {
  toasync_cli::RunConfig config = args.config_path.empty()
                                      ? toasync_cli::RunConfig{}
                                      : toasync_cli::load_config_file(args.config_path);
  if (args.seed_set) toasync_cli::apply_seed_override(config, args.seed);
  if (!args.out_path.empty()) config.output_path = args.out_path;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint TOA localization and clock-bias estimation toolkit"};
  app.set_version_flag("--version", std::string(toasync_version()));
  app.require_subcommand(1);

  CommonArgs sim_args, track_args, crlb_args, mc_args;
  std::string in_path, truth_path;

  CLI::App* sim = app.add_subcommand(
      "simulate", "Generate a trajectory and write measurement + truth CSVs");
  add_common(sim, sim_args);
  sim->add_option("--truth-out", truth_path, "Truth CSV path (default: derived from --out)");

  CLI::App* track = app.add_subcommand(
      "track", "Estimate positions and clock biases from a measurement CSV");
  add_common(track, track_args);
  track->add_option("--in", in_path, "Input measurement CSV")->required();

  CLI::App* crlb = app.add_subcommand(
      "crlb", "Write square-root CRLB curves for the configured trajectory");
  add_common(crlb, crlb_args);

  CLI::App* mc = app.add_subcommand(
      "mc", "Run the Monte-Carlo experiment and write RMSE/CRLB curves");
  add_common(mc, mc_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) {
      const auto config = resolve(sim_args);
      toasync_cli::command_simulate(config, config.output_path, truth_path);
    } else if (track->parsed()) {
      const auto config = resolve(track_args);
      toasync_cli::command_track(config, in_path, config.output_path);
    } else if (crlb->parsed()) {
      const auto config = resolve(crlb_args);
      toasync_cli::command_crlb(config, config.output_path);
    } else if (mc->parsed()) {
      const auto config = resolve(mc_args);
      toasync_cli::command_mc(config, config.output_path);
    }
  } catch (const toasync_cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const toasync_cli::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
