#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "osatcom/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"MIMO CDMA optical SATCOM simulation and optimization toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir;
  long trials = 0;
  bool trials_set = false;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config_path, "Experiment config file (JSON)")
      ->required();
  run->add_option("--seed", seed, "Override the config seed")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_option("--out", out_dir, "Override the output directory");
  run->add_option("--trials", trials, "Override the Monte Carlo trial count")
      ->each([&](const std::string&) { trials_set = true; });
  run->add_flag("--quiet", quiet, "Suppress progress output");

  auto* validate = app.add_subcommand(
      "validate", "List every violated invariant without running");
  validate->add_option("config", config_path, "Experiment config file (JSON)")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(validate)) {
      const auto report = osatcom::validate_config_file(config_path);
      for (const auto& line : report) std::cout << line << "\n";
      return report.empty() ? 0 : 1;
    }

    const auto config = osatcom::parse_experiment_config(config_path);
    osatcom::RunOverrides overrides;
    if (seed_set) overrides.seed = seed;
    if (!out_dir.empty()) overrides.out_dir = out_dir;
    if (trials_set) overrides.trials = trials;
    overrides.quiet = quiet;
    const auto written = osatcom::run_experiment(config, overrides);
    if (!quiet)
      for (const auto& path : written)
        std::cout << "wrote " << path.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
