#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "osatcom/channel_models.hpp"
#include "osatcom/link_sim.hpp"
#include "osatcom/pulse.hpp"

namespace osatcom {

inline constexpr const char* kToolkitVersion = "0.1.0";

enum class ExperimentKind { Pulse, Dispersion, Beamform, BerSweep, Convergence };

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Pulse;
  std::uint64_t seed = 1;
  std::filesystem::path output_path = "out";
  nlohmann::json parameters;  // validated, experiment-specific
};

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out_dir;
  std::optional<long> trials;
  bool quiet = false;
};

struct config_parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Strict parse: unknown keys, missing keys, and type mismatches are errors.
ExperimentConfig parse_experiment_config(const std::filesystem::path& path);
ExperimentConfig parse_experiment_config_json(const nlohmann::json& j);

/// Lists every violated invariant without running anything.
std::vector<std::string> validate_config_file(
    const std::filesystem::path& path);

/// Runs the experiment, writes the CSV outputs plus manifest.json into the
/// output directory. Returns the paths written.
std::vector<std::filesystem::path> run_experiment(
    const ExperimentConfig& config, const RunOverrides& overrides = {});

/// Number of worker threads for Monte Carlo trials; honors OSATCOM_THREADS.
int trial_thread_count();

FadingSpec fading_from_json(const nlohmann::json& j);

}  // namespace osatcom
