#pragma once

#include <cstdint>
#include <vector>

#include "osatcom/beamform.hpp"
#include "osatcom/channel_models.hpp"
#include "osatcom/common.hpp"

namespace osatcom {

/// Walsh-Hadamard spreading code; chips in {+1, -1}, length a power of two.
struct SpreadingCode {
  std::vector<int> chips;
  int length() const { return static_cast<int>(chips.size()); }
};

SpreadingCode walsh_code(int length, int index);

std::vector<double> spread(const std::vector<double>& symbols,
                           const SpreadingCode& code);
std::vector<double> despread(const std::vector<double>& chips,
                             const SpreadingCode& code);

struct NetworkConfig {
  int num_cells_a = 2;
  int dim_m = 2;
  FadingSpec fading = FadingSpec::nakagami(0.8, 1.0);
  double xi = 0.0;
  double a_r_db = 0.0;
  double p_th = 1.0;   // transmit power, Watt
  double i_th = 0.1;   // per-neighbor interference cap, Watt
  std::vector<double> snr_sweep_db;
  long trials = 1000;
  std::uint64_t seed = 1;
  int threads = 1;

  void validate() const;
};

/// Monte Carlo outcome at one SNR sweep point.
struct TrialResult {
  double snr_db = 0.0;
  std::vector<double> per_cell_ber;
  double network_error = 0.0;
  double mean_capacity = 0.0;
  std::vector<double> solver_opt_values;
  bool insufficient_errors = false;  // fewer than 100 errors observed
};

struct Interferer {
  cxmat weight;
  cxmat channel;
  cxmat symbols;
};

/// Received block Y = H1 B S + sum_b H2_b B_b S_b + N with i.i.d. circular
/// complex Gaussian sky noise of per-entry variance noise_var. The
/// atmospheric impact matrix is fixed to identity.
cxmat assemble_received(const cxmat& weight, const cxmat& h1,
                        const std::vector<Interferer>& interferers,
                        double noise_var, const cxmat& symbols, Rng& rng);

/// BPSK BER over fresh fading draws per trial, maximum-ratio detection with
/// perfect receive CSI, rain applied to the signal power. Per-trial seeded
/// streams make the result independent of thread count.
std::vector<TrialResult> ber_bpsk_montecarlo(
    const NetworkConfig& config, const std::vector<BeamSolution>& solutions);

double network_error_probability(const std::vector<double>& per_cell);

struct ConvergenceSeries {
  std::vector<int> budgets;
  std::vector<double> std_dev_robust;
  std::vector<double> std_dev_baseline;
};

/// Standard deviation of the optimal objective across runs with perturbed
/// initial dual states, per iteration budget, for the worst-case-bound
/// formulation and the reverse-triangle baseline side by side.
ConvergenceSeries convergence_stats(
    const std::vector<CellProblem>& robust_problems,
    const std::vector<CellProblem>& baseline_problems,
    const SolveOptions& base_options, int runs,
    const std::vector<int>& budgets, double perturb_scale,
    std::uint64_t seed);

}  // namespace osatcom
