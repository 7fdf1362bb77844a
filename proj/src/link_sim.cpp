#include "osatcom/link_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <thread>

namespace osatcom {

SpreadingCode walsh_code(int length, int index) {
  if (length < 1 || (length & (length - 1)) != 0)
    throw invalid_parameter("walsh_code: length must be a power of two");
  if (index < 0 || index >= length)
    throw invalid_parameter("walsh_code: index out of range");
  SpreadingCode code;
  code.chips.resize(length);
  for (int t = 0; t < length; ++t) {
    // Hadamard entry: parity of the AND of row and column indices
    const int bits = t & index;
    code.chips[t] = (std::popcount(static_cast<unsigned>(bits)) % 2 == 0)
                        ? 1
                        : -1;
  }
  return code;
}

std::vector<double> spread(const std::vector<double>& symbols,
                           const SpreadingCode& code) {
  if (code.chips.empty()) throw invalid_parameter("spread: empty code");
  std::vector<double> out;
  out.reserve(symbols.size() * code.chips.size());
  for (double s : symbols)
    for (int c : code.chips) out.push_back(s * c);
  return out;
}

std::vector<double> despread(const std::vector<double>& chips,
                             const SpreadingCode& code) {
  const std::size_t n = code.chips.size();
  if (n == 0) throw invalid_parameter("despread: empty code");
  if (chips.size() % n != 0)
    throw dimension_mismatch("despread: chip count not a multiple of length");
  std::vector<double> out(chips.size() / n, 0.0);
  for (std::size_t s = 0; s < out.size(); ++s) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      acc += chips[s * n + k] * code.chips[k];
    out[s] = acc / static_cast<double>(n);
  }
  return out;
}

void NetworkConfig::validate() const {
  if (num_cells_a < 1) throw invalid_parameter("network: A must be >= 1");
  if (dim_m < 1) throw invalid_parameter("network: M must be >= 1");
  if (trials < 1) throw invalid_parameter("network: trials must be >= 1");
  if (snr_sweep_db.empty())
    throw invalid_parameter("network: SNR sweep must be non-empty");
  if (xi < 0.0) throw invalid_parameter("network: xi must be >= 0");
  if (!(p_th > 0.0) || !(i_th > 0.0))
    throw invalid_parameter("network: power and interference caps must be > 0");
  fading.validate();
}

cxmat assemble_received(const cxmat& weight, const cxmat& h1,
                        const std::vector<Interferer>& interferers,
                        double noise_var, const cxmat& symbols, Rng& rng) {
  require_same_dim(weight, h1, "assemble_received");
  if (weight.cols() != symbols.rows())
    throw dimension_mismatch("assemble_received: symbol block height");
  if (noise_var < 0.0)
    throw invalid_parameter("assemble_received: noise variance must be >= 0");
  cxmat y = h1 * weight * symbols;
  for (const auto& intf : interferers) {
    require_same_dim(intf.channel, h1, "assemble_received interferer");
    if (intf.weight.cols() != intf.symbols.rows() ||
        intf.symbols.cols() != symbols.cols())
      throw dimension_mismatch("assemble_received: interferer block shape");
    y += intf.channel * intf.weight * intf.symbols;
  }
  if (noise_var > 0.0)
    for (Eigen::Index j = 0; j < y.cols(); ++j)
      for (Eigen::Index i = 0; i < y.rows(); ++i)
        y(i, j) += rng.circular_gaussian(noise_var);
  return y;
}

namespace {

/// Dominant transmit direction of a weight Gram matrix, scaled so that
/// ||b||^2 = Tr{q}.
cxvec beam_from_gram(const cxmat& q) {
  Eigen::SelfAdjointEigenSolver<cxmat> es(cxmat(0.5 * (q + q.adjoint())));
  const int top = static_cast<int>(q.rows()) - 1;
  cxvec v = es.eigenvectors().col(top);
  const double power = std::max(0.0, q.trace().real());
  return std::sqrt(power) * v;
}

}  // namespace

std::vector<TrialResult> ber_bpsk_montecarlo(
    const NetworkConfig& config, const std::vector<BeamSolution>& solutions) {
  config.validate();
  if (static_cast<int>(solutions.size()) != config.num_cells_a)
    throw dimension_mismatch("ber_bpsk_montecarlo: one solution per cell");

  const int a_cells = config.num_cells_a;
  const int m = config.dim_m;
  const double rain_amp = std::sqrt(db_to_linear(-config.a_r_db));

  std::vector<cxvec> beams(a_cells);
  std::vector<double> capacities(a_cells);
  for (int a = 0; a < a_cells; ++a) {
    beams[a] = beam_from_gram(solutions[a].q);
    capacities[a] = solutions[a].capacity;
  }
  const double mean_cap =
      std::accumulate(capacities.begin(), capacities.end(), 0.0) /
      static_cast<double>(a_cells);

  std::vector<TrialResult> results;
  results.reserve(config.snr_sweep_db.size());

  for (std::size_t pt = 0; pt < config.snr_sweep_db.size(); ++pt) {
    const double snr_db = config.snr_sweep_db[pt];
    const double noise_var = std::pow(10.0, -snr_db / 10.0);

    auto run_trial = [&](long trial, std::vector<long>& errors) {
      Rng rng(Rng::derive(config.seed, pt, static_cast<std::uint64_t>(trial)));
      // one BPSK symbol per cell per trial, fresh channels everywhere
      std::vector<double> sym(a_cells);
      std::vector<cxmat> h1(a_cells);
      for (int a = 0; a < a_cells; ++a) {
        sym[a] = rng.uniform() < 0.5 ? -1.0 : 1.0;
        h1[a] = sample_channel_matrix(config.fading, m, rng);
      }
      for (int a = 0; a < a_cells; ++a) {
        cxvec h_eff = rain_amp * (h1[a] * beams[a]);
        cxvec y = h_eff * sym[a];
        for (int b = 0; b < a_cells; ++b) {
          if (b == a) continue;
          cxmat h2 = sample_channel_matrix(config.fading, m, rng);
          y += rain_amp * (h2 * beams[b]) * sym[b];
        }
        for (int i = 0; i < m; ++i) y(i) += rng.circular_gaussian(noise_var);
        const double stat = (h_eff.adjoint() * y)(0, 0).real();
        const double decided = stat >= 0.0 ? 1.0 : -1.0;
        if (decided != sym[a]) ++errors[a];
      }
    };

    const int nthreads = std::max(1, config.threads);
    std::vector<std::vector<long>> partial(
        nthreads, std::vector<long>(a_cells, 0));
    if (nthreads == 1) {
      for (long t = 0; t < config.trials; ++t) run_trial(t, partial[0]);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < nthreads; ++w)
        pool.emplace_back([&, w] {
          for (long t = w; t < config.trials; t += nthreads)
            run_trial(t, partial[w]);
        });
      for (auto& th : pool) th.join();
    }
    std::vector<long> errors(a_cells, 0);
    for (const auto& p : partial)
      for (int a = 0; a < a_cells; ++a) errors[a] += p[a];

    TrialResult r;
    r.snr_db = snr_db;
    r.per_cell_ber.resize(a_cells);
    long min_errors = config.trials;
    for (int a = 0; a < a_cells; ++a) {
      r.per_cell_ber[a] =
          static_cast<double>(errors[a]) / static_cast<double>(config.trials);
      min_errors = std::min(min_errors, errors[a]);
    }
    r.network_error = network_error_probability(r.per_cell_ber);
    r.mean_capacity = mean_cap;
    r.solver_opt_values = capacities;
    r.insufficient_errors = min_errors < 100;
    results.push_back(std::move(r));
  }
  return results;
}

double network_error_probability(const std::vector<double>& per_cell) {
  double prod = 1.0;
  for (double p : per_cell) {
    if (p < 0.0 || p > 1.0)
      throw invalid_parameter("network_error_probability: p outside [0, 1]");
    prod *= 1.0 - p;
  }
  return 1.0 - prod;
}

ConvergenceSeries convergence_stats(
    const std::vector<CellProblem>& robust_problems,
    const std::vector<CellProblem>& baseline_problems,
    const SolveOptions& base_options, int runs,
    const std::vector<int>& budgets, double perturb_scale,
    std::uint64_t seed) {
  if (runs < 2)
    throw invalid_parameter("convergence_stats: need at least 2 runs");
  if (robust_problems.empty() || baseline_problems.empty())
    throw invalid_parameter("convergence_stats: empty problem ensemble");

  auto mean_objective = [](const std::vector<CellProblem>& problems,
                           const SolveOptions& opts) {
    double acc = 0.0;
    for (const auto& p : problems) acc += solve_cell(p, opts).capacity;
    return acc / static_cast<double>(problems.size());
  };

  ConvergenceSeries out;
  out.budgets = budgets;
  for (int budget : budgets) {
    std::vector<double> vals_robust, vals_base;
    for (int r = 0; r < runs; ++r) {
      Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(r)));
      SolveOptions opts = base_options;
      opts.max_iterations = budget;
      opts.initial_multiplier =
          base_options.initial_multiplier *
          (1.0 + perturb_scale * (rng.uniform() - 0.5));
      vals_robust.push_back(mean_objective(robust_problems, opts));
      vals_base.push_back(mean_objective(baseline_problems, opts));
    }
    auto stddev = [](const std::vector<double>& v) {
      const double mean =
          std::accumulate(v.begin(), v.end(), 0.0) / v.size();
      double acc = 0.0;
      for (double x : v) acc += (x - mean) * (x - mean);
      return std::sqrt(acc / (v.size() - 1));
    };
    out.std_dev_robust.push_back(stddev(vals_robust));
    out.std_dev_baseline.push_back(stddev(vals_base));
  }
  return out;
}

}  // namespace osatcom
