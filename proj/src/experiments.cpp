#include "osatcom/experiments.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "osatcom/robust_bound.hpp"

namespace osatcom {

namespace {

using nlohmann::json;

/// Wraps a JSON object and tracks key usage; any key never asked for is a
/// config error (strict schema).
class StrictObject {
 public:
  StrictObject(const json& j, std::string context)
      : j_(j), context_(std::move(context)) {
    if (!j.is_object())
      throw config_parse_error(context_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& get(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key))
      throw config_parse_error(context_ + ": missing required key '" + key +
                               "'");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number())
      throw config_parse_error(context_ + ": '" + key + "' must be a number");
    return v.get<double>();
  }

  double number_or(const std::string& key, double fallback) {
    used_.insert(key);
    if (!j_.contains(key)) return fallback;
    return number(key);
  }

  long integer(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number_integer())
      throw config_parse_error(context_ + ": '" + key +
                               "' must be an integer");
    return v.get<long>();
  }

  long integer_or(const std::string& key, long fallback) {
    used_.insert(key);
    if (!j_.contains(key)) return fallback;
    return integer(key);
  }

  std::string text(const std::string& key) {
    const json& v = get(key);
    if (!v.is_string())
      throw config_parse_error(context_ + ": '" + key + "' must be a string");
    return v.get<std::string>();
  }

  std::vector<double> number_list(const std::string& key) {
    const json& v = get(key);
    std::vector<double> out;
    if (v.is_number()) {
      out.push_back(v.get<double>());
      return out;
    }
    if (!v.is_array())
      throw config_parse_error(context_ + ": '" + key +
                               "' must be a number or an array of numbers");
    for (const auto& e : v) {
      if (!e.is_number())
        throw config_parse_error(context_ + ": '" + key +
                                 "' must contain only numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<int> int_list(const std::string& key) {
    const json& v = get(key);
    if (!v.is_array())
      throw config_parse_error(context_ + ": '" + key + "' must be an array");
    std::vector<int> out;
    for (const auto& e : v) {
      if (!e.is_number_integer())
        throw config_parse_error(context_ + ": '" + key +
                                 "' must contain only integers");
      out.push_back(e.get<int>());
    }
    return out;
  }

  /// Rejects any key that was never consumed.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key()))
        throw config_parse_error(context_ + ": unknown key '" + it.key() +
                                 "'");
  }

 private:
  const json& j_;
  std::string context_;
  std::set<std::string> used_;
};

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void atomic_write(const std::filesystem::path& path,
                  const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("io-error: cannot open " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

std::uint64_t fnv1a_hash(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

struct CsvFile {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string render() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i)
      os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        os << (i ? "," : "") << row[i];
      os << "\n";
    }
    return os.str();
  }
};

ExperimentKind kind_from_string(const std::string& s) {
  if (s == "pulse") return ExperimentKind::Pulse;
  if (s == "dispersion") return ExperimentKind::Dispersion;
  if (s == "beamform") return ExperimentKind::Beamform;
  if (s == "ber_sweep") return ExperimentKind::BerSweep;
  if (s == "convergence") return ExperimentKind::Convergence;
  throw config_parse_error("unknown experiment '" + s + "'");
}

std::string kind_to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Pulse: return "pulse";
    case ExperimentKind::Dispersion: return "dispersion";
    case ExperimentKind::Beamform: return "beamform";
    case ExperimentKind::BerSweep: return "ber_sweep";
    case ExperimentKind::Convergence: return "convergence";
  }
  return "?";
}

PulseConfig pulse_config_from(StrictObject& p, double papr_th_db) {
  PulseConfig c;
  c.bit_period_t = p.number("bit_period_t");
  c.amplitude_a_m = p.number("amplitude_a_m");
  c.papr_th_db = papr_th_db;
  c.osnr_tar = p.number("osnr_tar");
  c.fiber_norm_sq = p.number("fiber_norm_sq");
  c.noise_var = p.number("noise_var");
  c.kappa_min = p.number_or("kappa_min", 0.1);
  return c;
}

struct NetworkParams {
  FadingSpec fading;
  int num_cells = 2;
  int dim_m = 2;
  double xi = 0.0;
  double a_r_db = 0.0;
  double p_th = 1.0;
  double i_th = 0.1;
};

NetworkParams network_params_from(StrictObject& p) {
  NetworkParams n;
  n.fading = fading_from_json(p.get("fading"));
  n.num_cells = static_cast<int>(p.integer_or("num_cells", 2));
  n.dim_m = static_cast<int>(p.integer_or("dim_m", 2));
  n.xi = p.number_or("xi", 0.0);
  n.a_r_db = p.number_or("a_r_db", 0.0);
  n.p_th = p.number_or("p_th", 1.0);
  n.i_th = p.number_or("i_th", 0.1);
  return n;
}

/// Draws per-cell problems: D from the fading moments, one effective
/// interference matrix per neighbor from a sampled channel estimate. The
/// baseline variant replaces D with the reverse-triangle signal floor built
/// from a sampled main-channel estimate.
struct NetworkDraw {
  std::vector<CellProblem> problems;
  std::vector<CellProblem> baseline;
};

NetworkDraw draw_network_problems(const NetworkParams& n, std::uint64_t seed) {
  NetworkDraw out;
  const int m = n.dim_m;
  const UncertaintyBall ball{n.xi, m};
  for (int a = 0; a < n.num_cells; ++a) {
    Rng rng(Rng::derive(seed, 0xBEA3, static_cast<std::uint64_t>(a)));
    DMatrix d = n.fading.family == FadingFamily::Suzuki
                    ? build_d_suzuki(n.fading.mean_sq, n.fading.var, m)
                    : build_d_matrix(n.fading.mean_sq, n.fading.var, m);
    CellProblem cell;
    cell.d = d.d;
    cell.dim = m;
    cell.a_r_db = n.a_r_db;
    cell.p_th = n.p_th;
    for (int b = 0; b < n.num_cells - 1; ++b) {
      cxmat h2 = sample_channel_matrix(n.fading, m, rng);
      cell.g_list.push_back(effective_interference_matrix(h2, ball));
      cell.i_th_list.push_back(n.i_th);
    }
    CellProblem base = cell;
    cxmat h1 = sample_channel_matrix(n.fading, m, rng);
    const double floor =
        std::max(0.0, h1.norm() - std::sqrt(static_cast<double>(m)) * n.xi);
    base.d = (floor * floor / static_cast<double>(m)) *
             cxmat::Identity(m, m);
    out.problems.push_back(std::move(cell));
    out.baseline.push_back(std::move(base));
  }
  return out;
}

}  // namespace

FadingSpec fading_from_json(const json& j) {
  StrictObject f(j, "parameters.fading");
  const std::string family = f.text("family");
  FadingSpec spec;
  if (family == "nakagami") {
    spec = FadingSpec::nakagami(f.number("m"), f.number_or("omega", 1.0),
                                f.number_or("mean", 0.0));
  } else if (family == "rayleigh") {
    spec = FadingSpec::rayleigh(f.number_or("omega", 1.0));
  } else if (family == "log_normal") {
    spec = FadingSpec::log_normal(f.number_or("log_mu", 0.0),
                                  f.number_or("log_sigma", 0.5));
  } else if (family == "suzuki") {
    spec = FadingSpec::suzuki(f.number_or("log_mu", 0.0),
                              f.number_or("log_sigma", 0.5),
                              f.number_or("ray_second_moment", 1.0));
  } else {
    throw config_parse_error("unknown fading family '" + family + "'");
  }
  f.finish();
  return spec;
}

ExperimentConfig parse_experiment_config_json(const json& j) {
  StrictObject top(j, "config");
  ExperimentConfig c;
  c.experiment = kind_from_string(top.text("experiment"));
  c.seed = static_cast<std::uint64_t>(top.integer_or("seed", 1));
  if (top.has("output_path")) c.output_path = top.text("output_path");
  else top.get("output_path");  // required
  c.parameters = top.get("parameters");
  if (!c.parameters.is_object())
    throw config_parse_error("config: 'parameters' must be an object");
  top.finish();
  return c;
}

ExperimentConfig parse_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw config_parse_error("io-error: cannot read " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw config_parse_error("config-parse-error in " + path.string() + ": " +
                             e.what());
  }
  return parse_experiment_config_json(j);
}

int trial_thread_count() {
  if (const char* env = std::getenv("OSATCOM_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hc, 1u, 8u));
}

namespace {

CsvFile run_pulse(const ExperimentConfig& config) {
  StrictObject p(config.parameters, "parameters");
  const std::vector<double> thresholds = p.number_list("papr_th_db");
  CsvFile csv;
  csv.name = "pulse.csv";
  csv.header = {"papr_th_db", "t1", "kappa", "overlap_prob", "binding"};
  for (double th : thresholds) {
    PulseConfig pc = pulse_config_from(p, th);
    PulseSolution sol = solve_pulse(pc);
    const char* binding = sol.binding == BindingConstraint::PAPR ? "PAPR"
                          : sol.binding == BindingConstraint::OSNR ? "OSNR"
                                                                   : "Both";
    csv.rows.push_back({format_number(th), format_number(sol.t1),
                        format_number(sol.kappa),
                        format_number(sol.overlap_prob), binding});
  }
  p.finish();
  return csv;
}

CsvFile run_dispersion(const ExperimentConfig& config) {
  StrictObject p(config.parameters, "parameters");
  const std::vector<double> lengths = p.number_list("lengths_km");
  const std::vector<double> thresholds = p.number_list("papr_th_db");
  const std::vector<double> fixed = p.number_list("fixed_coefficients_ps_per_km");
  const double broadening = p.number("broadening_coefficient_ps_per_km");
  p.finish();
  CsvFile csv;
  csv.name = "dispersion.csv";
  csv.header = {"length_km", "papr_th_db", "total_dispersion_ps"};
  for (double th : thresholds) {
    // narrower clock pulse -> smaller broadening contribution
    const double t1_frac = std::pow(10.0, -th / 10.0);
    DispersionSpec spec;
    spec.coefficients_ps_per_km = fixed;
    spec.coefficients_ps_per_km.push_back(broadening * t1_frac);
    for (double length : lengths) {
      spec.length_km = length;
      csv.rows.push_back({format_number(length), format_number(th),
                          format_number(total_dispersion(spec))});
    }
  }
  return csv;
}

CsvFile run_beamform(const ExperimentConfig& config) {
  StrictObject p(config.parameters, "parameters");
  NetworkParams n = network_params_from(p);
  p.finish();
  NetworkDraw draw = draw_network_problems(n, config.seed);
  std::vector<BeamSolution> sols = solve_network(draw.problems);
  CsvFile csv;
  csv.name = "beamform.csv";
  csv.header = {"cell",    "capacity_bits", "tr_q",       "max_interference",
                "mu1_max", "mu2",           "kkt_residual", "iterations"};
  for (std::size_t a = 0; a < sols.size(); ++a) {
    const auto& s = sols[a];
    double max_intf = 0.0;
    for (const auto& g : draw.problems[a].g_list)
      max_intf = std::max(max_intf, (s.q * g).trace().real());
    double mu1_max = 0.0;
    for (double mu : s.mu1) mu1_max = std::max(mu1_max, mu);
    csv.rows.push_back({std::to_string(a), format_number(s.capacity),
                        format_number(real_trace(s.q)),
                        format_number(max_intf), format_number(mu1_max),
                        format_number(s.mu2), format_number(s.kkt_residual),
                        std::to_string(s.iterations)});
  }
  return csv;
}

CsvFile run_ber_sweep(const ExperimentConfig& config,
                      const RunOverrides& overrides) {
  StrictObject p(config.parameters, "parameters");
  NetworkParams n = network_params_from(p);
  NetworkConfig nc;
  nc.num_cells_a = n.num_cells;
  nc.dim_m = n.dim_m;
  nc.fading = n.fading;
  nc.xi = n.xi;
  nc.a_r_db = n.a_r_db;
  nc.p_th = n.p_th;
  nc.i_th = n.i_th;
  nc.snr_sweep_db = p.number_list("snr_sweep_db");
  nc.trials = overrides.trials.value_or(p.integer_or("trials", 10000));
  nc.seed = config.seed;
  nc.threads = trial_thread_count();
  p.finish();
  nc.validate();

  NetworkDraw draw = draw_network_problems(n, config.seed);
  std::vector<BeamSolution> sols = solve_network(draw.problems);
  std::vector<TrialResult> results = ber_bpsk_montecarlo(nc, sols);

  CsvFile csv;
  csv.name = "ber.csv";
  csv.header = {"snr_db", "num_cells", "xi"};
  for (int a = 0; a < nc.num_cells_a; ++a)
    csv.header.push_back("ber_cell_" + std::to_string(a));
  csv.header.push_back("network_error");
  for (const auto& r : results) {
    std::vector<std::string> row = {format_number(r.snr_db),
                                    std::to_string(nc.num_cells_a),
                                    format_number(nc.xi)};
    for (double b : r.per_cell_ber) row.push_back(format_number(b));
    row.push_back(format_number(r.network_error));
    csv.rows.push_back(std::move(row));
  }
  return csv;
}

CsvFile run_convergence(const ExperimentConfig& config) {
  StrictObject p(config.parameters, "parameters");
  NetworkParams n = network_params_from(p);
  const int ensemble = static_cast<int>(p.integer_or("ensemble_size", 4));
  const int runs = static_cast<int>(p.integer_or("runs", 8));
  const std::vector<int> budgets = p.int_list("budgets");
  const double perturb = p.number_or("perturb_scale", 0.5);
  p.finish();

  std::vector<CellProblem> robust, baseline;
  for (int e = 0; e < ensemble; ++e) {
    NetworkDraw draw = draw_network_problems(
        n, Rng::derive(config.seed, 0xC0 + static_cast<std::uint64_t>(e)));
    robust.push_back(draw.problems.front());
    baseline.push_back(draw.baseline.front());
  }
  ConvergenceSeries series = convergence_stats(
      robust, baseline, SolveOptions{}, runs, budgets, perturb, config.seed);

  CsvFile csv;
  csv.name = "convergence.csv";
  csv.header = {"budget", "formulation", "std_dev"};
  for (std::size_t i = 0; i < series.budgets.size(); ++i) {
    csv.rows.push_back({std::to_string(series.budgets[i]), "robust",
                        format_number(series.std_dev_robust[i])});
    csv.rows.push_back({std::to_string(series.budgets[i]), "reverse_triangle",
                        format_number(series.std_dev_baseline[i])});
  }
  return csv;
}

}  // namespace

std::vector<std::filesystem::path> run_experiment(
    const ExperimentConfig& config_in, const RunOverrides& overrides) {
  ExperimentConfig config = config_in;
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.out_dir) config.output_path = *overrides.out_dir;

  const auto start = std::chrono::steady_clock::now();
  CsvFile csv;
  switch (config.experiment) {
    case ExperimentKind::Pulse: csv = run_pulse(config); break;
    case ExperimentKind::Dispersion: csv = run_dispersion(config); break;
    case ExperimentKind::Beamform: csv = run_beamform(config); break;
    case ExperimentKind::BerSweep: csv = run_ber_sweep(config, overrides); break;
    case ExperimentKind::Convergence: csv = run_convergence(config); break;
  }
  const double duration_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  std::filesystem::create_directories(config.output_path);
  std::vector<std::filesystem::path> written;
  const std::filesystem::path csv_path = config.output_path / csv.name;
  atomic_write(csv_path, csv.render());
  written.push_back(csv_path);

  nlohmann::json effective = {
      {"experiment", kind_to_string(config.experiment)},
      {"seed", config.seed},
      {"parameters", config.parameters}};
  if (overrides.trials) effective["trials_override"] = *overrides.trials;
  nlohmann::json manifest = {
      {"config_hash", fnv1a_hash(effective.dump())},
      {"seed", config.seed},
      {"toolkit_version", kToolkitVersion},
      {"duration_s", duration_s},
      {"summary",
       {{"experiment", kind_to_string(config.experiment)},
        {"csv", csv.name},
        {"rows", csv.rows.size()}}}};
  const std::filesystem::path manifest_path =
      config.output_path / "manifest.json";
  atomic_write(manifest_path, manifest.dump(2) + "\n");
  written.push_back(manifest_path);
  return written;
}

std::vector<std::string> validate_config_file(
    const std::filesystem::path& path) {
  std::vector<std::string> report;
  ExperimentConfig config;
  try {
    config = parse_experiment_config(path);
  } catch (const std::exception& e) {
    report.emplace_back(e.what());
    return report;
  }
  try {
    switch (config.experiment) {
      case ExperimentKind::Pulse: {
        StrictObject p(config.parameters, "parameters");
        for (double th : p.number_list("papr_th_db")) {
          PulseConfig pc = pulse_config_from(p, th);
          pc.validate();
          const double t = pc.bit_period_t;
          const double lb =
              std::max(t * std::pow(10.0, -th / 10.0),
                       pc.osnr_tar * pc.noise_var * t /
                           (pc.amplitude_a_m * pc.amplitude_a_m *
                            pc.fiber_norm_sq));
          if (lb > t * (1.0 + 1e-12))
            report.push_back(
                "pulse: infeasible at papr_th_db=" + format_number(th) +
                " (required t1 exceeds the bit period)");
        }
        p.finish();
        break;
      }
      case ExperimentKind::Dispersion: {
        StrictObject p(config.parameters, "parameters");
        for (double length : p.number_list("lengths_km"))
          if (!(length > 0.0))
            report.push_back("dispersion: length_km must be > 0");
        for (double c : p.number_list("fixed_coefficients_ps_per_km"))
          if (c < 0.0)
            report.push_back("dispersion: coefficients must be >= 0");
        if (p.number("broadening_coefficient_ps_per_km") < 0.0)
          report.push_back("dispersion: broadening coefficient must be >= 0");
        p.number_list("papr_th_db");
        p.finish();
        break;
      }
      case ExperimentKind::Beamform: {
        StrictObject p(config.parameters, "parameters");
        network_params_from(p);
        p.finish();
        break;
      }
      case ExperimentKind::BerSweep: {
        StrictObject p(config.parameters, "parameters");
        NetworkParams n = network_params_from(p);
        NetworkConfig nc;
        nc.num_cells_a = n.num_cells;
        nc.dim_m = n.dim_m;
        nc.fading = n.fading;
        nc.xi = n.xi;
        nc.a_r_db = n.a_r_db;
        nc.p_th = n.p_th;
        nc.i_th = n.i_th;
        nc.snr_sweep_db = p.number_list("snr_sweep_db");
        nc.trials = p.integer_or("trials", 10000);
        p.finish();
        nc.validate();
        break;
      }
      case ExperimentKind::Convergence: {
        StrictObject p(config.parameters, "parameters");
        network_params_from(p);
        if (p.integer_or("runs", 8) < 2)
          report.push_back("convergence: runs must be >= 2");
        if (p.integer_or("ensemble_size", 4) < 1)
          report.push_back("convergence: ensemble_size must be >= 1");
        for (int b : p.int_list("budgets"))
          if (b < 1) report.push_back("convergence: budgets must be >= 1");
        p.number_or("perturb_scale", 0.5);
        p.finish();
        break;
      }
    }
  } catch (const std::exception& e) {
    report.emplace_back(e.what());
  }
  return report;
}

}  // namespace osatcom
