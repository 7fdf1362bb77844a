#include "osatcom/pulse.hpp"

#include <cmath>

namespace osatcom {

void PulseConfig::validate() const {
  if (!(bit_period_t > 0.0))
    throw invalid_parameter("pulse: bit period must be > 0");
  if (!(amplitude_a_m > 0.0))
    throw invalid_parameter("pulse: amplitude must be > 0");
  if (!(kappa_min > 0.0 && kappa_min < 1.0))
    throw invalid_parameter("pulse: kappa_min must lie in (0, 1)");
  if (!(osnr_tar > 0.0))
    throw invalid_parameter("pulse: OSNR target must be > 0");
  if (!(noise_var > 0.0))
    throw invalid_parameter("pulse: noise variance must be > 0");
  if (!(fiber_norm_sq > 0.0))
    throw invalid_parameter("pulse: fiber channel norm must be > 0");
  if (!std::isfinite(papr_th_db))
    throw invalid_parameter("pulse: PAPR threshold must be finite");
}

double papr_db(double bit_period_t, double t1) {
  if (!(t1 > 0.0) || t1 > bit_period_t)
    throw invalid_parameter("papr_db: need 0 < t1 <= T");
  return 10.0 * std::log10(bit_period_t / t1);
}

double average_power(double t1, double amplitude_a_m, double bit_period_t) {
  if (!(t1 > 0.0) || t1 > bit_period_t)
    throw invalid_parameter("average_power: need 0 < t1 <= T");
  return t1 * amplitude_a_m * amplitude_a_m / bit_period_t;
}

double osnr(double t1, const PulseConfig& config) {
  config.validate();
  return config.fiber_norm_sq *
         average_power(t1, config.amplitude_a_m, config.bit_period_t) /
         config.noise_var;
}

double overlap_probability(double t1, double kappa, double bit_period_t) {
  if (!(t1 > 0.0) || t1 > bit_period_t)
    throw invalid_parameter("overlap_probability: need 0 < t1 <= T");
  if (!(kappa > 0.0 && kappa < 1.0))
    throw invalid_parameter("overlap_probability: kappa must lie in (0, 1)");
  // FWHM = t1
  const double sigma = t1 / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  const double boundary = bit_period_t / 2.0 - kappa * t1 / 2.0;
  return 0.5 * std::erfc(boundary / (sigma * std::sqrt(2.0)));
}

PulseSolution solve_pulse(const PulseConfig& config) {
  config.validate();
  const double t = config.bit_period_t;
  const double lb_papr = t * std::pow(10.0, -config.papr_th_db / 10.0);
  const double lb_osnr = config.osnr_tar * config.noise_var * t /
                         (config.amplitude_a_m * config.amplitude_a_m *
                          config.fiber_norm_sq);
  const double t1 = std::max(lb_papr, lb_osnr);
  if (t1 > t * (1.0 + 1e-12))
    throw infeasible_problem(
        "solve_pulse: OSNR target unreachable within one bit period");

  PulseSolution sol;
  sol.t1 = std::min(t1, t);
  sol.kappa = config.kappa_min;
  sol.overlap_prob = overlap_probability(sol.t1, sol.kappa, t);
  sol.papr_db = papr_db(t, sol.t1);
  sol.osnr = osnr(sol.t1, config);
  const double gap = std::abs(lb_papr - lb_osnr);
  if (gap <= 1e-12 * t)
    sol.binding = BindingConstraint::Both;
  else
    sol.binding = lb_papr > lb_osnr ? BindingConstraint::PAPR
                                    : BindingConstraint::OSNR;
  return sol;
}

double total_dispersion(const DispersionSpec& spec) {
  if (!(spec.length_km > 0.0))
    throw invalid_parameter("total_dispersion: length must be > 0");
  double sq = 0.0;
  for (double c : spec.coefficients_ps_per_km) {
    if (c < 0.0)
      throw invalid_parameter("total_dispersion: coefficients must be >= 0");
    sq += c * c;
  }
  return spec.length_km * std::sqrt(sq);
}

}  // namespace osatcom
