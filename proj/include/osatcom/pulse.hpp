#pragma once

#include <vector>

#include "osatcom/common.hpp"

namespace osatcom {

/// RZ clock pulse-width optimization: minimize the Gaussian-pulse overlap
/// probability over (t1, kappa) subject to a PAPR ceiling and an OSNR floor.
struct PulseConfig {
  double bit_period_t = 1.0;   // seconds
  double amplitude_a_m = 1.0;  // volts
  double papr_th_db = 3.0;     // dB ceiling for 10 log10(T/t1)
  double osnr_tar = 1.0;       // linear target OSNR
  double fiber_norm_sq = 1.0;  // ||H_fiber||_F^2
  double noise_var = 1.0;      // sigma^2 of the fiber noise, Watt
  double kappa_min = 0.1;      // lower feasible kappa, in (0,1)

  void validate() const;
};

enum class BindingConstraint { PAPR, OSNR, Both };

struct PulseSolution {
  double t1 = 0.0;
  double kappa = 0.0;
  double overlap_prob = 0.0;
  double papr_db = 0.0;
  double osnr = 0.0;
  BindingConstraint binding = BindingConstraint::PAPR;
};

/// Per-km dispersion contributions combined as a root mean square and
/// scaled by the cable length.
struct DispersionSpec {
  std::vector<double> coefficients_ps_per_km;
  double length_km = 1.0;
};

double papr_db(double bit_period_t, double t1);

/// Average power of the rectangular-envelope clock: t1 * A_m^2 / T.
double average_power(double t1, double amplitude_a_m, double bit_period_t);

double osnr(double t1, const PulseConfig& config);

/// Upper-tail mass of a Gaussian pulse (FWHM = t1, slot-centered) beyond the
/// boundary point T/2 - kappa*t1/2 toward the neighboring slot. Strictly
/// increasing in t1 and in kappa.
double overlap_probability(double t1, double kappa, double bit_period_t);

/// Both constraints bound t1 from below and the overlap objective is
/// increasing in t1 and kappa, so the optimum is the larger lower bound on
/// t1 together with kappa = kappa_min.
PulseSolution solve_pulse(const PulseConfig& config);

double total_dispersion(const DispersionSpec& spec);

}  // namespace osatcom
