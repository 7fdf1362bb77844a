#pragma once

#include "osatcom/common.hpp"

namespace osatcom {

enum class FadingFamily { Nakagami, Rayleigh, LogNormal, Suzuki };

/// Fading distribution family plus its per-element complex moments:
/// mean_sq = alpha (square of the per-element mean) and var = beta
/// (per-element variance). The D matrix consumes only (alpha, beta).
struct FadingSpec {
  FadingFamily family = FadingFamily::Rayleigh;
  double m = 1.0;          // Nakagami shape
  double omega = 1.0;      // mean-square power of the fluctuating part
  double log_mu = 0.0;     // Log-normal parameters (natural-log scale)
  double log_sigma = 0.5;
  double mean_sq = 0.0;    // alpha
  double var = 1.0;        // beta

  static FadingSpec nakagami(double m, double omega, double mean = 0.0);
  static FadingSpec rayleigh(double omega);
  static FadingSpec log_normal(double log_mu, double log_sigma);
  /// Composite Rayleigh x Log-normal; ray_second_moment is E[|g|^2] of the
  /// Rayleigh factor. Derived moments: alpha = 0,
  /// beta = exp(2 log_mu + 2 log_sigma^2) * ray_second_moment.
  static FadingSpec suzuki(double log_mu, double log_sigma,
                           double ray_second_moment = 1.0);

  void validate() const;
};

struct ChannelSet {
  cxmat h1;                        // main channel H_{1,a}
  std::vector<cxmat> h2_estimates; // estimated interference channels
  int dim = 0;
};

/// Second-moment matrix of the main channel: diagonal M(beta+alpha),
/// off-diagonal M*alpha; for Suzuki fading M(beta+alpha)*I.
struct DMatrix {
  cxmat d;
  double alpha = 0.0;
  double beta = 0.0;
  int dim = 0;
};

/// Nakagami-m amplitude via the Gamma-power transform: sqrt of
/// Gamma(shape m, scale omega/m). Exact for all m > 0. E[r^2] = omega.
double sample_nakagami_amplitude(const FadingSpec& spec, Rng& rng);

/// Suzuki coefficient h = L * g with L Log-normal and g zero-mean circular
/// complex Gaussian. E[h] = 0, E[|h|^2] = exp(2mu + 2sigma^2) * E[|g|^2].
cxd sample_suzuki_coefficient(const FadingSpec& spec, Rng& rng);

/// M x M matrix of i.i.d. entries with per-element mean sqrt(mean_sq) and
/// variance var. The complex law: deterministic real mean sqrt(alpha) plus a
/// zero-mean fluctuation (family amplitude with uniform phase).
cxmat sample_channel_matrix(const FadingSpec& spec, int dim, Rng& rng);

DMatrix build_d_matrix(double alpha, double beta, int dim);
DMatrix build_d_suzuki(double alpha, double beta, int dim);

/// Multiplies a linear SNR by the rain factor 10^(-a_r_db/10).
double apply_rain_attenuation(double snr_linear, double a_r_db);

}  // namespace osatcom
