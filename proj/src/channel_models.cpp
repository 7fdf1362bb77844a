#include "osatcom/channel_models.hpp"

#include <cmath>

namespace osatcom {

FadingSpec FadingSpec::nakagami(double m, double omega, double mean) {
  FadingSpec s;
  s.family = FadingFamily::Nakagami;
  s.m = m;
  s.omega = omega;
  s.mean_sq = mean * mean;
  s.var = omega;
  s.validate();
  return s;
}

FadingSpec FadingSpec::rayleigh(double omega) {
  FadingSpec s;
  s.family = FadingFamily::Rayleigh;
  s.m = 1.0;
  s.omega = omega;
  s.mean_sq = 0.0;
  s.var = omega;
  s.validate();
  return s;
}

FadingSpec FadingSpec::log_normal(double log_mu, double log_sigma) {
  FadingSpec s;
  s.family = FadingFamily::LogNormal;
  s.log_mu = log_mu;
  s.log_sigma = log_sigma;
  const double ex = std::exp(log_mu + 0.5 * log_sigma * log_sigma);
  const double ex2 = std::exp(2.0 * log_mu + 2.0 * log_sigma * log_sigma);
  s.mean_sq = ex * ex;
  s.var = ex2 - ex * ex;
  s.omega = ex2;
  s.validate();
  return s;
}

FadingSpec FadingSpec::suzuki(double log_mu, double log_sigma,
                              double ray_second_moment) {
  FadingSpec s;
  s.family = FadingFamily::Suzuki;
  s.log_mu = log_mu;
  s.log_sigma = log_sigma;
  s.omega = ray_second_moment;
  s.mean_sq = 0.0;
  // (Var_Log + Mean_Log^2)(Var_Ray + Mean_Ray^2)
  s.var = std::exp(2.0 * log_mu + 2.0 * log_sigma * log_sigma) *
          ray_second_moment;
  s.validate();
  return s;
}

void FadingSpec::validate() const {
  if (!(m > 0.0)) throw invalid_parameter("fading: m must be > 0");
  if (!(omega > 0.0)) throw invalid_parameter("fading: omega must be > 0");
  if (!(var >= 0.0)) throw invalid_parameter("fading: var must be >= 0");
  if (!(mean_sq >= 0.0))
    throw invalid_parameter("fading: mean_sq must be >= 0");
  if (!std::isfinite(log_mu) || !std::isfinite(log_sigma) ||
      log_sigma < 0.0)
    throw invalid_parameter("fading: bad log-normal parameters");
  if (family == FadingFamily::Rayleigh && mean_sq != 0.0)
    throw invalid_parameter("fading: Rayleigh requires mean_sq = 0");
  if (family == FadingFamily::Suzuki && mean_sq != 0.0)
    throw invalid_parameter("fading: Suzuki requires mean_sq = 0");
}

double sample_nakagami_amplitude(const FadingSpec& spec, Rng& rng) {
  if (!(spec.m > 0.0) || !(spec.omega > 0.0))
    throw invalid_parameter("nakagami: need m > 0 and omega > 0");
  return std::sqrt(rng.gamma(spec.m, spec.omega / spec.m));
}

cxd sample_suzuki_coefficient(const FadingSpec& spec, Rng& rng) {
  spec.validate();
  const double shadow = std::exp(rng.normal(spec.log_mu, spec.log_sigma));
  return shadow * rng.circular_gaussian(spec.omega);
}

namespace {

cxd sample_entry(const FadingSpec& spec, Rng& rng) {
  switch (spec.family) {
    case FadingFamily::Rayleigh:
      return rng.circular_gaussian(spec.var);
    case FadingFamily::Nakagami: {
      // zero-mean fluctuation: Nakagami amplitude with spread var, uniform
      // phase; deterministic real mean sqrt(mean_sq) added on top.
      FadingSpec fl = spec;
      fl.omega = spec.var;
      const double r = sample_nakagami_amplitude(fl, rng);
      const double phi = 2.0 * M_PI * rng.uniform();
      return std::sqrt(spec.mean_sq) + r * cxd(std::cos(phi), std::sin(phi));
    }
    case FadingFamily::LogNormal:
      return {std::exp(rng.normal(spec.log_mu, spec.log_sigma)), 0.0};
    case FadingFamily::Suzuki:
      return sample_suzuki_coefficient(spec, rng);
  }
  throw invalid_parameter("fading: unknown family");
}

}  // namespace

cxmat sample_channel_matrix(const FadingSpec& spec, int dim, Rng& rng) {
  if (dim < 1) throw invalid_parameter("sample_channel_matrix: dim < 1");
  spec.validate();
  cxmat h(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) h(i, j) = sample_entry(spec, rng);
  return h;
}

DMatrix build_d_matrix(double alpha, double beta, int dim) {
  if (alpha < 0.0 || beta < 0.0 || dim < 1)
    throw invalid_parameter("build_d_matrix: need alpha, beta >= 0, dim >= 1");
  DMatrix out;
  out.alpha = alpha;
  out.beta = beta;
  out.dim = dim;
  out.d = static_cast<double>(dim) *
          (alpha * cxmat::Ones(dim, dim) + beta * cxmat::Identity(dim, dim));
  return out;
}

DMatrix build_d_suzuki(double alpha, double beta, int dim) {
  if (alpha < 0.0 || beta < 0.0 || dim < 1)
    throw invalid_parameter("build_d_suzuki: need alpha, beta >= 0, dim >= 1");
  DMatrix out;
  out.alpha = alpha;
  out.beta = beta;
  out.dim = dim;
  out.d = static_cast<double>(dim) * (beta + alpha) *
          cxmat::Identity(dim, dim);
  return out;
}

double apply_rain_attenuation(double snr_linear, double a_r_db) {
  if (snr_linear < 0.0)
    throw invalid_parameter("apply_rain_attenuation: snr must be >= 0");
  return db_to_linear(-a_r_db) * snr_linear;
}

}  // namespace osatcom
