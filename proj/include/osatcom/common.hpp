#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace osatcom {

using cxmat = Eigen::MatrixXcd;
using cxvec = Eigen::VectorXcd;
using cxd = std::complex<double>;

struct invalid_parameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct dimension_mismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct not_psd : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct infeasible_problem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct unbounded_inner : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Seeded random stream. Every stochastic operation takes one of these
/// explicitly; independent streams are derived per (cell, trial) pair so
/// results do not depend on call order or thread scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return uni_(eng_); }

  double normal(double mean = 0.0, double stddev = 1.0) {
    return mean + stddev * gauss_(eng_);
  }

  double gamma(double shape, double scale) {
    std::gamma_distribution<double> g(shape, scale);
    return g(eng_);
  }

  /// Circularly symmetric complex Gaussian with E[|z|^2] = variance.
  cxd circular_gaussian(double variance) {
    const double s = std::sqrt(variance / 2.0);
    return {s * gauss_(eng_), s * gauss_(eng_)};
  }

  std::mt19937_64& engine() { return eng_; }

  /// splitmix64-style mixing for deriving independent substream seeds.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t a,
                              std::uint64_t b = 0, std::uint64_t c = 0) {
    auto mix = [](std::uint64_t z) {
      z += 0x9e3779b97f4a7c15ULL;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      return z ^ (z >> 31);
    };
    return mix(mix(mix(seed ^ mix(a)) ^ mix(b)) ^ mix(c));
  }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
  std::uniform_real_distribution<double> uni_{0.0, 1.0};
};

inline void require_square(const cxmat& m, const std::string& name) {
  if (m.rows() != m.cols())
    throw dimension_mismatch(name + " must be square, got " +
                             std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()));
}

inline void require_same_dim(const cxmat& a, const cxmat& b,
                             const std::string& what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw dimension_mismatch("dimension mismatch in " + what);
}

/// PSD check with a relative eigenvalue tolerance: tiny negative eigenvalues
/// from floating-point eigensolvers still count as PSD.
inline bool is_psd(const cxmat& m, double tol_scale = 1e-10) {
  require_square(m, "psd candidate");
  if (m.rows() == 0) return true;
  const double nrm = m.norm();
  if (nrm == 0.0) return true;
  Eigen::SelfAdjointEigenSolver<cxmat> es(
      cxmat(0.5 * (m + m.adjoint())), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol_scale * nrm;
}

/// Hermitian principal square root (eigenvalue form, negatives clipped to 0).
inline cxmat psd_sqrt(const cxmat& m) {
  Eigen::SelfAdjointEigenSolver<cxmat> es(cxmat(0.5 * (m + m.adjoint())));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() *
         es.eigenvectors().adjoint();
}

inline double real_trace(const cxmat& m) { return m.trace().real(); }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

}  // namespace osatcom
