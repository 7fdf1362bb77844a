#include "osatcom/robust_bound.hpp"

#include <cmath>

namespace osatcom {

double kron_lift_norm(const cxmat& delta) {
  require_square(delta, "delta");
  return std::sqrt(static_cast<double>(delta.rows())) * delta.norm();
}

cxmat effective_interference_matrix(const cxmat& h2_hat,
                                    const UncertaintyBall& ball) {
  require_square(h2_hat, "h2_hat");
  if (ball.dim != 0 && ball.dim != h2_hat.rows())
    throw dimension_mismatch("uncertainty ball dim does not match channel");
  if (ball.xi < 0.0)
    throw invalid_parameter("uncertainty radius xi must be >= 0");
  const auto m = h2_hat.rows();
  const double sqm_xi = std::sqrt(static_cast<double>(m)) * ball.xi;
  const double robust_term = sqm_xi * (sqm_xi + 2.0 * h2_hat.norm());
  return h2_hat.adjoint() * h2_hat +
         robust_term * cxmat::Identity(m, m);
}

InterferenceBound worst_case_interference(const cxmat& q, const cxmat& h2_hat,
                                          const UncertaintyBall& ball) {
  require_same_dim(q, h2_hat, "worst_case_interference");
  if (!is_psd(q)) throw not_psd("worst_case_interference: q is not PSD");
  InterferenceBound out;
  out.effective_matrix = effective_interference_matrix(h2_hat, ball);
  out.value = (q * out.effective_matrix).trace().real();
  return out;
}

double realized_interference(const cxmat& b, const cxmat& h2_true) {
  require_same_dim(b, h2_true, "realized_interference");
  require_square(b, "b");
  const auto m = b.rows();

  // explicit Kronecker-vectorized form
  cxmat lift = cxmat::Zero(m * m, m * m);
  for (int k = 0; k < m; ++k)
    lift.block(k * m, k * m, m, m) = h2_true;
  cxvec vec_b = Eigen::Map<const cxvec>(b.data(), m * m);
  const double kron_form = (lift * vec_b).squaredNorm();

  // trace form with Q = B B^H
  const double trace_form =
      ((b * b.adjoint()) * (h2_true.adjoint() * h2_true)).trace().real();

  const double scale = std::max(1.0, std::max(kron_form, trace_form));
  if (std::abs(kron_form - trace_form) > 1e-9 * scale)
    throw std::logic_error(
        "realized_interference: Kronecker and trace forms disagree");
  return kron_form;
}

double worst_case_signal_lower_bound(const cxmat& q, const cxmat& h1_hat,
                                     const UncertaintyBall& ball) {
  require_same_dim(q, h1_hat, "worst_case_signal_lower_bound");
  if (ball.xi < 0.0)
    throw invalid_parameter("uncertainty radius xi must be >= 0");
  const auto m = h1_hat.rows();
  const double floor =
      std::max(0.0, h1_hat.norm() -
                        std::sqrt(static_cast<double>(m)) * ball.xi);
  return real_trace(q) * floor * floor / static_cast<double>(m);
}

}  // namespace osatcom
