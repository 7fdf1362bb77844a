#pragma once

#include "osatcom/common.hpp"

namespace osatcom {

/// Frobenius-ball uncertainty set for the interference-channel estimate:
/// the true channel is H2 = H2_hat + Delta with ||Delta||_F <= xi.
struct UncertaintyBall {
  double xi = 0.0;
  int dim = 0;
};

struct InterferenceBound {
  double value = 0.0;       // worst-case interference power, Watt
  cxmat effective_matrix;   // Hermitian PSD; value = Tr{Q * effective_matrix}
};

/// ||Delta kron I_M||_F computed as sqrt(M) * ||Delta||_F.
double kron_lift_norm(const cxmat& delta);

/// Effective interference matrix of the worst-case bound:
///   G = H2_hat^H H2_hat + sqrt(M) xi (sqrt(M) xi + 2 ||H2_hat||_F) I_M.
/// The Gram orientation H^H H makes Tr{Q G} coincide with the realized
/// interference ||(I kron H2) vec(B)||_F^2 at xi = 0 for Q = B B^H.
cxmat effective_interference_matrix(const cxmat& h2_hat,
                                    const UncertaintyBall& ball);

/// Worst case of Tr over the uncertainty ball: Tr{q G}. Upper-bounds the
/// realized interference for every Delta with ||Delta||_F <= xi.
InterferenceBound worst_case_interference(const cxmat& q, const cxmat& h2_hat,
                                          const UncertaintyBall& ball);

/// Exact interference power for a concrete channel:
/// ||(I_M kron H2) vec(B)||_F^2. Evaluated both by explicit Kronecker
/// materialization and as Tr{B B^H H2^H H2}; the two must agree.
double realized_interference(const cxmat& b, const cxmat& h2_true);

/// Reverse-triangle worst-case signal floor (the comparison baseline):
/// Tr{q} * max(0, ||H1_hat||_F - sqrt(M) xi)^2 / M.
double worst_case_signal_lower_bound(const cxmat& q, const cxmat& h1_hat,
                                     const UncertaintyBall& ball);

}  // namespace osatcom
