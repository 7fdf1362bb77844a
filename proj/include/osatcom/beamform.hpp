#pragma once

#include <vector>

#include "osatcom/channel_models.hpp"
#include "osatcom/common.hpp"

namespace osatcom {

/// Per-cell capacity maximization: maximize the rain-attenuated ergodic
/// capacity log2(1 + 10^(-A_R/10) Tr{q D}) over PSD weight Gram matrices q,
/// subject to the robust interference caps Tr{q G_b} <= I_Th,b and the
/// transmit-power cap Tr{q} <= P_Th. Solved by Lagrange duality with a
/// dogleg trust-region update on the multipliers.
struct CellProblem {
  cxmat d;                       // second-moment matrix of the main channel
  std::vector<cxmat> g_list;     // effective interference matrices G_b
  double a_r_db = 0.0;           // rain attenuation, dB
  double p_th = 1.0;             // transmit-power cap, Watt
  std::vector<double> i_th_list; // interference caps, Watt (one per G_b)
  int dim = 0;
};

struct SolveOptions {
  double tol = 1e-6;             // KKT / complementary-slackness tolerance
  int max_iterations = 500;      // dual iterations
  double initial_trust_radius = 1.0;
  double initial_multiplier = 1.0;
  double shrink = 0.25;
  double expand = 2.0;
};

struct BeamSolution {
  cxmat q;
  std::vector<double> mu1;
  double mu2 = 0.0;
  double capacity = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct DualState {
  std::vector<double> mu1;
  double mu2 = 1.0;
  double trust_radius = 1.0;
  double knee = 0.0;             // Cauchy-point length of the last dogleg
  int iteration = 0;
  std::vector<double> prev_step; // mu1 step components then mu2 step
};

double capacity(const cxmat& q, const cxmat& d, double a_r_db);

double lagrangian(const cxmat& q, const CellProblem& problem,
                  const std::vector<double>& mu1, double mu2);

/// Norm of the Lagrangian gradient projected onto the tangent cone of the
/// PSD cone at q: the range-of-q block, its cross terms, and the positive
/// part of the orthogonal-complement block.
double kkt_stationarity_residual(const cxmat& q, const CellProblem& problem,
                                 const std::vector<double>& mu1, double mu2);

/// Inner maximization of the Lagrangian over PSD q for fixed multipliers.
/// The objective depends on q only through Tr{q D}, so the maximizer is
/// rank-one along the top generalized eigendirection of (D, W) with
/// W = sum mu1_b G_b + mu2 I; the power comes from scalar stationarity and
/// is not capped here (the transmit-power cap enters through mu2).
cxmat solve_inner(const CellProblem& problem, const std::vector<double>& mu1,
                  double mu2);

/// One projected dogleg step on the dual multipliers from the constraint
/// slacks (identity curvature model; sign convention: negative slack means
/// the constraint is violated and its multiplier must grow).
DualState dogleg_dual_update(const DualState& state,
                             const std::vector<double>& slacks);

BeamSolution solve_cell(const CellProblem& problem,
                        const SolveOptions& options = {});

/// Non-cooperative network: every cell solved independently.
std::vector<BeamSolution> solve_network(
    const std::vector<CellProblem>& problems,
    const SolveOptions& options = {});

}  // namespace osatcom
