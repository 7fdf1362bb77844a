#include "osatcom/beamform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace osatcom {

namespace {

constexpr double kLog2e = 1.4426950408889634074;  // log2(e)

void check_problem(const CellProblem& p) {
  require_square(p.d, "d");
  if (p.dim != 0 && p.dim != p.d.rows())
    throw dimension_mismatch("cell problem dim does not match D");
  if (p.g_list.size() != p.i_th_list.size())
    throw dimension_mismatch("one interference cap required per G matrix");
  for (const auto& g : p.g_list) require_same_dim(g, p.d, "cell problem G");
  if (!(p.p_th > 0.0)) throw infeasible_problem("P_Th must be > 0");
  for (double i_th : p.i_th_list)
    if (!(i_th > 0.0)) throw infeasible_problem("I_Th must be > 0");
}

cxmat hermitianize(const cxmat& m) { return 0.5 * (m + m.adjoint()); }

/// Positive part of a Hermitian matrix (negative eigenvalues clipped).
double positive_part_norm(const cxmat& m) {
  Eigen::SelfAdjointEigenSolver<cxmat> es(hermitianize(m));
  double acc = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double ev = es.eigenvalues()(i);
    if (ev > 0.0) acc += ev * ev;
  }
  return std::sqrt(acc);
}

struct InnerResult {
  cxmat q;
  double dual_value = 0.0;
  Eigen::VectorXd slacks;  // interference slacks then power slack
};

}  // namespace

double capacity(const cxmat& q, const cxmat& d, double a_r_db) {
  require_same_dim(q, d, "capacity");
  if (!is_psd(q)) throw not_psd("capacity: q is not PSD");
  if (!is_psd(d)) throw not_psd("capacity: d is not PSD");
  const double snr = (q * d).trace().real();
  return std::log2(1.0 + db_to_linear(-a_r_db) * snr);
}

double lagrangian(const cxmat& q, const CellProblem& problem,
                  const std::vector<double>& mu1, double mu2) {
  if (mu1.size() != problem.g_list.size())
    throw dimension_mismatch("lagrangian: one mu1 per interference constraint");
  for (double m : mu1)
    if (m < 0.0) throw invalid_parameter("lagrangian: multipliers must be >= 0");
  if (mu2 < 0.0) throw invalid_parameter("lagrangian: multipliers must be >= 0");
  double val = capacity(q, problem.d, problem.a_r_db);
  for (std::size_t b = 0; b < mu1.size(); ++b)
    val -= mu1[b] * ((q * problem.g_list[b]).trace().real() -
                     problem.i_th_list[b]);
  val -= mu2 * (real_trace(q) - problem.p_th);
  return val;
}

double kkt_stationarity_residual(const cxmat& q, const CellProblem& problem,
                                 const std::vector<double>& mu1, double mu2) {
  if (mu1.size() != problem.g_list.size())
    throw dimension_mismatch("kkt residual: one mu1 per constraint");
  const auto m = q.rows();
  require_same_dim(q, problem.d, "kkt residual");
  const double rain = db_to_linear(-problem.a_r_db);
  const double snr = (q * problem.d).trace().real();
  const double c = kLog2e * rain / (1.0 + rain * snr);

  cxmat grad = c * problem.d.adjoint();
  for (std::size_t b = 0; b < mu1.size(); ++b)
    grad -= mu1[b] * problem.g_list[b].adjoint();
  grad -= mu2 * cxmat::Identity(m, m);
  grad = hermitianize(grad);

  Eigen::SelfAdjointEigenSolver<cxmat> es(hermitianize(q));
  const double ev_max = es.eigenvalues().cwiseAbs().maxCoeff();
  const double ev_tol = std::max(1e-12, 1e-9 * ev_max);
  std::vector<int> range_idx, null_idx;
  for (int i = 0; i < m; ++i)
    (es.eigenvalues()(i) > ev_tol ? range_idx : null_idx).push_back(i);

  if (range_idx.empty()) return positive_part_norm(grad);

  cxmat v(m, static_cast<int>(range_idx.size()));
  for (std::size_t i = 0; i < range_idx.size(); ++i)
    v.col(i) = es.eigenvectors().col(range_idx[i]);
  cxmat u(m, static_cast<int>(null_idx.size()));
  for (std::size_t i = 0; i < null_idx.size(); ++i)
    u.col(i) = es.eigenvectors().col(null_idx[i]);

  const double range_block = (v.adjoint() * grad * v).norm();
  double cross_block = 0.0, inward_block = 0.0;
  if (u.cols() > 0) {
    cross_block = (v.adjoint() * grad * u).norm();
    inward_block = positive_part_norm(u.adjoint() * grad * u);
  }
  return std::sqrt(range_block * range_block + 2.0 * cross_block * cross_block +
                   inward_block * inward_block);
}

cxmat solve_inner(const CellProblem& problem, const std::vector<double>& mu1,
                  double mu2) {
  check_problem(problem);
  if (mu1.size() != problem.g_list.size())
    throw dimension_mismatch("solve_inner: one mu1 per constraint");
  for (double m : mu1)
    if (m < 0.0) throw invalid_parameter("solve_inner: multipliers >= 0");
  if (mu2 < 0.0) throw invalid_parameter("solve_inner: multipliers >= 0");

  const auto m = problem.d.rows();
  const double rain = db_to_linear(-problem.a_r_db);
  cxmat w = mu2 * cxmat::Identity(m, m);
  for (std::size_t b = 0; b < mu1.size(); ++b)
    w += mu1[b] * problem.g_list[b];
  w = hermitianize(w);

  const double w_norm = w.norm();
  if (w_norm < 1e-300) {
    if (!std::isfinite(problem.p_th))
      throw unbounded_inner(
          "solve_inner: zero multipliers with no transmit-power cap");
    // penalty-free: spend all power along the top eigendirection of D
    Eigen::SelfAdjointEigenSolver<cxmat> es(hermitianize(problem.d));
    const int top = static_cast<int>(m) - 1;
    if (es.eigenvalues()(top) <= 0.0) return cxmat::Zero(m, m);
    cxvec v = es.eigenvectors().col(top);
    return problem.p_th * (v * v.adjoint());
  }

  // whiten W and take the top generalized eigendirection of (D, W)
  Eigen::SelfAdjointEigenSolver<cxmat> ew(w);
  Eigen::VectorXd wev = ew.eigenvalues().cwiseMax(1e-14 * w_norm);
  cxmat w_inv_sqrt = ew.eigenvectors() *
                     wev.cwiseSqrt().cwiseInverse().asDiagonal() *
                     ew.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<cxmat> es(
      hermitianize(w_inv_sqrt * problem.d * w_inv_sqrt));
  const int top = static_cast<int>(m) - 1;
  cxvec v = w_inv_sqrt * es.eigenvectors().col(top);
  v.normalize();

  const double gain = (v.adjoint() * problem.d * v)(0, 0).real();
  if (gain <= 0.0) return cxmat::Zero(m, m);
  const double penalty = (v.adjoint() * w * v)(0, 0).real();
  // no upper clamp: the transmit-power cap is enforced through mu2, and
  // capping here would flatten the dual in mu2 while the direction still
  // depends on it
  const double p = std::max(kLog2e / penalty - 1.0 / (rain * gain), 0.0);
  return p * (v * v.adjoint());
}

DualState dogleg_dual_update(const DualState& state,
                             const std::vector<double>& slacks) {
  const std::size_t n = state.mu1.size() + 1;
  if (slacks.size() != n)
    throw dimension_mismatch(
        "dogleg_dual_update: expected one slack per multiplier");
  if (!(state.trust_radius > 0.0))
    throw invalid_parameter("dogleg_dual_update: trust radius must be > 0");

  Eigen::VectorXd mu(n), grad(n);
  for (std::size_t i = 0; i < state.mu1.size(); ++i) mu(i) = state.mu1[i];
  mu(n - 1) = state.mu2;
  for (std::size_t i = 0; i < n; ++i) grad(i) = slacks[i];

  // identity curvature model: Newton and Cauchy points coincide, the dogleg
  // path reduces to the steepest-descent step clipped to the trust radius
  Eigen::VectorXd step = -grad;
  const double len = step.norm();
  DualState next = state;
  next.knee = std::min(len, state.trust_radius);
  if (len > state.trust_radius) step *= state.trust_radius / len;

  Eigen::VectorXd mu_new = (mu + step).cwiseMax(0.0);
  Eigen::VectorXd taken = mu_new - mu;

  if (!state.prev_step.empty()) {
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += state.prev_step[i] * taken(i);
    if (dot < 0.0)
      next.trust_radius = std::max(state.trust_radius * 0.25, 1e-13);
    else if (len >= state.trust_radius)
      next.trust_radius = state.trust_radius * 2.0;
  }

  next.mu1.assign(n - 1, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) next.mu1[i] = mu_new(i);
  next.mu2 = mu_new(n - 1);
  next.prev_step.assign(taken.data(), taken.data() + n);
  next.iteration = state.iteration + 1;
  return next;
}

BeamSolution solve_cell(const CellProblem& problem,
                        const SolveOptions& options) {
  check_problem(problem);
  const auto m = problem.d.rows();
  const std::size_t nc_all = problem.g_list.size();

  // constraints with an infinite cap can never bind; drop them up front
  CellProblem pr = problem;
  pr.g_list.clear();
  pr.i_th_list.clear();
  std::vector<std::size_t> keep;
  for (std::size_t b = 0; b < nc_all; ++b) {
    if (std::isfinite(problem.i_th_list[b])) {
      pr.g_list.push_back(problem.g_list[b]);
      pr.i_th_list.push_back(problem.i_th_list[b]);
      keep.push_back(b);
    }
  }
  const std::size_t nc = pr.g_list.size();
  const std::size_t n = nc + 1;

  auto evaluate = [&](const Eigen::VectorXd& mu) {
    std::vector<double> mu1(mu.data(), mu.data() + nc);
    const double mu2 = mu(nc);
    InnerResult r;
    r.q = solve_inner(pr, mu1, mu2);
    r.dual_value = lagrangian(r.q, pr, mu1, mu2);
    r.slacks.resize(n);
    for (std::size_t b = 0; b < nc; ++b)
      r.slacks(b) = pr.i_th_list[b] - (r.q * pr.g_list[b]).trace().real();
    r.slacks(nc) = pr.p_th - real_trace(r.q);
    return r;
  };

  Eigen::VectorXd mu = Eigen::VectorXd::Constant(n, options.initial_multiplier);
  Eigen::MatrixXd hess = Eigen::MatrixXd::Identity(n, n);
  double radius = options.initial_trust_radius;
  InnerResult cur = evaluate(mu);
  const double gtol = std::max(1e-12, options.tol * 1e-3);

  Eigen::VectorXd best_mu = mu;
  double best_dual = cur.dual_value;

  int iter = 0;
  bool converged = false;
  for (; iter < options.max_iterations; ++iter) {
    // dual gradient = slacks; projected at the boundary mu_i = 0
    Eigen::VectorXd pg = cur.slacks;
    for (std::size_t i = 0; i < n; ++i)
      if (mu(i) <= 0.0 && pg(i) > 0.0) pg(i) = 0.0;
    if (pg.lpNorm<Eigen::Infinity>() < gtol) {
      converged = true;
      break;
    }
    if (radius < 1e-13) {
      // stagnation usually means the curvature model went stale; restart it
      hess = Eigen::MatrixXd::Identity(n, n);
      radius = 1e-3;
    }

    const Eigen::VectorXd& grad = cur.slacks;
    Eigen::VectorXd newton = -hess.ldlt().solve(grad);
    const double g_b_g = grad.dot(hess * grad);
    Eigen::VectorXd cauchy =
        (g_b_g > 0.0 ? Eigen::VectorXd(-(grad.squaredNorm() / g_b_g) * grad)
                     : Eigen::VectorXd(-grad));

    // dogleg path: Newton if inside, else blend from Cauchy to the boundary
    Eigen::VectorXd step;
    if (newton.norm() <= radius && newton.dot(grad) < 0.0) {
      step = newton;
    } else if (cauchy.norm() >= radius) {
      step = cauchy * (radius / cauchy.norm());
    } else {
      const Eigen::VectorXd leg = newton - cauchy;
      const double a = leg.squaredNorm();
      const double b = 2.0 * cauchy.dot(leg);
      const double c = cauchy.squaredNorm() - radius * radius;
      const double t =
          a > 0.0 ? (-b + std::sqrt(std::max(0.0, b * b - 4.0 * a * c))) /
                        (2.0 * a)
                  : 0.0;
      step = cauchy + std::clamp(t, 0.0, 1.0) * leg;
    }

    Eigen::VectorXd mu_new = (mu + step).cwiseMax(0.0);
    Eigen::VectorXd taken = mu_new - mu;
    if (taken.norm() < 1e-16) {
      radius *= options.shrink;
      continue;
    }
    InnerResult trial = evaluate(mu_new);
    const double predicted = -(grad.dot(taken) + 0.5 * taken.dot(hess * taken));
    const double actual = cur.dual_value - trial.dual_value;
    const double ratio = predicted > 0.0 ? actual / predicted : -1.0;

    if (ratio < 0.25)
      radius = std::max(radius * options.shrink, 1e-14);
    else if (ratio > 0.75 && taken.norm() >= 0.8 * radius)
      radius *= options.expand;

    if (actual > 0.0 || ratio > 1e-4) {
      // damped BFGS update on the dual curvature model
      Eigen::VectorXd y = trial.slacks - cur.slacks;
      const double sy = taken.dot(y);
      if (sy > 1e-12 * taken.norm() * y.norm()) {
        const Eigen::VectorXd bs = hess * taken;
        hess += (y * y.transpose()) / sy -
                (bs * bs.transpose()) / taken.dot(bs);
      }
      mu = mu_new;
      cur = trial;
      if (cur.dual_value < best_dual) {
        best_dual = cur.dual_value;
        best_mu = mu;
      }
    }
  }

  if (!converged) {
    mu = best_mu;
    cur = evaluate(mu);
  }

  // polish: the capacity is strictly increasing along the beam ray, so the
  // optimum saturates the tightest cap exactly; put q on it, then refit the
  // multiplier scale so the scalar stationarity condition holds exactly
  const double tr = real_trace(cur.q);
  if (tr > 0.0) {
    double scale = std::isfinite(pr.p_th) ? pr.p_th / tr
                                          : std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < nc; ++b) {
      const double intf = (cur.q * pr.g_list[b]).trace().real();
      if (intf > 0.0) scale = std::min(scale, pr.i_th_list[b] / intf);
    }
    if (std::isfinite(scale) && scale > 0.0) cur.q *= scale;

    const double rain = db_to_linear(-pr.a_r_db);
    const double snr = (cur.q * pr.d).trace().real();
    const double c = kLog2e * rain / (1.0 + rain * snr);
    double denom = mu(nc) * real_trace(cur.q);
    for (std::size_t b = 0; b < nc; ++b)
      denom += mu(b) * (cur.q * pr.g_list[b]).trace().real();
    if (denom > 0.0 && snr > 0.0) mu *= c * snr / denom;
  }

  BeamSolution sol;
  sol.q = cur.q;
  sol.mu1.assign(nc_all, 0.0);
  for (std::size_t i = 0; i < nc; ++i)
    sol.mu1[keep[i]] = mu(i) < 1e-9 ? 0.0 : mu(i);
  sol.mu2 = mu(nc) < 1e-9 ? 0.0 : mu(nc);
  sol.capacity = capacity(sol.q, problem.d, problem.a_r_db);
  sol.kkt_residual =
      kkt_stationarity_residual(sol.q, problem, sol.mu1, sol.mu2);
  sol.iterations = iter;
  // the stationarity residual is the certificate; the dual loop may also
  // stop on trust-region stagnation after the multipliers have settled
  sol.converged = sol.kkt_residual < options.tol;
  return sol;
}

std::vector<BeamSolution> solve_network(
    const std::vector<CellProblem>& problems, const SolveOptions& options) {
  std::vector<BeamSolution> out;
  out.reserve(problems.size());
  for (std::size_t a = 0; a < problems.size(); ++a) {
    try {
      out.push_back(solve_cell(problems[a], options));
    } catch (const std::exception& e) {
      throw infeasible_problem("cell " + std::to_string(a) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace osatcom
