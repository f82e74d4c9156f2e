#include "riemip/riptrm.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "riemip/errors.hpp"

namespace riemip {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kMultiplierFloor = 1e-12;

Vector positive_inequalities(const ConstrainedProblem& prob, const Point& x, const char* who) {
  Vector g = prob.inequalities(x);
  for (Eigen::Index i = 0; i < g.size(); ++i)
    if (!(g(i) > 0))
      throw NonpositiveConstraint(std::string(who) + ": inequality " + std::to_string(i) +
                                  " is not strictly positive");
  return g;
}

double barrier_merit(const ConstrainedProblem& prob, const Point& x, double mu) {
  Vector g = prob.inequalities(x);
  double phi = prob.objective(x);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (!(g(i) > 0)) return std::numeric_limits<double>::infinity();
    phi -= mu * std::log(g(i));
  }
  return phi;
}

}  // namespace

CondensedHessian condensed_hessian(const ConstrainedProblem& prob, const Point& x, const Vector& y,
                                   const TangentBasis& basis) {
  if (y.size() != prob.num_inequalities())
    throw std::invalid_argument("condensed_hessian: multiplier dimension mismatch");
  Vector g = positive_inequalities(prob, x, "condensed_hessian");
  const int d = basis.dim();
  const int m = prob.num_inequalities();

  Matrix H(d, d);
  PrimalDualPoint w{x, y, Vector::Zero(prob.num_equalities())};
  for (int j = 0; j < d; ++j) {
    TangentVector bj = basis.vector_from(Vector::Unit(d, j));
    H.col(j) = basis.coords_of(lagrangian_hess_vec(prob, w, bj));
  }
  if (m > 0) {
    Matrix G(m, d);  // rows: gradient coefficients of g_i
    for (int i = 0; i < m; ++i) G.row(i) = basis.coords_of(prob.inequality_grad(i, x)).transpose();
    H += G.transpose() * (y.array() / g.array()).matrix().asDiagonal() * G;
  }
  H = 0.5 * (H + H.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> eig(H);
  return CondensedHessian{std::move(H), basis, eig.eigenvalues()(0)};
}

CondensedHessian condensed_hessian(const ConstrainedProblem& prob, const Point& x,
                                   const Vector& y) {
  return condensed_hessian(prob, x, y, prob.manifold().tangent_basis(x));
}

TangentVector barrier_gradient(const ConstrainedProblem& prob, const Point& x, double mu) {
  Vector g = positive_inequalities(prob, x, "barrier_gradient");
  Vector acc = prob.objective_grad(x).coords;
  for (int i = 0; i < prob.num_inequalities(); ++i)
    acc -= (mu / g(i)) * prob.inequality_grad(i, x).coords;
  return TangentVector{std::move(acc), x};
}

Vector y_step(const ConstrainedProblem& prob, const Point& x, const Vector& y, double mu,
              const TangentVector& d) {
  Vector g = positive_inequalities(prob, x, "y_step");
  require_base(x, d);
  Vector dy(prob.num_inequalities());
  for (int i = 0; i < prob.num_inequalities(); ++i) {
    const double gd = prob.inequality_grad(i, x).coords.dot(d.coords);
    dy(i) = -y(i) + mu / g(i) - (y(i) / g(i)) * gd;
  }
  return dy;
}

SospResult sosp_check(const ConstrainedProblem& prob, const Point& x, const Vector& y, double mu,
                      const ForcingFunctions& forcing) {
  CondensedHessian H = condensed_hessian(prob, x, y);
  return SospResult{H.lambda_min >= -forcing.eps_sosp(mu), H.lambda_min};
}

void TrustRegionConfig::validate() const {
  if (!(delta_max > 0)) throw std::invalid_argument("delta_max must be positive");
  if (!(delta_init > 0) || !(delta_init <= delta_max))
    throw std::invalid_argument("delta_init must lie in (0, delta_max]");
  if (!(delta_min_init > 0) || !(delta_min_init <= delta_max))
    throw std::invalid_argument("delta_min_init must lie in (0, delta_max]");
  if (!(shrink > 0) || !(shrink < 1)) throw std::invalid_argument("shrink factor in (0,1)");
  if (!(grow > 1)) throw std::invalid_argument("grow factor must exceed 1");
  if (!(accept_ratio > 0) || !(accept_ratio < shrink_threshold) ||
      !(shrink_threshold < grow_threshold) || !(grow_threshold < 1))
    throw std::invalid_argument("ratio thresholds must satisfy 0 < accept < shrink < grow < 1");
}

namespace {

struct InnerOutcome {
  Point x;
  Vector y;
  double final_delta = 0;
  int iterations = 0;
  double nu = 0;
  double lambda_min = kNan;
  bool converged_final = false;  // candidate met the mu = 0 termination test
  std::vector<double> merit_history;
  std::vector<double> ratio_history;  // rho of every ratio-tested step
};

/// One inner trust-region phase at fixed mu.
InnerOutcome inner_trust_region(const ConstrainedProblem& prob, Point x, Vector y, double mu,
                                double delta0, const RiptrmConfig& cfg) {
  const Manifold& M = prob.manifold();
  double delta = std::min(delta0, cfg.tr.delta_max);
  InnerOutcome out;
  out.merit_history.push_back(barrier_merit(prob, x, mu));

  for (int ell = 0; ell < cfg.outer.max_inner; ++ell) {
    TangentBasis basis = M.tangent_basis(x);
    CondensedHessian H = condensed_hessian(prob, x, y, basis);
    TangentVector psi = barrier_gradient(prob, x, mu);
    Vector psi_c = basis.coords_of(psi);

    TrsSolution trs = solve_trs_exact(H.matrix, psi_c, delta);
    TangentVector d = basis.vector_from(trs.step);
    Vector dy = y_step(prob, x, y, mu, d);

    Point cand_x = M.retract(x, d);
    Vector cand_y = y + dy;
    PrimalDualPoint cand{cand_x, cand_y, Vector(0)};

    if (final_kkt_acceptable(prob, cand, cfg.outer.kkt_stop_tol)) {
      out.x = cand_x;
      out.y = cand_y;
      out.final_delta = delta;
      out.iterations = ell;
      out.nu = trs.nu;
      Vector gc = prob.inequalities(cand_x);
      if (gc.size() == 0 || gc.minCoeff() > 0)
        out.lambda_min = condensed_hessian(prob, cand_x, cand_y).lambda_min;
      out.converged_final = true;
      return out;
    }

    if (strictly_feasible(prob, cand)) {
      StoppingResiduals sr = stopping_check(prob, cand, mu, cfg.outer.forcing);
      if (sr.pass) {
        SospResult sosp = sosp_check(prob, cand_x, cand_y, mu, cfg.outer.forcing);
        if (sosp.pass) {
          out.x = cand_x;
          out.y = cand_y;
          out.final_delta = delta;
          out.iterations = ell;
          out.nu = trs.nu;
          out.lambda_min = sosp.lambda_min;
          return out;
        }
      }
    }

    // Ratio test on the log-barrier merit with fraction-to-boundary damping
    // on the x arc and on y.
    double alpha_x = 1.0;
    {
      Vector g_trial = prob.inequalities(M.retract(x, TangentVector{alpha_x * d.coords, x}));
      if (g_trial.size() && !(g_trial.minCoeff() > 0)) {
        alpha_x = cfg.outer.tau;
        while (alpha_x >= 1e-12) {
          Point t = M.retract(x, TangentVector{alpha_x * d.coords, x});
          Vector g = prob.inequalities(t);
          if (g.minCoeff() > 0) break;
          alpha_x *= 0.5;
        }
        if (alpha_x < 1e-12) throw InnerStalled("trust-region arc left the feasible region");
      }
    }
    double alpha_y = 1.0;
    for (Eigen::Index i = 0; i < y.size(); ++i)
      if (cand_y(i) <= 0 && dy(i) < 0) alpha_y = std::min(alpha_y, cfg.outer.tau * y(i) / (-dy(i)));

    Point trial_x = M.retract(x, TangentVector{alpha_x * d.coords, x});
    const double ared = barrier_merit(prob, x, mu) - barrier_merit(prob, trial_x, mu);
    const double model_at_alpha =
        alpha_x * psi_c.dot(trs.step) + 0.5 * alpha_x * alpha_x * trs.step.dot(H.matrix * trs.step);
    const double pred = -model_at_alpha;
    const double rho = pred > 0 ? ared / pred : -std::numeric_limits<double>::infinity();
    out.ratio_history.push_back(rho);

    if (rho >= cfg.tr.accept_ratio) {
      x = trial_x;
      y = (y + alpha_y * dy).cwiseMax(kMultiplierFloor);
      out.merit_history.push_back(barrier_merit(prob, x, mu));
    }
    if (rho < cfg.tr.shrink_threshold) {
      delta *= cfg.tr.shrink;
    } else if (rho > cfg.tr.grow_threshold && trs.on_boundary) {
      delta = std::min(cfg.tr.grow * delta, cfg.tr.delta_max);
    }
    if (delta < 1e-14) throw InnerStalled("trust region collapsed");
  }
  throw InnerStalled("trust-region inner iteration cap reached");
}

}  // namespace

SolveReport riptrm_solve(const ConstrainedProblem& prob, const PrimalDualPoint& w0,
                         const RiptrmConfig& config, const ReferenceSolution* reference) {
  config.validate();
  if (prob.num_equalities() != 0)
    throw std::invalid_argument("riptrm_solve handles inequality-only problems (p = 0)");
  require_multiplier_dims(prob, w0);
  if (!strictly_feasible(prob, w0))
    throw std::invalid_argument("riptrm_solve requires a strictly feasible initial point");

  SolveReport report;
  report.problem_name = prob.name();
  report.algorithm = "riptrm";
  report.status = SolveStatus::MaxOuter;

  std::vector<PrimalDualPoint> iterates;
  PrimalDualPoint w = w0;
  double mu_prev = config.outer.schedule.mu0;
  double delta_hat = config.tr.delta_init;

  for (int k = 0; k < config.outer.max_outer; ++k) {
    const double mu = barrier_update(mu_prev, config.outer.schedule);
    InnerOutcome inner;
    try {
      inner = inner_trust_region(prob, w.x, w.y, mu, delta_hat, config);
    } catch (const NearSingularJacobian&) {
      report.status = SolveStatus::SingularJacobian;
      break;
    } catch (const InnerStalled&) {
      report.status = SolveStatus::InnerStalled;
      break;
    }
    w = PrimalDualPoint{inner.x, inner.y, Vector(0)};
    delta_hat = std::max(inner.final_delta, config.tr.delta_min_init);

    StoppingResiduals r = stopping_check(prob, w, mu, config.outer.forcing);
    IterationTrace row;
    row.k = k;
    row.mu = mu;
    row.grad_norm = r.grad_norm;
    row.compl_norm = r.compl_norm;
    row.eq_norm = r.eq_norm;
    row.min_g = r.min_g;
    row.min_y = r.min_y;
    row.inner_iters = inner.iterations;
    row.err_to_ref = kNan;
    row.p_hat = kNan;
    row.delta = inner.final_delta;
    row.nu = inner.nu;
    row.lambda_min_h = inner.lambda_min;
    report.trace.push_back(row);
    report.inner_merits.push_back(std::move(inner.merit_history));
    report.inner_ratios.push_back(std::move(inner.ratio_history));
    iterates.push_back(w);

    if (inner.converged_final || final_kkt_acceptable(prob, w, config.outer.kkt_stop_tol)) {
      report.status = SolveStatus::Converged;
      break;
    }
    mu_prev = mu;
  }

  report.final_point = w;
  annotate_trace_errors(prob, report.trace, iterates, reference, report);
  return report;
}

EquivalenceReport newton_equivalence_check(const ConstrainedProblem& prob,
                                           const PrimalDualPoint& w, double mu, double delta,
                                           double tol) {
  if (prob.num_equalities() != 0)
    throw std::invalid_argument("newton_equivalence_check is for inequality-only problems");
  TangentBasis basis = prob.manifold().tangent_basis(w.x);
  CondensedHessian H = condensed_hessian(prob, w.x, w.y, basis);
  Vector psi_c = basis.coords_of(barrier_gradient(prob, w.x, mu));
  TrsSolution trs = solve_trs_exact(H.matrix, psi_c, delta);
  if (trs.step.norm() >= delta - 1e-12)
    throw NotInterior("TRS solution is not strictly inside the trust region");
  TangentVector d = basis.vector_from(trs.step);
  Vector dy = y_step(prob, w.x, w.y, mu, d);

  NewtonStep ns = newton_step(prob, w, mu);
  EquivalenceReport rep;
  rep.trs = trs;
  rep.newton = ns;
  rep.dx_diff = (d.coords - ns.dx.coords).norm();
  rep.dy_diff = (dy - ns.dy).norm();
  rep.pass = rep.dx_diff <= tol && rep.dy_diff <= tol;
  return rep;
}

}  // namespace riemip
