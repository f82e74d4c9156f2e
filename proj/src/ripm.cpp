#include "riemip/ripm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "riemip/errors.hpp"

namespace riemip {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kErrorFloor = 1e-14;      // machine-noise floor for error sequences
constexpr double kBoundarySlack = 1e-12;   // rounding slack on g, y at termination

double merit(const ConstrainedProblem& prob, const PrimalDualPoint& w, double mu) {
  return 0.5 * std::pow(barrier_kkt(prob, w, mu).norm(), 2);
}

}  // namespace

void ForcingFunctions::validate() const {
  if (!(c_grad > 0) || !(c_compl > 0) || !(c_eq > 0) || !(c_sosp > 0))
    throw std::invalid_argument("forcing constants must be positive");
}

void BarrierSchedule::validate() const {
  if (!(mu0 > 0) || !(mu0 <= 1)) throw std::invalid_argument("mu0 must lie in (0, 1]");
  if (!(kappa > 0) || !(kappa < 1)) throw std::invalid_argument("kappa must lie in (0, 1)");
  if (!(theta > 0) || !(theta < 1)) throw std::invalid_argument("theta must lie in (0, 1)");
}

double barrier_update(double mu, const BarrierSchedule& schedule) {
  schedule.validate();
  if (!(mu > 0) || !(mu <= 1))
    throw std::invalid_argument("barrier_update requires 0 < mu <= 1");
  return schedule.kappa * std::pow(mu, 1.0 + schedule.theta);
}

void OuterConfig::validate() const {
  schedule.validate();
  forcing.validate();
  if (max_outer < 1) throw std::invalid_argument("max_outer must be at least 1");
  if (max_inner < 1) throw std::invalid_argument("max_inner must be at least 1");
  if (!(kkt_stop_tol > 0)) throw std::invalid_argument("kkt_stop_tol must be positive");
  if (!(condition_cap >= 1)) throw std::invalid_argument("condition_cap must be at least 1");
  if (!(tau > 0.9) || !(tau < 1)) throw std::invalid_argument("tau must lie in (0.9, 1)");
}

StoppingResiduals stopping_check(const ConstrainedProblem& prob, const PrimalDualPoint& w,
                                 double mu, const ForcingFunctions& forcing) {
  BarrierKKTValue F = barrier_kkt(prob, w, mu);
  StoppingResiduals r;
  r.grad_norm = F.grad_block.coords.norm();
  r.compl_norm = F.compl_block.norm();
  r.eq_norm = F.eq_block.norm();
  Vector g = prob.inequalities(w.x);
  r.min_g = g.size() ? g.minCoeff() : std::numeric_limits<double>::infinity();
  r.min_y = w.y.size() ? w.y.minCoeff() : std::numeric_limits<double>::infinity();
  r.pass = r.grad_norm <= forcing.eps_grad(mu) && r.compl_norm <= forcing.eps_compl(mu) &&
           r.eq_norm <= forcing.eps_eq(mu) && r.min_g > 0 && r.min_y > 0;
  return r;
}

bool final_kkt_acceptable(const ConstrainedProblem& prob, const PrimalDualPoint& w, double tol) {
  Vector g = prob.inequalities(w.x);
  if (g.size() && g.minCoeff() < -kBoundarySlack) return false;
  if (w.y.size() && w.y.minCoeff() < -kBoundarySlack) return false;
  return kkt_residual(prob, w) <= tol;
}

namespace {

/// Largest alpha <= alpha0 with y + alpha dy > 0, after the tau damping.
double fraction_to_boundary_y(const Vector& y, const Vector& dy, double tau) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (dy(i) < 0) alpha = std::min(alpha, tau * y(i) / (-dy(i)));
  }
  return alpha;
}

/// Bisects alpha down until every inequality stays positive along the
/// retracted arc. Returns 0 if no such alpha >= floor exists.
double positive_arc_fraction(const ConstrainedProblem& prob, const Point& x,
                             const TangentVector& dx, double alpha0, double floor_alpha) {
  double alpha = alpha0;
  while (alpha >= floor_alpha) {
    Point trial = prob.manifold().retract(x, TangentVector{alpha * dx.coords, x});
    Vector g = prob.inequalities(trial);
    if (g.size() == 0 || g.minCoeff() > 0) return alpha;
    alpha *= 0.5;
  }
  return 0.0;
}

}  // namespace

InnerResult inner_fallback(const ConstrainedProblem& prob, const PrimalDualPoint& w_init,
                           double mu, const ForcingFunctions& forcing,
                           const OuterConfig& config) {
  if (!strictly_feasible(prob, w_init))
    throw std::invalid_argument("inner_fallback requires a strictly feasible start");

  InnerResult res{w_init, 0, {merit(prob, w_init, mu)}};
  PrimalDualPoint w = w_init;
  for (int it = 0; it < config.max_inner; ++it) {
    if (stopping_check(prob, w, mu, forcing).pass) {
      res.point = w;
      res.iterations = it;
      return res;
    }
    NewtonStep step = newton_step(prob, w, mu, config.condition_cap);

    double alpha = std::min(1.0, fraction_to_boundary_y(w.y, step.dy, config.tau));
    alpha = positive_arc_fraction(prob, w.x, step.dx, alpha, 1e-12);
    if (alpha <= 0) throw InnerStalled("no strictly feasible step length in inner iteration");

    // Armijo on the squared field norm; the Newton direction has directional
    // derivative -2 phi, so the decrease target scales with phi itself.
    const double phi0 = merit(prob, w, mu);
    const double c1 = 1e-4;
    bool accepted = false;
    while (alpha >= 1e-12) {
      PrimalDualPoint trial{
          prob.manifold().retract(w.x, TangentVector{alpha * step.dx.coords, w.x}),
          w.y + alpha * step.dy, w.z + alpha * step.dz};
      Vector g = prob.inequalities(trial.x);
      const bool interior = (g.size() == 0 || g.minCoeff() > 0) &&
                            (trial.y.size() == 0 || trial.y.minCoeff() > 0);
      if (interior && merit(prob, trial, mu) <= phi0 * (1.0 - 2.0 * c1 * alpha)) {
        w = trial;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) throw InnerStalled("inner iteration found no acceptable step");
    res.merit_history.push_back(merit(prob, w, mu));
  }
  if (stopping_check(prob, w, mu, forcing).pass) {
    res.point = w;
    res.iterations = config.max_inner;
    return res;
  }
  throw InnerStalled("inner iteration cap reached");
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged:
      return "Converged";
    case SolveStatus::MaxOuter:
      return "MaxOuter";
    case SolveStatus::SingularJacobian:
      return "SingularJacobian";
    case SolveStatus::InnerStalled:
      return "InnerStalled";
  }
  return "?";
}

void annotate_trace_errors(const ConstrainedProblem& prob, std::vector<IterationTrace>& trace,
                           const std::vector<PrimalDualPoint>& iterates,
                           const ReferenceSolution* reference, SolveReport& report) {
  report.self_referenced_errors = (reference == nullptr);
  if (iterates.empty()) return;
  PrimalDualPoint target = reference
                               ? PrimalDualPoint{reference->x, reference->y, reference->z}
                               : iterates.back();
  std::vector<double> errs(iterates.size());
  for (std::size_t i = 0; i < iterates.size(); ++i)
    errs[i] = primal_dual_distance(prob, iterates[i], target);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    trace[i].err_to_ref = errs[i];
    trace[i].p_hat = kNan;
    if (i >= 2) {
      const double e0 = errs[i - 2], e1 = errs[i - 1], e2 = errs[i];
      if (e0 > kErrorFloor && e1 > kErrorFloor && e2 > kErrorFloor && e1 != e0) {
        const double den = std::log(e1 / e0);
        if (den != 0) trace[i].p_hat = std::log(e2 / e1) / den;
      }
    }
  }
}

SolveReport outer_solve(const ConstrainedProblem& prob, const PrimalDualPoint& w0,
                        const OuterConfig& config, const ReferenceSolution* reference) {
  config.validate();
  require_multiplier_dims(prob, w0);
  if (!strictly_feasible(prob, w0))
    throw std::invalid_argument("outer_solve requires a strictly feasible initial point");

  SolveReport report;
  report.problem_name = prob.name();
  report.algorithm = "ripm";
  report.status = SolveStatus::MaxOuter;

  std::vector<PrimalDualPoint> iterates;
  PrimalDualPoint w = w0;
  double mu_prev = config.schedule.mu0;

  for (int k = 0; k < config.max_outer; ++k) {
    const double mu = barrier_update(mu_prev, config.schedule);
    int inner_iters = 0;
    bool converged_now = false;
    std::uint8_t from_extrapolated = 1;
    double step_norm = kNan;
    std::vector<double> merits;

    try {
      NewtonStep step = newton_step(prob, w, mu, config.condition_cap);
      step_norm = step.norm();
      PrimalDualPoint cand = apply_step(prob, w, step);

      if (stopping_check(prob, cand, mu, config.forcing).pass) {
        w = cand;
      } else if (final_kkt_acceptable(prob, cand, config.kkt_stop_tol)) {
        // The extrapolation already solves the mu = 0 system to tolerance;
        // interiority may be lost to rounding at an active boundary, so this
        // is a termination, not an iterate.
        w = cand;
        converged_now = true;
      } else {
        PrimalDualPoint start = w;
        if (strictly_feasible(prob, cand)) {
          start = cand;
        } else {
          from_extrapolated = 0;
        }
        InnerResult inner = inner_fallback(prob, start, mu, config.forcing, config);
        w = inner.point;
        inner_iters = inner.iterations;
        merits = inner.merit_history;
      }
    } catch (const NearSingularJacobian&) {
      report.status = SolveStatus::SingularJacobian;
      break;
    } catch (const InnerStalled&) {
      report.status = SolveStatus::InnerStalled;
      break;
    }

    StoppingResiduals r = stopping_check(prob, w, mu, config.forcing);
    IterationTrace row;
    row.k = k;
    row.mu = mu;
    row.grad_norm = r.grad_norm;
    row.compl_norm = r.compl_norm;
    row.eq_norm = r.eq_norm;
    row.min_g = r.min_g;
    row.min_y = r.min_y;
    row.inner_iters = inner_iters;
    row.err_to_ref = kNan;
    row.p_hat = kNan;
    row.delta = kNan;
    row.nu = kNan;
    row.lambda_min_h = kNan;
    report.trace.push_back(row);
    report.extrapolation_step_norms.push_back(step_norm);
    report.fallback_from_extrapolated.push_back(from_extrapolated);
    report.inner_merits.push_back(std::move(merits));
    iterates.push_back(w);

    if (converged_now || final_kkt_acceptable(prob, w, config.kkt_stop_tol)) {
      report.status = SolveStatus::Converged;
      break;
    }
    mu_prev = mu;
  }

  report.final_point = w;
  annotate_trace_errors(prob, report.trace, iterates, reference, report);
  return report;
}

}  // namespace riemip
