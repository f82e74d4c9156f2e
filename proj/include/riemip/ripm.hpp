#pragma once

#include <cstdint>
#include <vector>

#include "riemip/kkt.hpp"
#include "riemip/problem.hpp"
#include "riemip/trace.hpp"

namespace riemip {

/// Linear stopping tolerances eps(mu) = c * mu per residual block. Linear
/// forcing keeps the tolerances within the two-sided bounds
/// min(c, 1/2) * mu <= eps(mu) <= max(c, 2) * mu required of them.
struct ForcingFunctions {
  double c_grad = 1.0;
  double c_compl = 1.0;
  double c_eq = 1.0;
  double c_sosp = 1.0;

  double eps_grad(double mu) const { return c_grad * mu; }
  double eps_compl(double mu) const { return c_compl * mu; }
  double eps_eq(double mu) const { return c_eq * mu; }
  double eps_sosp(double mu) const { return c_sosp * mu; }

  static double lower_witness(double c) { return std::min(c, 0.5); }
  static double upper_witness(double c) { return std::max(c, 2.0); }

  void validate() const;
};

/// Barrier parameter schedule mu_{k+1} = kappa * mu_k^{1+theta} with
/// mu0 in (0, 1], kappa in (0, 1), theta in (0, 1).
struct BarrierSchedule {
  double mu0 = 0.1;
  double kappa = 0.5;
  double theta = 0.9;

  void validate() const;
};

/// One schedule update. Requires 0 < mu <= 1.
double barrier_update(double mu, const BarrierSchedule& schedule);

struct OuterConfig {
  BarrierSchedule schedule;
  ForcingFunctions forcing;
  int max_outer = 50;
  int max_inner = 50;
  double kkt_stop_tol = 1e-10;  // terminate on ||F(w;0)|| below this
  double condition_cap = 1e12;
  double tau = 0.995;  // fraction-to-boundary

  void validate() const;
};

/// Per-block residuals of the inner stopping conditions at (w, mu).
struct StoppingResiduals {
  double grad_norm = 0;
  double compl_norm = 0;
  double eq_norm = 0;
  double min_g = 0;
  double min_y = 0;
  bool pass = false;
};

/// pass iff ||grad_x L|| <= eps_grad(mu), ||S y - mu 1|| <= eps_compl(mu),
/// ||h|| <= eps_eq(mu), and g(x) > 0, y > 0 strictly.
StoppingResiduals stopping_check(const ConstrainedProblem& prob, const PrimalDualPoint& w,
                                 double mu, const ForcingFunctions& forcing);

struct InnerResult {
  PrimalDualPoint point;
  int iterations = 0;
  std::vector<double> merit_history;  // 1/2 ||F(w;mu)||^2 per accepted iterate
};

/// Damped Newton iteration on F(.; mu) used when the extrapolated point does
/// not already satisfy the stopping conditions. Steps are cut back by the
/// fraction-to-boundary rule on y and by bisection on g along the retracted
/// arc, and accepted under Armijo decrease of the squared field norm. Throws
/// InnerStalled when no progress is possible.
InnerResult inner_fallback(const ConstrainedProblem& prob, const PrimalDualPoint& w_init,
                           double mu, const ForcingFunctions& forcing, const OuterConfig& config);

enum class SolveStatus { Converged, MaxOuter, SingularJacobian, InnerStalled };
const char* to_string(SolveStatus s);

struct SolveReport {
  PrimalDualPoint final_point;
  SolveStatus status = SolveStatus::MaxOuter;
  std::vector<IterationTrace> trace;
  /// Errors measured against the final iterate because no reference solution
  /// was available.
  bool self_referenced_errors = false;
  /// ||dw|| of the extrapolation Newton step per outer iteration.
  std::vector<double> extrapolation_step_norms;
  /// Whether the fallback (if any) started from the extrapolated point or had
  /// to restart from the previous iterate; one entry per outer iteration,
  /// meaningful when inner_iters > 0.
  std::vector<std::uint8_t> fallback_from_extrapolated;
  /// Merit values along accepted inner steps, one sequence per outer
  /// iteration (empty when the extrapolated point was accepted directly).
  std::vector<std::vector<double>> inner_merits;
  /// Trust-region acceptance ratios of every ratio-tested inner step, one
  /// sequence per outer iteration; filled by the trust-region solver only.
  std::vector<std::vector<double>> inner_ratios;
  std::string problem_name;
  std::string algorithm;
};

/// Outer iteration: set mu_k from the schedule, extrapolate, accept the
/// extrapolated point when it passes the stopping conditions (zero inner
/// iterations), otherwise run the fallback. Terminates once the KKT residual
/// at mu = 0 drops below config.kkt_stop_tol.
SolveReport outer_solve(const ConstrainedProblem& prob, const PrimalDualPoint& w0,
                        const OuterConfig& config, const ReferenceSolution* reference = nullptr);

/// Fills err_to_ref and p_hat columns of a trace from stored iterates; shared
/// between the two solvers.
void annotate_trace_errors(const ConstrainedProblem& prob, std::vector<IterationTrace>& trace,
                           const std::vector<PrimalDualPoint>& iterates,
                           const ReferenceSolution* reference, SolveReport& report);

/// True when w satisfies the mu = 0 termination test: KKT residual below tol
/// with nonnegative (up to roundoff slack) g and y. Used both for regular
/// termination and for accepting a final boundary point whose interiority was
/// lost to rounding.
bool final_kkt_acceptable(const ConstrainedProblem& prob, const PrimalDualPoint& w, double tol);

}  // namespace riemip
