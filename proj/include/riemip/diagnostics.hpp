#pragma once

#include <cstdint>
#include <vector>

#include "riemip/problem.hpp"
#include "riemip/ripm.hpp"
#include "riemip/trace.hpp"

namespace riemip {

struct LicqResult {
  bool pass = false;
  /// Smallest singular value of the row-normalized active-gradient matrix;
  /// +inf when no constraint is active.
  double sigma_min = 0;
  int active_rows = 0;
};

struct ScResult {
  bool pass = false;
  /// min over i of max(y_i, g_i(x)); +inf when m = 0.
  double min_max_pair = 0;
};

enum class SoscStatus { Pass, Fail, VacuousPass, Inconclusive };
const char* to_string(SoscStatus s);

struct SoscResult {
  SoscStatus status = SoscStatus::Inconclusive;
  double min_rayleigh = 0;  // over the cone basis; meaningless unless Pass/Fail
  int cone_dim = 0;
  bool ok() const { return status == SoscStatus::Pass || status == SoscStatus::VacuousPass; }
};

struct RegularityReport {
  LicqResult licq;
  ScResult sc;
  SoscResult sosc;
};

/// Verifies LICQ, strict complementarity and the second-order sufficient
/// condition at an approximate KKT point (residual <= 1e-6 required).
/// LICQ normalizes each active gradient, so the verdict is invariant under
/// positive rescaling of individual constraints. The SOSC check restricts the
/// Lagrangian Hessian to the null space of strongly active and equality
/// gradients; weakly active constraints make the result Inconclusive.
RegularityReport regularity_check(const ConstrainedProblem& prob, const PrimalDualPoint& w_ref,
                                  double tol = 1e-6);

struct ScheduleReport {
  bool pass = false;
  std::vector<double> log_mu;
  std::vector<double> log_sq_ratio;    // log(mu_k^2 / mu_{k+1})
  std::vector<double> log_step_ratio;  // log(mu_{k+1} / mu_k)
};

/// Numerically verifies the decay requirements of the barrier schedule:
/// mu monotone decreasing, mu_k^2 = o(mu_{k+1}) and mu_{k+1} = o(mu_k),
/// checked over `steps` iterations in log space.
ScheduleReport schedule_check(const BarrierSchedule& schedule, int steps);

/// Same checks applied to an arbitrary sequence given as log(mu_k); lets
/// callers probe schedules that the parametric update cannot express.
ScheduleReport schedule_check_sequence(const std::vector<double>& log_mu);

struct RateReport {
  std::vector<double> errors;  // after dropping trailing sub-floor entries
  std::vector<double> ratios;  // e_{k+1} / e_k
  std::vector<double> orders;  // log(e_{k+1}/e_k) / log(e_k/e_{k-1}); NaN if undefined
  double median_order = 0;     // median of the last (up to) three defined orders
  std::vector<double> theta_ratios;  // err_k / mu_k from a trace
  double theta_band = 0;             // max/min over the last (up to) five usable ratios
};

/// Convergence-order estimation from an error sequence. Requires at least
/// three errors above the machine-noise floor 1e-14 (trailing sub-floor
/// entries are dropped first); throws std::invalid_argument otherwise.
RateReport convergence_order(const std::vector<double>& errors);

/// Rate report from a solver trace, additionally filling the error-to-mu
/// ratios and their band.
RateReport rate_from_trace(const std::vector<IterationTrace>& trace);

struct FdValidationReport {
  bool pass = false;
  double max_gradient_error = 0;
  double max_jacobian_error = 0;
};

/// Validates all gradient oracles against directional finite differences and
/// the assembled Jacobian against finite differences of the barrier KKT field
/// at seeded random interior points. Passes when both maxima are <= 1e-5.
FdValidationReport fd_validate(const ConstrainedProblem& prob, int samples, std::uint64_t seed);

/// Seeded rejection sampling of a strictly feasible primal-dual point.
PrimalDualPoint random_interior_point(const ConstrainedProblem& prob, std::mt19937_64& rng);

}  // namespace riemip
