#pragma once

#include "riemip/ripm.hpp"
#include "riemip/trs.hpp"

namespace riemip {

/// Dense realization of the condensed primal-dual Hessian
///   H(x, y) = Hess f - sum_i y_i Hess g_i + A_g Y S^{-1} G_g^T
/// in an orthonormal tangent basis, with the smallest eigenvalue cached.
struct CondensedHessian {
  Matrix matrix;
  TangentBasis basis;
  double lambda_min = 0;
};

/// Requires g(x) > 0 componentwise; throws NonpositiveConstraint otherwise.
CondensedHessian condensed_hessian(const ConstrainedProblem& prob, const Point& x, const Vector& y,
                                   const TangentBasis& basis);
CondensedHessian condensed_hessian(const ConstrainedProblem& prob, const Point& x, const Vector& y);

/// Barrier gradient psi_mu(x) = grad f(x) - mu A_g[S(x)^{-1} 1], the gradient
/// of f - mu sum_i log g_i.
TangentVector barrier_gradient(const ConstrainedProblem& prob, const Point& x, double mu);

/// Multiplier step dy = -y + mu S^{-1} 1 - Y S^{-1} G_g^T d.
Vector y_step(const ConstrainedProblem& prob, const Point& x, const Vector& y, double mu,
              const TangentVector& d);

struct SospResult {
  bool pass = false;
  double lambda_min = 0;
};

/// Second-order stationarity test: lambda_min[H(x, y)] >= -eps_sosp(mu).
SospResult sosp_check(const ConstrainedProblem& prob, const Point& x, const Vector& y, double mu,
                      const ForcingFunctions& forcing);

/// Trust-region policy: radius bounds and the standard ratio thresholds.
struct TrustRegionConfig {
  double delta_max = 10.0;       // largest radius
  double delta_init = 1.0;       // initial radius of the first outer iteration
  double delta_min_init = 0.1;   // floor for the radius handed to each inner call
  double shrink = 0.25;
  double grow = 2.0;
  double accept_ratio = 0.1;
  double shrink_threshold = 0.25;
  double grow_threshold = 0.75;

  void validate() const;
};

struct RiptrmConfig {
  OuterConfig outer;
  TrustRegionConfig tr;

  void validate() const {
    outer.validate();
    tr.validate();
  }
};

/// Trust-region interior point solver for inequality-only problems (p = 0).
/// Each inner iteration solves the trust-region subproblem exactly at the
/// current (x, y, mu, delta), first checks whether the candidate
/// (R_x(d), y + dy) satisfies the stopping and second-order conditions, and
/// otherwise updates the iterate through a ratio test on the log-barrier
/// merit f - mu sum_i log g_i.
SolveReport riptrm_solve(const ConstrainedProblem& prob, const PrimalDualPoint& w0,
                         const RiptrmConfig& config, const ReferenceSolution* reference = nullptr);

struct EquivalenceReport {
  double dx_diff = 0;
  double dy_diff = 0;
  bool pass = false;
  TrsSolution trs;
  NewtonStep newton;
};

/// Checks that a strictly interior exact TRS step together with its
/// multiplier step equals the Newton step of the barrier KKT system. Throws
/// NotInterior when the TRS solution lies on the boundary.
EquivalenceReport newton_equivalence_check(const ConstrainedProblem& prob,
                                           const PrimalDualPoint& w, double mu, double delta,
                                           double tol = 1e-8);

}  // namespace riemip
