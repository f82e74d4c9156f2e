#pragma once

#include "riemip/problem.hpp"

namespace riemip {

/// The barrier KKT vector field F(w; mu) evaluated blockwise:
///   grad block  = grad_x L(w)            (tangent vector at x)
///   compl block = S(x) y - mu 1          (length m)
///   eq block    = h(x)                   (length p)
/// With mu = 0 this is the plain KKT residual field.
struct BarrierKKTValue {
  TangentVector grad_block;
  Vector compl_block;
  Vector eq_block;

  double norm() const;
};

BarrierKKTValue barrier_kkt(const ConstrainedProblem& prob, const PrimalDualPoint& w, double mu);

/// ||F(w; 0)||: the residual of the KKT conditions at w.
double kkt_residual(const ConstrainedProblem& prob, const PrimalDualPoint& w);

/// Dense realization of the Jacobian of F(.; mu) at w in an orthonormal
/// tangent basis. The matrix does not depend on mu. Block layout, with
/// d = dim, m inequalities, p equalities:
///
///   [ Hess_x L   -A_g    A_h ]
///   [ Y G_g^T     S(x)   0   ]
///   [ G_h^T       0      0   ]
///
/// where column i of A_g holds the basis coefficients of grad g_i (likewise
/// A_h), and G_g^T, G_h^T are the corresponding coefficient rows.
struct JacobianMatrix {
  Matrix matrix;
  TangentBasis basis;
};

JacobianMatrix assemble_jacobian(const ConstrainedProblem& prob, const PrimalDualPoint& w,
                                 const TangentBasis& basis);

/// The Newton step dw = -J(w)^{-1} F(w; mu_target) split into blocks.
struct NewtonStep {
  TangentVector dx;
  Vector dy;
  Vector dz;
  double condition_estimate;

  double norm() const;
};

/// Solves the Newton equation by pivoted dense LU with one round of iterative
/// refinement. Throws NearSingularJacobian if the condition estimate exceeds
/// `condition_cap`.
NewtonStep newton_step(const ConstrainedProblem& prob, const PrimalDualPoint& w, double mu_target,
                       double condition_cap = 1e12);

/// One Newton extrapolation: (R_x(dx), y + dy, z + dz). No feasibility
/// clipping; callers check strict feasibility.
PrimalDualPoint extrapolate(const ConstrainedProblem& prob, const PrimalDualPoint& w,
                            double mu_target, double condition_cap = 1e12);

PrimalDualPoint apply_step(const ConstrainedProblem& prob, const PrimalDualPoint& w,
                           const NewtonStep& step);

/// Central finite differences of F(.; mu) along the basis directions (x varied
/// through the retraction with the gradient block transported back, y and z
/// varied directly). Used to validate assemble_jacobian.
Matrix fd_jacobian(const ConstrainedProblem& prob, const PrimalDualPoint& w, double mu,
                   const TangentBasis& basis);

/// Max entry deviation between the assembled Jacobian and its finite
/// difference approximation, scaled by max(1, largest |entry|).
double jacobian_fd_error(const ConstrainedProblem& prob, const PrimalDualPoint& w, double mu);

}  // namespace riemip
