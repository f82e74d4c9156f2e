#pragma once

#include "riemip/manifold.hpp"

namespace riemip {

/// Global solution of  min_d  1/2 d^T H d + psi^T d  s.t. ||d|| <= delta,
/// together with the multiplier nu and the residuals of the four optimality
/// conditions
///   (H + nu I) d = -psi,   nu (delta - ||d||) = 0,   ||d|| <= delta,
///   H + nu I  positive semidefinite.
struct TrsSolution {
  Vector step;
  double nu = 0;
  bool on_boundary = false;
  double stationarity_residual = 0;   // ||(H + nu I) d + psi||
  double complementarity_residual = 0;  // |nu (delta - ||d||)|
  double constraint_violation = 0;    // max(0, ||d|| - delta)
  double psd_margin = 0;              // lambda_min(H) + nu
  double model_value = 0;             // 1/2 d^T H d + psi^T d
};

/// Exact trust-region subproblem solver via the eigendecomposition of H:
/// interior Newton point when H is positive definite and the step fits,
/// otherwise the secular-equation root; the hard case adds a minimal
/// eigenvector component (sign fixed so the first coefficient above threshold
/// is nonnegative).
TrsSolution solve_trs_exact(const Matrix& H, const Vector& psi, double delta);

}  // namespace riemip
