#include "riemip/trs.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace riemip {

namespace {

// Step norm as a function of the gap sigma = nu - nu_lo, with gamma_i the
// eigenvalues shifted by nu_lo. Working in the gap avoids the catastrophic
// cancellation of lambda_i + nu when nu is close to -lambda_min.
double gap_step_norm(const Vector& q, const Vector& gamma, double sigma) {
  double s = 0;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    const double c = q(i) / (gamma(i) + sigma);
    s += c * c;
  }
  return std::sqrt(s);
}

void finalize(TrsSolution& sol, const Matrix& H, const Vector& psi, double delta,
              double lambda_min) {
  const double dn = sol.step.norm();
  sol.on_boundary = dn >= delta * (1.0 - 1e-12);
  sol.stationarity_residual = ((H + sol.nu * Matrix::Identity(H.rows(), H.cols())) * sol.step + psi).norm();
  sol.complementarity_residual = std::abs(sol.nu * (delta - dn));
  sol.constraint_violation = std::max(0.0, dn - delta);
  sol.psd_margin = lambda_min + sol.nu;
  sol.model_value = 0.5 * sol.step.dot(H * sol.step) + psi.dot(sol.step);
}

}  // namespace

TrsSolution solve_trs_exact(const Matrix& H, const Vector& psi, double delta) {
  if (delta <= 0) throw std::invalid_argument("trust region radius must be positive");
  if (H.rows() != H.cols() || H.rows() != psi.size())
    throw std::invalid_argument("TRS dimensions mismatch");
  const Eigen::Index n = H.rows();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(H);
  if (eig.info() != Eigen::Success) throw std::runtime_error("TRS eigendecomposition failed");
  const Vector lam = eig.eigenvalues();  // ascending
  const Matrix& Q = eig.eigenvectors();
  const double lambda_min = lam(0);
  const Vector q = Q.transpose() * psi;

  TrsSolution sol;

  // Interior Newton point.
  if (lambda_min > 0) {
    Vector d = -(q.array() / lam.array()).matrix();
    if (d.norm() <= delta) {
      sol.step = Q * d;
      sol.nu = 0;
      finalize(sol, H, psi, delta, lambda_min);
      return sol;
    }
  }

  const double nu_lo = std::max(0.0, -lambda_min);
  // Shifted spectrum: gamma_i = lambda_i + nu_lo >= 0, exactly zero on the
  // minimal eigenspace when lambda_min <= 0.
  Vector gamma(n);
  for (Eigen::Index i = 0; i < n; ++i) gamma(i) = lam(i) + nu_lo;
  const double gap = std::max(1e-12, 1e-12 * std::abs(lambda_min));

  // Energy of psi on the minimal eigenspace decides between the hard case and
  // the secular equation.
  double s_min = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (gamma(i) <= gap) s_min += q(i) * q(i);
  const bool psi_perp_min = std::sqrt(s_min) <= 1e-11 * std::max(1.0, psi.norm());

  if (lambda_min <= 0 && psi_perp_min) {
    // Limit of the regularized step as nu -> -lambda_min.
    Vector d_reg = Vector::Zero(n);
    double reg_norm_sq = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (gamma(i) > gap) {
        d_reg(i) = -q(i) / gamma(i);
        reg_norm_sq += d_reg(i) * d_reg(i);
      }
    }
    if (reg_norm_sq <= delta * delta) {
      // Hard case: pad with a minimal eigenvector to reach the boundary.
      const double t = std::sqrt(std::max(0.0, delta * delta - reg_norm_sq));
      Vector v = Q.col(0);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(v(i)) > 1e-8) {
          if (v(i) < 0) v = -v;
          break;
        }
      }
      sol.step = Q * d_reg + t * v;
      sol.nu = nu_lo;
      finalize(sol, H, psi, delta, lambda_min);
      return sol;
    }
  }

  // Secular equation ||(H + nu I)^{-1} psi|| = delta, solved for the gap
  // sigma = nu - nu_lo on (0, sigma_hi].
  double lo = 0.0;
  double hi = q.norm() / delta + 1e-30;
  while (gap_step_norm(q, gamma, hi) > delta) hi *= 2;

  double sigma = 0.5 * (lo + hi);
  for (int it = 0; it < 300; ++it) {
    const double nrm = gap_step_norm(q, gamma, sigma);
    if (std::abs(nrm - delta) <= 1e-12 * std::max(1.0, delta)) break;
    if (nrm > delta)
      lo = sigma;
    else
      hi = sigma;
    // Keep halving until the bracket is exhausted in relative terms and
    // settle on the feasible side.
    if (hi - lo <= 1e-16 * hi) {
      sigma = hi;
      break;
    }
    // Newton step on 1/||d(sigma)|| - 1/delta, falling back to bisection
    // whenever it leaves the bracket.
    double dn2 = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double c = gamma(i) + sigma;
      dn2 += q(i) * q(i) / (c * c * c);
    }
    const double phi = 1.0 / nrm - 1.0 / delta;
    const double dphi = dn2 / (nrm * nrm * nrm);
    double next = (dphi > 0) ? sigma - phi / dphi : std::numeric_limits<double>::quiet_NaN();
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    sigma = next;
  }

  Vector d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = -q(i) / (gamma(i) + sigma);
  sol.step = Q * d;
  sol.nu = nu_lo + sigma;
  finalize(sol, H, psi, delta, lambda_min);
  return sol;
}

}  // namespace riemip
