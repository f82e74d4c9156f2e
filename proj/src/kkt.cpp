#include "riemip/kkt.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "riemip/errors.hpp"

namespace riemip {

double BarrierKKTValue::norm() const {
  return std::sqrt(grad_block.coords.squaredNorm() + compl_block.squaredNorm() +
                   eq_block.squaredNorm());
}

BarrierKKTValue barrier_kkt(const ConstrainedProblem& prob, const PrimalDualPoint& w, double mu) {
  if (mu < 0) throw std::invalid_argument("barrier parameter must be nonnegative");
  require_multiplier_dims(prob, w);
  BarrierKKTValue F{lagrangian_grad(prob, w), Vector(prob.num_inequalities()),
                    prob.equalities(w.x)};
  for (int i = 0; i < prob.num_inequalities(); ++i)
    F.compl_block(i) = prob.inequality(i, w.x) * w.y(i) - mu;
  return F;
}

double kkt_residual(const ConstrainedProblem& prob, const PrimalDualPoint& w) {
  return barrier_kkt(prob, w, 0.0).norm();
}

JacobianMatrix assemble_jacobian(const ConstrainedProblem& prob, const PrimalDualPoint& w,
                                 const TangentBasis& basis) {
  require_multiplier_dims(prob, w);
  const int d = basis.dim();
  const int m = prob.num_inequalities();
  const int p = prob.num_equalities();
  Matrix J = Matrix::Zero(d + m + p, d + m + p);

  // Hessian of the Lagrangian, column by column.
  for (int j = 0; j < d; ++j) {
    TangentVector bj = basis.vector_from(Vector::Unit(d, j));
    J.block(0, j, d, 1) = basis.coords_of(lagrangian_hess_vec(prob, w, bj));
  }
  // Constraint gradient coefficients.
  for (int i = 0; i < m; ++i) {
    Vector gi = basis.coords_of(prob.inequality_grad(i, w.x));
    J.block(0, d + i, d, 1) = -gi;
    J.block(d + i, 0, 1, d) = w.y(i) * gi.transpose();
    J(d + i, d + i) = prob.inequality(i, w.x);
  }
  for (int j = 0; j < p; ++j) {
    Vector hj = basis.coords_of(prob.equality_grad(j, w.x));
    J.block(0, d + m + j, d, 1) = hj;
    J.block(d + m + j, 0, 1, d) = hj.transpose();
  }
  return JacobianMatrix{std::move(J), basis};
}

double NewtonStep::norm() const {
  return std::sqrt(dx.coords.squaredNorm() + dy.squaredNorm() + dz.squaredNorm());
}

namespace {

Vector stack_field(const BarrierKKTValue& F, const TangentBasis& basis) {
  const int d = basis.dim();
  Vector out(d + F.compl_block.size() + F.eq_block.size());
  out.head(d) = basis.coords_of(F.grad_block);
  out.segment(d, F.compl_block.size()) = F.compl_block;
  out.tail(F.eq_block.size()) = F.eq_block;
  return out;
}

}  // namespace

NewtonStep newton_step(const ConstrainedProblem& prob, const PrimalDualPoint& w, double mu_target,
                       double condition_cap) {
  const int d = prob.dim();
  const int m = prob.num_inequalities();
  const int p = prob.num_equalities();

  TangentBasis basis = prob.manifold().tangent_basis(w.x);
  JacobianMatrix J = assemble_jacobian(prob, w, basis);
  Vector F = stack_field(barrier_kkt(prob, w, mu_target), basis);

  Eigen::PartialPivLU<Matrix> lu(J.matrix);
  const double rcond = lu.rcond();
  double cond = rcond > 0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  // The reciprocal-norm estimate can miss exact rank deficiency; the pivot
  // ratio of U catches it.
  Vector pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double pmax = pivots.maxCoeff();
  const double pmin = pivots.minCoeff();
  cond = std::max(cond, pmin > 0 ? pmax / pmin : std::numeric_limits<double>::infinity());
  if (!(cond <= condition_cap)) throw NearSingularJacobian(cond);

  Vector delta = lu.solve(-F);
  // One round of iterative refinement keeps the residual at the level required
  // of a Newton step even for moderately conditioned systems.
  Vector r = J.matrix * delta + F;
  if (r.norm() > 1e-10 * std::max(1.0, F.norm())) delta -= lu.solve(r);
  if (!delta.allFinite()) throw NearSingularJacobian(cond);

  NewtonStep step{basis.vector_from(delta.head(d)), delta.segment(d, m), delta.tail(p), cond};
  return step;
}

PrimalDualPoint apply_step(const ConstrainedProblem& prob, const PrimalDualPoint& w,
                           const NewtonStep& step) {
  return PrimalDualPoint{prob.manifold().retract(w.x, step.dx), w.y + step.dy, w.z + step.dz};
}

PrimalDualPoint extrapolate(const ConstrainedProblem& prob, const PrimalDualPoint& w,
                            double mu_target, double condition_cap) {
  return apply_step(prob, w, newton_step(prob, w, mu_target, condition_cap));
}

Matrix fd_jacobian(const ConstrainedProblem& prob, const PrimalDualPoint& w, double mu,
                   const TangentBasis& basis) {
  const int d = basis.dim();
  const int m = prob.num_inequalities();
  const int p = prob.num_equalities();
  const Manifold& M = prob.manifold();

  const double scale =
      std::sqrt(w.x.coords.squaredNorm() + w.y.squaredNorm() + w.z.squaredNorm());
  const double h = 1e-6 * std::max(1.0, scale);

  Matrix J(d + m + p, d + m + p);
  auto column = [&](const PrimalDualPoint& wp, const PrimalDualPoint& wm) {
    BarrierKKTValue Fp = barrier_kkt(prob, wp, mu);
    BarrierKKTValue Fm = barrier_kkt(prob, wm, mu);
    // The gradient blocks live in different tangent spaces; transport them
    // back to T_x before differencing.
    Vector gp = basis.coords_of(M.transport(wp.x, w.x, Fp.grad_block));
    Vector gm = basis.coords_of(M.transport(wm.x, w.x, Fm.grad_block));
    Vector col(d + m + p);
    col.head(d) = (gp - gm) / (2 * h);
    col.segment(d, m) = (Fp.compl_block - Fm.compl_block) / (2 * h);
    col.tail(p) = (Fp.eq_block - Fm.eq_block) / (2 * h);
    return col;
  };

  for (int j = 0; j < d; ++j) {
    TangentVector bj = basis.vector_from(Vector::Unit(d, j));
    PrimalDualPoint wp{M.retract(w.x, TangentVector{h * bj.coords, w.x}), w.y, w.z};
    PrimalDualPoint wm{M.retract(w.x, TangentVector{-h * bj.coords, w.x}), w.y, w.z};
    J.col(j) = column(wp, wm);
  }
  for (int i = 0; i < m; ++i) {
    PrimalDualPoint wp = w, wm = w;
    wp.y(i) += h;
    wm.y(i) -= h;
    J.col(d + i) = column(wp, wm);
  }
  for (int j = 0; j < p; ++j) {
    PrimalDualPoint wp = w, wm = w;
    wp.z(j) += h;
    wm.z(j) -= h;
    J.col(d + m + j) = column(wp, wm);
  }
  return J;
}

double jacobian_fd_error(const ConstrainedProblem& prob, const PrimalDualPoint& w, double mu) {
  TangentBasis basis = prob.manifold().tangent_basis(w.x);
  Matrix J = assemble_jacobian(prob, w, basis).matrix;
  Matrix Jfd = fd_jacobian(prob, w, mu, basis);
  const double scale = std::max(1.0, J.cwiseAbs().maxCoeff());
  return (J - Jfd).cwiseAbs().maxCoeff() / scale;
}

}  // namespace riemip
