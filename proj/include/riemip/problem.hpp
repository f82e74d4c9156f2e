#pragma once

#include <functional>
#include <string>
#include <vector>

#include "riemip/manifold.hpp"

namespace riemip {

/// Value/gradient/Hessian-vector oracles for one scalar function on a
/// manifold. Gradients are Riemannian gradients and hess_vec applies the
/// Riemannian Hessian to a tangent vector at the same point.
struct ScalarOracle {
  std::function<double(const Point&)> value;
  std::function<TangentVector(const Point&)> grad;
  std::function<TangentVector(const Point&, const TangentVector&)> hess_vec;
};

/// Builds a ScalarOracle from an ambient-space extension of the function:
/// `value`, `grad` and `hess_vec` are the Euclidean data of a smooth extension
/// and get converted to Riemannian quantities through projection and the
/// curvature correction of the embedding.
ScalarOracle ambient_oracle(std::shared_ptr<const Manifold> manifold,
                            std::function<double(const Vector&)> value,
                            std::function<Vector(const Vector&)> grad,
                            std::function<Vector(const Vector&, const Vector&)> hess_vec);

/// The constrained model: minimize f(x) over the manifold subject to
/// g_i(x) >= 0 (i = 1..m) and h_j(x) = 0 (j = 1..p).
class ConstrainedProblem {
 public:
  ConstrainedProblem(std::string name, std::shared_ptr<const Manifold> manifold,
                     ScalarOracle objective, std::vector<ScalarOracle> inequalities,
                     std::vector<ScalarOracle> equalities);

  const std::string& name() const { return name_; }
  const Manifold& manifold() const { return *manifold_; }
  std::shared_ptr<const Manifold> manifold_ptr() const { return manifold_; }
  int num_inequalities() const { return static_cast<int>(inequalities_.size()); }
  int num_equalities() const { return static_cast<int>(equalities_.size()); }
  int dim() const { return manifold_->dim(); }

  double objective(const Point& x) const { return objective_.value(x); }
  TangentVector objective_grad(const Point& x) const { return objective_.grad(x); }
  TangentVector objective_hess_vec(const Point& x, const TangentVector& v) const {
    return objective_.hess_vec(x, v);
  }

  double inequality(int i, const Point& x) const { return inequalities_[i].value(x); }
  TangentVector inequality_grad(int i, const Point& x) const { return inequalities_[i].grad(x); }
  TangentVector inequality_hess_vec(int i, const Point& x, const TangentVector& v) const {
    return inequalities_[i].hess_vec(x, v);
  }

  double equality(int j, const Point& x) const { return equalities_[j].value(x); }
  TangentVector equality_grad(int j, const Point& x) const { return equalities_[j].grad(x); }
  TangentVector equality_hess_vec(int j, const Point& x, const TangentVector& v) const {
    return equalities_[j].hess_vec(x, v);
  }

  /// Stacked inequality values g(x).
  Vector inequalities(const Point& x) const;
  /// Stacked equality values h(x).
  Vector equalities(const Point& x) const;

 private:
  std::string name_;
  std::shared_ptr<const Manifold> manifold_;
  ScalarOracle objective_;
  std::vector<ScalarOracle> inequalities_;
  std::vector<ScalarOracle> equalities_;
};

/// Primal-dual variables w = (x, y, z). Interior iterates keep y > 0 and
/// g(x) > 0 componentwise.
struct PrimalDualPoint {
  Point x;
  Vector y;
  Vector z;
};

/// A known solution used to measure convergence. `provenance` records how the
/// values were obtained (e.g. "analytic").
struct ReferenceSolution {
  Point x;
  Vector y;
  Vector z;
  std::string provenance;
};

/// A built-in problem together with its reference solution and a default
/// strictly feasible starting point.
struct BuiltinProblem {
  ConstrainedProblem problem;
  ReferenceSolution reference;
  PrimalDualPoint initial;
};

/// Built-in test problems T1..T4. Throws std::invalid_argument for unknown
/// names.
BuiltinProblem builtin_problem(const std::string& name);
std::vector<std::string> builtin_problem_names();

/// grad_x L(w) = grad f(x) - sum_i y_i grad g_i(x) + sum_j z_j grad h_j(x).
TangentVector lagrangian_grad(const ConstrainedProblem& prob, const PrimalDualPoint& w);

/// Hess_x L(w)[v] with the same sign convention as lagrangian_grad.
TangentVector lagrangian_hess_vec(const ConstrainedProblem& prob, const PrimalDualPoint& w,
                                  const TangentVector& v);

/// Indices { i : g_i(x) <= tol }.
std::vector<int> active_set(const ConstrainedProblem& prob, const Point& x, double tol);

/// True iff g(x) > 0 and y > 0 componentwise (strict).
bool strictly_feasible(const ConstrainedProblem& prob, const PrimalDualPoint& w);

/// Distance between primal-dual points: manifold distance on x plus Euclidean
/// distances on y and z.
double primal_dual_distance(const ConstrainedProblem& prob, const PrimalDualPoint& a,
                            const PrimalDualPoint& b);
double primal_dual_distance(const ConstrainedProblem& prob, const PrimalDualPoint& a,
                            const ReferenceSolution& b);

void require_multiplier_dims(const ConstrainedProblem& prob, const PrimalDualPoint& w);

}  // namespace riemip
