#include "riemip/problem.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace riemip {

ScalarOracle ambient_oracle(std::shared_ptr<const Manifold> manifold,
                            std::function<double(const Vector&)> value,
                            std::function<Vector(const Vector&)> grad,
                            std::function<Vector(const Vector&, const Vector&)> hess_vec) {
  ScalarOracle o;
  o.value = [value](const Point& x) { return value(x.coords); };
  o.grad = [manifold, grad](const Point& x) {
    return TangentVector{manifold->gradient_from_ambient(x, grad(x.coords)), x};
  };
  o.hess_vec = [manifold, grad, hess_vec](const Point& x, const TangentVector& v) {
    require_base(x, v);
    Vector g = grad(x.coords);
    Vector hv = hess_vec(x.coords, v.coords);
    return TangentVector{manifold->hessian_from_ambient(x, g, hv, v.coords), x};
  };
  return o;
}

ConstrainedProblem::ConstrainedProblem(std::string name, std::shared_ptr<const Manifold> manifold,
                                       ScalarOracle objective,
                                       std::vector<ScalarOracle> inequalities,
                                       std::vector<ScalarOracle> equalities)
    : name_(std::move(name)),
      manifold_(std::move(manifold)),
      objective_(std::move(objective)),
      inequalities_(std::move(inequalities)),
      equalities_(std::move(equalities)) {
  if (!manifold_) throw std::invalid_argument("problem needs a manifold");
  if (!objective_.value || !objective_.grad || !objective_.hess_vec)
    throw std::invalid_argument("objective oracle incomplete");
}

Vector ConstrainedProblem::inequalities(const Point& x) const {
  Vector g(num_inequalities());
  for (int i = 0; i < num_inequalities(); ++i) g(i) = inequalities_[i].value(x);
  return g;
}

Vector ConstrainedProblem::equalities(const Point& x) const {
  Vector h(num_equalities());
  for (int j = 0; j < num_equalities(); ++j) h(j) = equalities_[j].value(x);
  return h;
}

void require_multiplier_dims(const ConstrainedProblem& prob, const PrimalDualPoint& w) {
  if (w.y.size() != prob.num_inequalities() || w.z.size() != prob.num_equalities())
    throw std::invalid_argument("multiplier vector dimensions do not match the problem");
}

TangentVector lagrangian_grad(const ConstrainedProblem& prob, const PrimalDualPoint& w) {
  require_multiplier_dims(prob, w);
  Vector acc = prob.objective_grad(w.x).coords;
  for (int i = 0; i < prob.num_inequalities(); ++i)
    acc -= w.y(i) * prob.inequality_grad(i, w.x).coords;
  for (int j = 0; j < prob.num_equalities(); ++j)
    acc += w.z(j) * prob.equality_grad(j, w.x).coords;
  return TangentVector{std::move(acc), w.x};
}

TangentVector lagrangian_hess_vec(const ConstrainedProblem& prob, const PrimalDualPoint& w,
                                  const TangentVector& v) {
  require_multiplier_dims(prob, w);
  require_base(w.x, v);
  Vector acc = prob.objective_hess_vec(w.x, v).coords;
  for (int i = 0; i < prob.num_inequalities(); ++i)
    acc -= w.y(i) * prob.inequality_hess_vec(i, w.x, v).coords;
  for (int j = 0; j < prob.num_equalities(); ++j)
    acc += w.z(j) * prob.equality_hess_vec(j, w.x, v).coords;
  return TangentVector{std::move(acc), w.x};
}

std::vector<int> active_set(const ConstrainedProblem& prob, const Point& x, double tol) {
  if (tol < 0) throw std::invalid_argument("active set tolerance must be nonnegative");
  std::vector<int> idx;
  for (int i = 0; i < prob.num_inequalities(); ++i)
    if (prob.inequality(i, x) <= tol) idx.push_back(i);
  return idx;
}

bool strictly_feasible(const ConstrainedProblem& prob, const PrimalDualPoint& w) {
  if (w.y.size() != prob.num_inequalities()) return false;
  for (int i = 0; i < prob.num_inequalities(); ++i) {
    if (!(w.y(i) > 0.0)) return false;
    if (!(prob.inequality(i, w.x) > 0.0)) return false;
  }
  return true;
}

double primal_dual_distance(const ConstrainedProblem& prob, const PrimalDualPoint& a,
                            const PrimalDualPoint& b) {
  double d = prob.manifold().distance(a.x, b.x);
  d += (a.y - b.y).norm();
  d += (a.z - b.z).norm();
  return d;
}

double primal_dual_distance(const ConstrainedProblem& prob, const PrimalDualPoint& a,
                            const ReferenceSolution& b) {
  return primal_dual_distance(prob, a, PrimalDualPoint{b.x, b.y, b.z});
}

namespace {

ScalarOracle linear_ambient(std::shared_ptr<const Manifold> m, Vector a, double b) {
  const int n = m->ambient_dim();
  return ambient_oracle(
      std::move(m), [a, b](const Vector& x) { return a.dot(x) + b; },
      [a](const Vector&) { return a; },
      [n](const Vector&, const Vector&) { return Vector::Zero(n); });
}

BuiltinProblem make_t1() {
  auto m = Manifold::euclidean(1);
  Vector one = Vector::Ones(1);
  ScalarOracle f = linear_ambient(m, one, 0.0);
  ScalarOracle g = linear_ambient(m, one, 0.0);
  ConstrainedProblem prob("T1", m, f, {g}, {});
  ReferenceSolution ref{m->point(Vector::Zero(1)), Vector::Ones(1), Vector(0), "analytic"};
  PrimalDualPoint init{m->point(0.8 * Vector::Ones(1)), 1.2 * Vector::Ones(1), Vector(0)};
  return BuiltinProblem{std::move(prob), std::move(ref), std::move(init)};
}

BuiltinProblem make_t2() {
  auto m = Manifold::sphere(2);
  Vector e2(2), e1(2);
  e1 << 1, 0;
  e2 << 0, 1;
  ScalarOracle f = linear_ambient(m, e2, 0.0);
  ScalarOracle g = linear_ambient(m, e1, -0.5);
  ConstrainedProblem prob("T2", m, f, {g}, {});
  Vector xs(2);
  xs << 0.5, -std::sqrt(3.0) / 2.0;
  Vector ys(1);
  ys << 1.0 / std::sqrt(3.0);
  ReferenceSolution ref{m->point(xs), ys, Vector(0), "analytic"};
  Vector x0(2);
  x0 << 0.9, -std::sqrt(1.0 - 0.81);
  PrimalDualPoint init{m->point(x0), Vector::Ones(1), Vector(0)};
  return BuiltinProblem{std::move(prob), std::move(ref), std::move(init)};
}

BuiltinProblem make_t3() {
  auto m = Manifold::euclidean(2);
  ScalarOracle f = ambient_oracle(
      m, [](const Vector& x) { return 0.5 * x.squaredNorm(); },
      [](const Vector& x) { return x; }, [](const Vector&, const Vector& v) { return v; });
  Vector e1(2), ones(2);
  e1 << 1, 0;
  ones << 1, 1;
  ScalarOracle g = linear_ambient(m, e1, 0.0);
  ScalarOracle h = linear_ambient(m, ones, -1.0);
  ConstrainedProblem prob("T3", m, f, {g}, {h});
  Vector xs(2), ys(1), zs(1);
  xs << 0.5, 0.5;
  ys << 0.0;
  zs << -0.5;
  ReferenceSolution ref{m->point(xs), ys, zs, "analytic"};
  Vector x0(2), y0(1), z0(1);
  x0 << 0.6, 0.7;
  y0 << 0.5;
  z0 << 0.0;
  PrimalDualPoint init{m->point(x0), y0, z0};
  return BuiltinProblem{std::move(prob), std::move(ref), std::move(init)};
}

// T2 on the sphere factor plus a Euclidean slack variable t tied to the
// inequality by the equality t - s1 + 1/2 = 0. Exercises product manifolds
// with simultaneous inequality and equality constraints.
BuiltinProblem make_t4() {
  auto m = Manifold::product({Manifold::sphere(2), Manifold::euclidean(1)});
  Vector af(3), ag(3), ah(3);
  af << 0, 1, 0;
  ag << 1, 0, 0;
  ah << -1, 0, 1;
  ScalarOracle f = linear_ambient(m, af, 0.0);
  ScalarOracle g = linear_ambient(m, ag, -0.5);
  ScalarOracle h = linear_ambient(m, ah, 0.5);
  ConstrainedProblem prob("T4", m, f, {g}, {h});
  Vector xs(3), ys(1), zs(1);
  xs << 0.5, -std::sqrt(3.0) / 2.0, 0.0;
  ys << 1.0 / std::sqrt(3.0);
  zs << 0.0;
  ReferenceSolution ref{m->point(xs), ys, zs, "analytic"};
  Vector x0(3), y0(1), z0(1);
  x0 << 0.9, -std::sqrt(1.0 - 0.81), 0.4;
  y0 << 1.0;
  z0 << 0.0;
  PrimalDualPoint init{m->point(x0), y0, z0};
  return BuiltinProblem{std::move(prob), std::move(ref), std::move(init)};
}

}  // namespace

BuiltinProblem builtin_problem(const std::string& name) {
  if (name == "T1") return make_t1();
  if (name == "T2") return make_t2();
  if (name == "T3") return make_t3();
  if (name == "T4") return make_t4();
  throw std::invalid_argument("unknown built-in problem: " + name);
}

std::vector<std::string> builtin_problem_names() { return {"T1", "T2", "T3", "T4"}; }

}  // namespace riemip
