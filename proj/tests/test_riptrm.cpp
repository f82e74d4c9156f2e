#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "riemip/diagnostics.hpp"
#include "riemip/errors.hpp"
#include "riemip/kkt.hpp"
#include "riemip/riptrm.hpp"

using namespace riemip;

namespace {

PrimalDualPoint t1_point(double x, double y) {
  BuiltinProblem bp = builtin_problem("T1");
  return PrimalDualPoint{bp.problem.manifold().point(x * Vector::Ones(1)), y * Vector::Ones(1),
                         Vector(0)};
}

RiptrmConfig fast_config() {
  RiptrmConfig cfg;
  cfg.outer.schedule = BarrierSchedule{0.1, 0.5, 0.9};
  cfg.outer.max_outer = 30;
  return cfg;
}

/// Scalar problem min -a x^2 subject to x >= 0, used to dial in the smallest
/// eigenvalue of the condensed Hessian: H = -2a + y / x.
ConstrainedProblem concave_problem(double a) {
  auto m = Manifold::euclidean(1);
  ScalarOracle f = ambient_oracle(
      m, [a](const Vector& x) { return -a * x(0) * x(0); },
      [a](const Vector& x) { return Vector(-2.0 * a * x); },
      [a](const Vector&, const Vector& v) { return Vector(-2.0 * a * v); });
  ScalarOracle g = ambient_oracle(
      m, [](const Vector& x) { return x(0); }, [](const Vector&) { return Vector::Ones(1); },
      [](const Vector&, const Vector&) { return Vector::Zero(1); });
  return ConstrainedProblem("concave", m, f, {g}, {});
}

}  // namespace

TEST_CASE("condensed Hessian of the scalar problem is y over x") {
  BuiltinProblem bp = builtin_problem("T1");
  for (auto [x, y] : {std::pair{0.4, 1.5}, std::pair{2.0, 0.3}}) {
    CondensedHessian H = condensed_hessian(bp.problem, t1_point(x, y).x, y * Vector::Ones(1));
    REQUIRE(H.matrix.rows() == 1);
    CHECK(H.matrix(0, 0) == doctest::Approx(y / x).epsilon(1e-14));
    CHECK(H.lambda_min == doctest::Approx(y / x).epsilon(1e-14));
  }
  // Central path: H = 1 / mu.
  for (double mu : {0.5, 1e-2}) {
    CondensedHessian H = condensed_hessian(bp.problem, t1_point(mu, 1.0).x, Vector::Ones(1));
    CHECK(H.matrix(0, 0) == doctest::Approx(1.0 / mu).epsilon(1e-12));
  }
}

TEST_CASE("condensed Hessian requires strictly positive inequalities") {
  BuiltinProblem bp = builtin_problem("T1");
  CHECK_THROWS_AS((void)condensed_hessian(bp.problem, t1_point(0.0, 1.0).x, Vector::Ones(1)),
                  NonpositiveConstraint);
}

TEST_CASE("condensed Hessian is symmetric on the sphere problem") {
  BuiltinProblem bp = builtin_problem("T2");
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    PrimalDualPoint w = random_interior_point(bp.problem, rng);
    CondensedHessian H = condensed_hessian(bp.problem, w.x, w.y);
    CHECK((H.matrix - H.matrix.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("barrier gradient closed form and log-barrier consistency") {
  BuiltinProblem bp = builtin_problem("T1");
  for (auto [x, mu] : {std::pair{0.5, 0.1}, std::pair{2.0, 0.3}}) {
    TangentVector psi = barrier_gradient(bp.problem, t1_point(x, 1.0).x, mu);
    CHECK(psi.coords(0) == doctest::Approx(1.0 - mu / x).epsilon(1e-14));
  }
  TangentVector stationary = barrier_gradient(bp.problem, t1_point(0.25, 1.0).x, 0.25);
  CHECK(std::abs(stationary.coords(0)) <= 1e-15);
  TangentVector plain = barrier_gradient(bp.problem, t1_point(0.7, 1.0).x, 0.0);
  CHECK(plain.coords(0) == 1.0);

  // Finite differences of f - mu sum log g along random tangents.
  BuiltinProblem t2 = builtin_problem("T2");
  std::mt19937_64 rng(12);
  const Manifold& M = t2.problem.manifold();
  for (int trial = 0; trial < 10; ++trial) {
    PrimalDualPoint w = random_interior_point(t2.problem, rng);
    const double mu = 0.05;
    auto composite = [&](const Point& p) {
      double v = t2.problem.objective(p);
      Vector g = t2.problem.inequalities(p);
      for (Eigen::Index i = 0; i < g.size(); ++i) v -= mu * std::log(g(i));
      return v;
    };
    TangentVector v = M.random_tangent(w.x, rng);
    const double nv = M.norm(v);
    if (nv < 1e-10) continue;
    v.coords /= nv;
    const double h = 1e-6;
    const double fd = (composite(M.retract(w.x, TangentVector{h * v.coords, w.x})) -
                       composite(M.retract(w.x, TangentVector{-h * v.coords, w.x}))) /
                      (2 * h);
    const double an = barrier_gradient(t2.problem, w.x, mu).coords.dot(v.coords);
    CHECK(fd == doctest::Approx(an).epsilon(1e-5));
  }
}

TEST_CASE("multiplier step examples") {
  BuiltinProblem bp = builtin_problem("T1");
  const Manifold& M = bp.problem.manifold();
  // On the central path with a zero direction the multiplier is stationary.
  Point x_mu = t1_point(0.3, 1.0).x;
  Vector dy = y_step(bp.problem, x_mu, Vector::Ones(1), 0.3, M.zero_tangent(x_mu));
  CHECK(std::abs(dy(0)) <= 1e-15);

  // y = mu S^{-1} 1 exactly is a fixed point for d = 0.
  Point x = t1_point(0.8, 1.0).x;
  Vector y_fix = (0.2 / 0.8) * Vector::Ones(1);
  Vector dy_fix = y_step(bp.problem, x, y_fix, 0.2, M.zero_tangent(x));
  CHECK(std::abs(dy_fix(0)) <= 1e-15);

  // Hand arithmetic at (x, y) = (1, 1), mu = 0.5, d = -0.5.
  Point x1 = t1_point(1.0, 1.0).x;
  TangentVector d{-0.5 * Vector::Ones(1), x1};
  Vector dy1 = y_step(bp.problem, x1, Vector::Ones(1), 0.5, d);
  CHECK(std::abs(dy1(0)) <= 1e-15);

  CHECK_THROWS_AS((void)y_step(bp.problem, t1_point(0.0, 1.0).x, Vector::Ones(1), 0.5,
                               M.zero_tangent(t1_point(0.0, 1.0).x)),
                  NonpositiveConstraint);
}

TEST_CASE("second-order stationarity test thresholds") {
  BuiltinProblem bp = builtin_problem("T1");
  ForcingFunctions forcing;
  SospResult central = sosp_check(bp.problem, t1_point(0.1, 1.0).x, Vector::Ones(1), 0.1, forcing);
  CHECK(central.pass);
  CHECK(central.lambda_min == doctest::Approx(10.0).epsilon(1e-12));

  // lambda_min = -2 eps fails, lambda_min = -eps/2 passes (eps = mu here).
  const double mu = 0.1, x = 1.0, y = 1.0;
  {
    ConstrainedProblem prob = concave_problem(0.5 * (y / x + 2 * mu));
    SospResult r = sosp_check(prob, prob.manifold().point(x * Vector::Ones(1)),
                              y * Vector::Ones(1), mu, forcing);
    CHECK(r.lambda_min == doctest::Approx(-2 * mu).epsilon(1e-12));
    CHECK(!r.pass);
  }
  {
    ConstrainedProblem prob = concave_problem(0.5 * (y / x + 0.5 * mu));
    SospResult r = sosp_check(prob, prob.manifold().point(x * Vector::Ones(1)),
                              y * Vector::Ones(1), mu, forcing);
    CHECK(r.lambda_min == doctest::Approx(-0.5 * mu).epsilon(1e-12));
    CHECK(r.pass);
  }
}

TEST_CASE("interior TRS steps coincide with Newton steps") {
  BuiltinProblem bp = builtin_problem("T1");
  {
    EquivalenceReport rep = newton_equivalence_check(bp.problem, t1_point(0.3, 1.0), 0.3, 10.0);
    CHECK(rep.pass);
    CHECK(rep.trs.step.norm() <= 1e-14);
    CHECK(rep.newton.norm() <= 1e-14);
  }
  {
    EquivalenceReport rep = newton_equivalence_check(bp.problem, t1_point(0.2, 1.0), 0.1, 10.0);
    CHECK(rep.dx_diff <= 1e-10);
    CHECK(rep.dy_diff <= 1e-10);
  }
  // A tiny radius forces the boundary and the check refuses to compare.
  CHECK_THROWS_AS((void)newton_equivalence_check(bp.problem, t1_point(0.2, 1.0), 0.1, 0.05),
                  NotInterior);
}

TEST_CASE("trust-region solve drives T1 with first-candidate acceptance near the end") {
  BuiltinProblem bp = builtin_problem("T1");
  SolveReport rep = riptrm_solve(bp.problem, bp.initial, fast_config(), &bp.reference);
  REQUIRE(rep.status == SolveStatus::Converged);
  CHECK(kkt_residual(bp.problem, rep.final_point) <= 1e-10);
  REQUIRE(!rep.trace.empty());
  CHECK(rep.trace.back().inner_iters == 0);
  int K = static_cast<int>(rep.trace.size());
  for (int k = static_cast<int>(rep.trace.size()) - 1; k >= 0 && rep.trace[k].inner_iters == 0;
       --k)
    K = k;
  CHECK(K <= 10);
}

TEST_CASE("trust-region solve reaches the sphere reference accurately") {
  BuiltinProblem bp = builtin_problem("T2");
  SolveReport rep = riptrm_solve(bp.problem, bp.initial, fast_config(), &bp.reference);
  REQUIRE(rep.status == SolveStatus::Converged);
  PrimalDualPoint ref{bp.reference.x, bp.reference.y, bp.reference.z};
  CHECK(primal_dual_distance(bp.problem, rep.final_point, ref) <= 1e-8);
}

TEST_CASE("equality constraints are rejected by the trust-region solver") {
  BuiltinProblem bp = builtin_problem("T3");
  CHECK_THROWS_AS((void)riptrm_solve(bp.problem, bp.initial, fast_config()),
                  std::invalid_argument);
}

TEST_CASE("condensed Hessian stays positive definite near the solution") {
  for (const char* name : {"T1", "T2"}) {
    BuiltinProblem bp = builtin_problem(name);
    SolveReport rep = riptrm_solve(bp.problem, bp.initial, fast_config(), &bp.reference);
    REQUIRE(rep.status == SolveStatus::Converged);
    int checked = 0;
    for (const auto& row : rep.trace) {
      if (row.err_to_ref <= 1e-3 && row.min_g > 0 && row.lambda_min_h == row.lambda_min_h) {
        ++checked;
        CHECK(row.lambda_min_h > 0);
      }
    }
    CAPTURE(name);
    CHECK(checked > 0);
  }
}

TEST_CASE("inner barrier merit never increases across accepted steps") {
  for (const char* name : {"T1", "T2"}) {
    BuiltinProblem bp = builtin_problem(name);
    SolveReport rep = riptrm_solve(bp.problem, bp.initial, fast_config(), &bp.reference);
    REQUIRE(rep.status == SolveStatus::Converged);
    for (const auto& merits : rep.inner_merits)
      for (std::size_t i = 0; i + 1 < merits.size(); ++i) CHECK(merits[i + 1] <= merits[i]);
    // One acceptance ratio per ratio-tested inner step, per outer iteration.
    REQUIRE(rep.inner_ratios.size() == rep.trace.size());
    for (std::size_t k = 0; k < rep.trace.size(); ++k)
      CHECK(static_cast<int>(rep.inner_ratios[k].size()) == rep.trace[k].inner_iters);
  }
}

TEST_CASE("trust-region config validation") {
  TrustRegionConfig bad;
  bad.delta_init = 20.0;  // above delta_max
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  TrustRegionConfig bad2;
  bad2.grow = 0.5;
  CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);
}
