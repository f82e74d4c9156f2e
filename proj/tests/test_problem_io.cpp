#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "riemip/diagnostics.hpp"
#include "riemip/kkt.hpp"
#include "riemip/problem_io.hpp"
#include "riemip/ripm.hpp"

using namespace riemip;

namespace {

// Quadratic program with one equality and one bound, matching T3.
const char* kQpJson = R"({
  "name": "qp2",
  "manifold": {"kind": "euclidean", "dim": 2},
  "objective": [
    {"coeff": 0.5, "powers": [2, 0]},
    {"coeff": 0.5, "powers": [0, 2]}
  ],
  "inequalities": [
    [{"coeff": 1.0, "powers": [1, 0]}]
  ],
  "equalities": [
    [{"coeff": 1.0, "powers": [1, 0]},
     {"coeff": 1.0, "powers": [0, 1]},
     {"coeff": -1.0, "powers": [0, 0]}]
  ],
  "initial": {"x": [0.6, 0.7], "y": [0.5], "z": [0.0]}
})";

}  // namespace

TEST_CASE("polynomial problems evaluate their oracles exactly") {
  LoadedProblem lp = parse_problem_json(kQpJson, "inline");
  CHECK(lp.problem.name() == "qp2");
  REQUIRE(lp.initial.has_value());

  Vector x(2);
  x << 2.0, -1.0;
  Point p = lp.problem.manifold().point(x);
  CHECK(lp.problem.objective(p) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(lp.problem.inequality(0, p) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(lp.problem.equality(0, p) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK((lp.problem.objective_grad(p).coords - x).norm() <= 1e-15);

  TangentVector v{Vector::Ones(2), p};
  CHECK((lp.problem.objective_hess_vec(p, v).coords - Vector::Ones(2)).norm() <= 1e-15);
}

TEST_CASE("loaded problems pass derivative validation and solve correctly") {
  LoadedProblem lp = parse_problem_json(kQpJson, "inline");
  FdValidationReport fd = fd_validate(lp.problem, 10, 99);
  CHECK(fd.pass);

  OuterConfig cfg;
  cfg.schedule = BarrierSchedule{0.1, 0.5, 0.9};
  SolveReport rep = outer_solve(lp.problem, *lp.initial, cfg);
  REQUIRE(rep.status == SolveStatus::Converged);
  CHECK(std::abs(rep.final_point.x.coords(0) - 0.5) <= 1e-8);
  CHECK(std::abs(rep.final_point.x.coords(1) - 0.5) <= 1e-8);
  CHECK(std::abs(rep.final_point.z(0) + 0.5) <= 1e-8);
}

TEST_CASE("cubic terms produce the right Hessian-vector products") {
  const char* cubic = R"({
    "manifold": {"kind": "euclidean", "dim": 2},
    "objective": [{"coeff": 1.0, "powers": [2, 1]}],
    "inequalities": [],
    "equalities": []
  })";
  LoadedProblem lp = parse_problem_json(cubic, "cubic");
  Vector x(2);
  x << 2.0, 3.0;
  Point p = lp.problem.manifold().point(x);
  // f = x1^2 x2: grad = (2 x1 x2, x1^2), Hess = [[2 x2, 2 x1], [2 x1, 0]].
  CHECK(lp.problem.objective(p) == doctest::Approx(12.0));
  Vector grad = lp.problem.objective_grad(p).coords;
  CHECK(grad(0) == doctest::Approx(12.0));
  CHECK(grad(1) == doctest::Approx(4.0));
  TangentVector v{Vector::Zero(2), p};
  v.coords << 1.0, -1.0;
  Vector hv = lp.problem.objective_hess_vec(p, v).coords;
  CHECK(hv(0) == doctest::Approx(6.0 - 4.0));
  CHECK(hv(1) == doctest::Approx(4.0));
}

TEST_CASE("schema violations are rejected") {
  CHECK_THROWS_AS((void)parse_problem_json("{not json", "x"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_problem_json(
                      R"({"manifold": {"kind": "sphere", "dim": 2}, "objective": []})", "x"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      (void)parse_problem_json(
          R"({"manifold": {"kind": "euclidean", "dim": 2},
              "objective": [{"coeff": 1.0, "powers": [1]}]})",
          "x"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)parse_problem_json(
          R"({"manifold": {"kind": "euclidean", "dim": 1},
              "objective": [{"coeff": 1.0, "powers": [-1]}]})",
          "x"),
      std::invalid_argument);
}

TEST_CASE("problem files round-trip through the filesystem") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "riemip_io_test";
  fs::create_directories(dir);
  fs::path file = dir / "qp2.json";
  {
    std::ofstream out(file);
    out << kQpJson;
  }
  LoadedProblem lp = load_problem_file(file.string());
  CHECK(lp.problem.num_inequalities() == 1);
  CHECK(lp.problem.num_equalities() == 1);
  REQUIRE(lp.initial.has_value());
  CHECK(strictly_feasible(lp.problem, *lp.initial));
  CHECK_THROWS_AS((void)load_problem_file((dir / "missing.json").string()),
                  std::invalid_argument);
}

TEST_CASE("initial point is optional") {
  const char* minimal = R"({
    "manifold": {"kind": "euclidean", "dim": 1},
    "objective": [{"coeff": 1.0, "powers": [1]}],
    "inequalities": [[{"coeff": 1.0, "powers": [1]}]]
  })";
  LoadedProblem lp = parse_problem_json(minimal, "minimal");
  CHECK(!lp.initial.has_value());
  CHECK(lp.problem.num_inequalities() == 1);
}
