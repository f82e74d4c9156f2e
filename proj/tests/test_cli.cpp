#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "riemip/cli.hpp"
#include "riemip/trace.hpp"

using namespace riemip;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  std::vector<const char*> argv{"riemip"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_run(static_cast<int>(argv.size()), argv.data());
}

fs::path work_dir() {
  fs::path dir = fs::temp_directory_path() / "riemip_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("solve writes a trace and summary and reports convergence") {
  fs::path dir = work_dir();
  fs::path trace = dir / "t1.csv";
  fs::path summary = dir / "t1.txt";
  const int rc = run({"solve", "--problem", "T1", "--algorithm", "ripm", "--theta", "0.9",
                      "--trace", trace.string(), "--summary", summary.string()});
  CHECK(rc == 0);
  std::vector<IterationTrace> rows = read_trace_csv(trace.string());
  REQUIRE(!rows.empty());
  // The mu = 0 residual at the final iterate is below the termination
  // tolerance; its blocks appear in the last row.
  const std::string sum = slurp(summary);
  CHECK(sum.find("status: Converged") != std::string::npos);
  CHECK(sum.find("reference_mode: reference") != std::string::npos);

  const std::string header = slurp(trace).substr(0, std::string(kTraceHeader).size());
  CHECK(header == kTraceHeader);
}

TEST_CASE("solve accepts the trust-region algorithm") {
  fs::path dir = work_dir();
  const int rc = run({"solve", "--problem", "T2", "--algorithm", "riptrm", "--trace",
                      (dir / "t2.csv").string(), "--summary", (dir / "t2.txt").string()});
  CHECK(rc == 0);
  std::vector<IterationTrace> rows = read_trace_csv((dir / "t2.csv").string());
  REQUIRE(!rows.empty());
  CHECK(rows.back().delta == rows.back().delta);  // trust-region column filled
}

TEST_CASE("invalid schedule parameters exit with a configuration error") {
  fs::path dir = work_dir();
  CHECK(run({"solve", "--problem", "T1", "--theta", "1.5", "--trace",
             (dir / "x.csv").string(), "--summary", (dir / "x.txt").string()}) == 2);
  CHECK(run({"solve", "--problem", "NOPE", "--trace", (dir / "x.csv").string(), "--summary",
             (dir / "x.txt").string()}) == 2);
  CHECK(run({"solve"}) == 2);                 // missing required option
  CHECK(run({"frobnicate"}) == 2);            // unknown subcommand
  CHECK(run({"solve", "--problem", "T3", "--algorithm", "riptrm", "--trace",
             (dir / "x.csv").string(), "--summary", (dir / "x.txt").string()}) == 2);
}

TEST_CASE("identical configs produce byte-identical trace files") {
  fs::path dir = work_dir();
  fs::path a = dir / "a.csv", b = dir / "b.csv";
  REQUIRE(run({"solve", "--problem", "T2", "--trace", a.string(), "--summary",
               (dir / "a.txt").string()}) == 0);
  REQUIRE(run({"solve", "--problem", "T2", "--trace", b.string(), "--summary",
               (dir / "b.txt").string()}) == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("check validates derivatives and regularity of a built-in problem") {
  CHECK(run({"check", "--problem", "T2"}) == 0);
  CHECK(run({"check", "--problem", "T4", "--samples", "5"}) == 0);
}

TEST_CASE("rate analyzes a previously written trace") {
  fs::path dir = work_dir();
  fs::path trace = dir / "rate.csv";
  REQUIRE(run({"solve", "--problem", "T1", "--trace", trace.string(), "--summary",
               (dir / "rate.txt").string()}) == 0);
  CHECK(run({"rate", "--trace", trace.string()}) == 0);
  CHECK(run({"rate", "--trace", (dir / "missing.csv").string()}) == 1);
}

TEST_CASE("solve loads problem files") {
  fs::path dir = work_dir();
  fs::path file = dir / "qp.json";
  {
    std::ofstream out(file);
    out << R"({
      "manifold": {"kind": "euclidean", "dim": 2},
      "objective": [{"coeff": 0.5, "powers": [2, 0]}, {"coeff": 0.5, "powers": [0, 2]}],
      "inequalities": [[{"coeff": 1.0, "powers": [1, 0]}]],
      "equalities": [[{"coeff": 1.0, "powers": [1, 0]},
                      {"coeff": 1.0, "powers": [0, 1]},
                      {"coeff": -1.0, "powers": [0, 0]}]],
      "initial": {"x": [0.6, 0.7], "y": [0.5]}
    })";
  }
  const int rc = run({"solve", "--problem", file.string(), "--trace",
                      (dir / "qp.csv").string(), "--summary", (dir / "qp.txt").string()});
  CHECK(rc == 0);
  const std::string sum = slurp(dir / "qp.txt");
  CHECK(sum.find("reference_mode: self") != std::string::npos);
}
