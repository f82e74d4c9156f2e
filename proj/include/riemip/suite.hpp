#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riemip/problem.hpp"

namespace riemip {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct SuiteOptions {
  std::uint64_t seed = 20250809;
  /// When nonempty, per-run trace files are written below this directory.
  std::string out_dir;
};

/// Runs the full acceptance property suite (derivative consistency,
/// central-path exactness, TRS certificates, Newton/TRS equivalence,
/// convergence rates, zero-inner-iteration tail, error law, Hessian
/// definiteness, schedule checks, regularity checks, determinism) and returns
/// one result per criterion.
std::vector<CriterionResult> run_acceptance_suite(const SuiteOptions& options);

bool all_passed(const std::vector<CriterionResult>& results);

/// Degenerate problems used to exercise the failure paths of the regularity
/// checks: a point where strict complementarity fails (y_i = g_i = 0) and one
/// where the active gradients are linearly dependent.
struct RegularityFixture {
  ConstrainedProblem problem;
  PrimalDualPoint point;
};
RegularityFixture sc_violating_fixture();
RegularityFixture licq_violating_fixture();

}  // namespace riemip
