// Acceptance property runner: executes every criterion of the suite and
// prints one pass/fail line each. Exits nonzero when any criterion fails.

#include <cstdio>
#include <cstring>
#include <string>

#include "riemip/suite.hpp"

int main(int argc, char** argv) {
  riemip::SuiteOptions opts;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::strcmp(argv[i], "--out") == 0) opts.out_dir = argv[i + 1];
    if (std::strcmp(argv[i], "--seed") == 0) opts.seed = std::stoull(argv[i + 1]);
  }

  std::vector<riemip::CriterionResult> results = riemip::run_acceptance_suite(opts);
  int failures = 0;
  for (const auto& r : results) {
    std::printf("[%2d] %s %s%s%s\n", r.id, r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.empty() ? "" : ": ", r.detail.c_str());
    if (!r.pass) ++failures;
  }
  std::printf("%zu/%zu criteria passed\n", results.size() - failures, results.size());
  return failures == 0 ? 0 : 1;
}
