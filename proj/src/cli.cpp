#include "riemip/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

#include <CLI11.hpp>

#include "riemip/diagnostics.hpp"
#include "riemip/kkt.hpp"
#include "riemip/problem_io.hpp"
#include "riemip/riptrm.hpp"
#include "riemip/suite.hpp"
#include "riemip/trace.hpp"

namespace riemip {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct RunSpec {
  std::string problem = "T1";
  std::string algorithm = "ripm";
  RiptrmConfig config;
  std::string trace_path = "trace.csv";
  std::string summary_path = "summary.txt";
  std::uint64_t seed = 20250809;
};

struct NamedProblem {
  ConstrainedProblem problem;
  PrimalDualPoint initial;
  std::optional<ReferenceSolution> reference;
};

bool is_builtin(const std::string& name) {
  auto names = builtin_problem_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

NamedProblem resolve_problem(const std::string& name) {
  if (is_builtin(name)) {
    BuiltinProblem bp = builtin_problem(name);
    return NamedProblem{std::move(bp.problem), std::move(bp.initial), std::move(bp.reference)};
  }
  LoadedProblem lp = load_problem_file(name);
  if (!lp.initial)
    throw std::invalid_argument("problem file " + name + " does not define an initial point");
  return NamedProblem{std::move(lp.problem), std::move(*lp.initial), std::nullopt};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

int do_solve(const RunSpec& spec) {
  NamedProblem np = resolve_problem(spec.problem);
  const ReferenceSolution* ref = np.reference ? &*np.reference : nullptr;

  SolveReport report;
  if (spec.algorithm == "ripm") {
    report = outer_solve(np.problem, np.initial, spec.config.outer, ref);
  } else if (spec.algorithm == "riptrm") {
    report = riptrm_solve(np.problem, np.initial, spec.config, ref);
  } else {
    throw std::invalid_argument("unknown algorithm: " + spec.algorithm);
  }

  write_trace_csv(spec.trace_path, report.trace);

  double fitted_order = kNan, theta_band = kNan;
  try {
    RateReport rate = rate_from_trace(report.trace);
    fitted_order = rate.median_order;
    theta_band = rate.theta_band;
  } catch (const std::exception&) {
  }

  const double final_kkt = kkt_residual(np.problem, report.final_point);
  StoppingResiduals r = stopping_check(np.problem, report.final_point,
                                       report.trace.empty() ? 0.0 : report.trace.back().mu,
                                       spec.config.outer.forcing);

  std::ofstream sf(spec.summary_path, std::ios::binary);
  if (!sf) throw std::runtime_error("cannot open summary file: " + spec.summary_path);
  sf << "problem: " << spec.problem << "\n"
     << "algorithm: " << spec.algorithm << "\n"
     << "status: " << to_string(report.status) << "\n"
     << "outer_iterations: " << report.trace.size() << "\n"
     << "final_kkt_residual: " << fmt(final_kkt) << "\n"
     << "final_grad_norm: " << fmt(r.grad_norm) << "\n"
     << "final_compl_norm: " << fmt(r.compl_norm) << "\n"
     << "final_eq_norm: " << fmt(r.eq_norm) << "\n"
     << "min_g: " << fmt(r.min_g) << "\n"
     << "min_y: " << fmt(r.min_y) << "\n"
     << "fitted_order: " << fmt(fitted_order) << "\n"
     << "theta_band: " << fmt(theta_band) << "\n"
     << "reference_mode: " << (report.self_referenced_errors ? "self" : "reference") << "\n";
  sf.close();

  std::cout << spec.problem << " " << spec.algorithm << ": " << to_string(report.status) << " in "
            << report.trace.size() << " outer iterations, final KKT residual " << fmt(final_kkt)
            << "\n"
            << "trace: " << spec.trace_path << "\nsummary: " << spec.summary_path << "\n";
  return report.status == SolveStatus::Converged ? 0 : 1;
}

int do_check(const std::string& problem, int samples, std::uint64_t seed, double tol) {
  NamedProblem np = resolve_problem(problem);
  FdValidationReport fd = fd_validate(np.problem, samples, seed);
  std::cout << "derivative check: " << (fd.pass ? "pass" : "FAIL")
            << " (max gradient err " << fmt(fd.max_gradient_error) << ", max Jacobian err "
            << fmt(fd.max_jacobian_error) << ")\n";
  bool ok = fd.pass;
  if (np.reference) {
    PrimalDualPoint ref{np.reference->x, np.reference->y, np.reference->z};
    RegularityReport reg = regularity_check(np.problem, ref, tol);
    std::cout << "licq: " << (reg.licq.pass ? "pass" : "FAIL") << " (sigma_min "
              << fmt(reg.licq.sigma_min) << ")\n"
              << "strict complementarity: " << (reg.sc.pass ? "pass" : "FAIL") << " (min pair "
              << fmt(reg.sc.min_max_pair) << ")\n"
              << "sosc: " << to_string(reg.sosc.status) << " (min Rayleigh "
              << fmt(reg.sosc.min_rayleigh) << ")\n";
    ok = ok && reg.licq.pass && reg.sc.pass && reg.sosc.ok();
  } else {
    std::cout << "regularity: skipped (no reference solution for file problems)\n";
  }
  return ok ? 0 : 1;
}

int do_rate(const std::string& trace_path) {
  std::vector<IterationTrace> trace = read_trace_csv(trace_path);
  RateReport rate;
  try {
    rate = rate_from_trace(trace);
  } catch (const std::invalid_argument& e) {
    std::cerr << "rate analysis failed: " << e.what() << "\n";
    return 1;
  }
  std::cout << "usable errors: " << rate.errors.size() << "\n";
  std::cout << "ratios:";
  for (double r : rate.ratios) std::cout << " " << fmt(r);
  std::cout << "\norders:";
  for (double o : rate.orders) std::cout << " " << fmt(o);
  std::cout << "\nmedian_order: " << fmt(rate.median_order) << "\n"
            << "theta_band: " << fmt(rate.theta_band) << "\n";
  return 0;
}

int do_suite(const std::string& out_dir, std::uint64_t seed) {
  SuiteOptions opts;
  opts.seed = seed;
  opts.out_dir = out_dir;
  std::vector<CriterionResult> results = run_acceptance_suite(opts);
  for (const auto& r : results) {
    std::printf("[%2d] %s %s%s%s\n", r.id, r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.empty() ? "" : ": ", r.detail.c_str());
  }
  const bool ok = all_passed(results);
  std::printf("%zu/%zu criteria passed\n",
              static_cast<std::size_t>(std::count_if(results.begin(), results.end(),
                                                     [](const auto& r) { return r.pass; })),
              results.size());
  return ok ? 0 : 1;
}

}  // namespace

int cli_run(int argc, const char* const* argv) {
  CLI::App app{"Riemannian interior point experiments"};
  app.require_subcommand(1);

  RunSpec spec;
  int samples = 20;
  double check_tol = 1e-6;
  std::string rate_trace;
  std::string suite_out = "suite_out";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--mu0", spec.config.outer.schedule.mu0, "initial barrier parameter (0,1]");
    cmd->add_option("--kappa", spec.config.outer.schedule.kappa, "schedule factor (0,1)");
    cmd->add_option("--theta", spec.config.outer.schedule.theta, "schedule exponent (0,1)");
    cmd->add_option("--c-grad", spec.config.outer.forcing.c_grad, "gradient forcing constant");
    cmd->add_option("--c-compl", spec.config.outer.forcing.c_compl,
                    "complementarity forcing constant");
    cmd->add_option("--c-eq", spec.config.outer.forcing.c_eq, "equality forcing constant");
    cmd->add_option("--c-sosp", spec.config.outer.forcing.c_sosp, "second-order forcing constant");
    cmd->add_option("--kkt-tol", spec.config.outer.kkt_stop_tol, "KKT termination tolerance");
    cmd->add_option("--max-outer", spec.config.outer.max_outer, "outer iteration cap");
    cmd->add_option("--max-inner", spec.config.outer.max_inner, "inner iteration cap");
    cmd->add_option("--tau", spec.config.outer.tau, "fraction-to-boundary parameter (0.9,1)");
    cmd->add_option("--cond-cap", spec.config.outer.condition_cap, "Jacobian condition cap");
    cmd->add_option("--delta-max", spec.config.tr.delta_max, "largest trust-region radius");
    cmd->add_option("--delta-init", spec.config.tr.delta_init, "initial trust-region radius");
    cmd->add_option("--delta-min-init", spec.config.tr.delta_min_init,
                    "floor for per-phase initial radius");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve a problem and write trace/summary files");
  solve->add_option("--problem", spec.problem, "built-in name (T1..T4) or problem file path")
      ->required();
  solve->add_option("--algorithm", spec.algorithm, "ripm or riptrm")
      ->check(CLI::IsMember({"ripm", "riptrm"}));
  add_common(solve);
  solve->add_option("--trace", spec.trace_path, "trace CSV output path");
  solve->add_option("--summary", spec.summary_path, "summary output path");
  solve->add_option("--seed", spec.seed, "random seed (reserved for sampling-based options)");

  CLI::App* check = app.add_subcommand("check", "validate derivatives and regularity");
  check->add_option("--problem", spec.problem, "built-in name (T1..T4) or problem file path")
      ->required();
  check->add_option("--samples", samples, "number of sample points");
  check->add_option("--seed", spec.seed, "random seed");
  check->add_option("--tol", check_tol, "regularity tolerance");

  CLI::App* rate = app.add_subcommand("rate", "convergence-order analysis of an existing trace");
  rate->add_option("--trace", rate_trace, "trace CSV to analyze")->required();

  CLI::App* suite = app.add_subcommand("suite", "run the acceptance property suite");
  suite->add_option("--out", suite_out, "directory for trace artifacts");
  suite->add_option("--seed", spec.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (solve->parsed()) return do_solve(spec);
    if (check->parsed()) return do_check(spec.problem, samples, spec.seed, check_tol);
    if (rate->parsed()) return do_rate(rate_trace);
    if (suite->parsed()) return do_suite(suite_out, spec.seed);
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace riemip
