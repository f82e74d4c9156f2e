#include "riemip/suite.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>

#include "riemip/diagnostics.hpp"
#include "riemip/kkt.hpp"
#include "riemip/riptrm.hpp"
#include "riemip/trace.hpp"
#include "riemip/trs.hpp"

namespace riemip {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

ScalarOracle linear1(std::shared_ptr<const Manifold> m, Vector a, double b) {
  const int n = m->ambient_dim();
  return ambient_oracle(
      std::move(m), [a, b](const Vector& x) { return a.dot(x) + b; },
      [a](const Vector&) { return a; },
      [n](const Vector&, const Vector&) { return Vector::Zero(n); });
}

struct RateRun {
  std::string label;
  std::string problem;
  SolveReport report;
  double seconds = 0;
};

OuterConfig rate_outer_config() {
  OuterConfig cfg;
  cfg.schedule = BarrierSchedule{0.1, 0.5, 0.9};
  cfg.max_outer = 30;
  cfg.kkt_stop_tol = 1e-10;
  return cfg;
}

std::vector<RateRun> run_rate_problems() {
  std::vector<RateRun> runs;
  for (const char* name : {"T1", "T2", "T3"}) {
    BuiltinProblem bp = builtin_problem(name);
    auto t0 = Clock::now();
    SolveReport rep = outer_solve(bp.problem, bp.initial, rate_outer_config(), &bp.reference);
    const double secs = seconds_since(t0);
    runs.push_back({std::string(name) + "_ripm", name, std::move(rep), secs});
  }
  for (const char* name : {"T1", "T2"}) {
    BuiltinProblem bp = builtin_problem(name);
    RiptrmConfig cfg;
    cfg.outer = rate_outer_config();
    auto t0 = Clock::now();
    SolveReport rep = riptrm_solve(bp.problem, bp.initial, cfg, &bp.reference);
    const double secs = seconds_since(t0);
    runs.push_back({std::string(name) + "_riptrm", name, std::move(rep), secs});
  }
  return runs;
}

}  // namespace

RegularityFixture sc_violating_fixture() {
  auto m = Manifold::euclidean(1);
  ScalarOracle f = ambient_oracle(
      m, [](const Vector& x) { return x(0) * x(0); }, [](const Vector& x) { return 2.0 * x; },
      [](const Vector&, const Vector& v) { return 2.0 * v; });
  ScalarOracle g = linear1(m, Vector::Ones(1), 0.0);
  ConstrainedProblem prob("sc_fixture", m, f, {g}, {});
  PrimalDualPoint w{m->point(Vector::Zero(1)), Vector::Zero(1), Vector(0)};
  return RegularityFixture{std::move(prob), std::move(w)};
}

RegularityFixture licq_violating_fixture() {
  auto m = Manifold::euclidean(2);
  Vector e1(2);
  e1 << 1, 0;
  ScalarOracle f = linear1(m, e1, 0.0);
  ScalarOracle g1 = linear1(m, e1, 0.0);
  ScalarOracle g2 = linear1(m, 2.0 * e1, 0.0);
  ConstrainedProblem prob("licq_fixture", m, f, {g1, g2}, {});
  Vector y(2);
  y << 0.5, 0.25;
  PrimalDualPoint w{m->point(Vector::Zero(2)), y, Vector(0)};
  return RegularityFixture{std::move(prob), std::move(w)};
}

namespace {

struct CriterionOutcome {
  bool pass = false;
  std::string detail;
};

/// Runs one criterion body, timing it and converting stray exceptions into a
/// failed result instead of aborting the whole suite.
void run_criterion(std::vector<CriterionResult>& results, int id, const std::string& name,
                   const std::function<CriterionOutcome()>& body) {
  auto t0 = Clock::now();
  CriterionResult res;
  res.id = id;
  res.name = name;
  try {
    CriterionOutcome out = body();
    res.pass = out.pass;
    res.detail = std::move(out.detail);
  } catch (const std::exception& e) {
    res.pass = false;
    res.detail = std::string("exception: ") + e.what();
  }
  res.seconds = seconds_since(t0);
  results.push_back(std::move(res));
}

}  // namespace

std::vector<CriterionResult> run_acceptance_suite(const SuiteOptions& options) {
  std::vector<CriterionResult> results;
  std::mt19937_64 rng(options.seed);
  constexpr std::size_t kRateRunCount = 5;  // T1-T3 ripm plus T1-T2 riptrm

  // 1. Jacobian versus finite differences on T1..T4.
  run_criterion(results, 1, "Jacobian finite-difference consistency (T1-T4)", [&] {
    auto t0 = Clock::now();
    double worst = 0;
    std::uniform_real_distribution<double> u_mu(1e-3, 0.5);
    for (const std::string& name : builtin_problem_names()) {
      BuiltinProblem bp = builtin_problem(name);
      for (int s = 0; s < 20; ++s) {
        PrimalDualPoint w = random_interior_point(bp.problem, rng);
        worst = std::max(worst, jacobian_fd_error(bp.problem, w, u_mu(rng)));
      }
    }
    const double secs = seconds_since(t0);
    return CriterionOutcome{worst <= 1e-5 && secs < 5.0,
                            "max rel err " + fmt(worst) + ", " + fmt(secs) + " s"};
  });

  // 2. Central-path exactness of one extrapolation on T1.
  run_criterion(results, 2, "Central-path exactness of the Newton extrapolation (T1)", [&] {
    BuiltinProblem bp = builtin_problem("T1");
    bool ok = true;
    double worst = 0;
    for (auto [mu0, mu1] : {std::pair{0.5, 0.25}, std::pair{0.1, 0.01}}) {
      PrimalDualPoint w{bp.problem.manifold().point(mu0 * Vector::Ones(1)), Vector::Ones(1),
                        Vector(0)};
      PrimalDualPoint next = extrapolate(bp.problem, w, mu1);
      const double err = std::abs(next.x.coords(0) - mu1) + std::abs(next.y(0) - 1.0);
      worst = std::max(worst, err);
      ok = ok && err <= 1e-12;
    }
    return CriterionOutcome{ok, "max deviation " + fmt(worst)};
  });

  // 3. TRS optimality certificates against a sampling oracle.
  run_criterion(results, 3, "TRS optimality certificates (100 instances, hard cases included)",
                [&] {
    auto t0 = Clock::now();
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> u_eig(-2.0, 2.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double deltas[3] = {0.1, 1.0, 10.0};
    bool ok = true;
    double worst_resid = 0, worst_gap = -1e300;
    int hard_cases = 0;
    for (int inst = 0; inst < 100; ++inst) {
      const int d = 2 + inst % 7;  // dimensions 2..8
      const bool force_hard = inst % 20 == 0;  // 5 forced hard cases
      Matrix A(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) A(i, j) = gauss(rng);
      Eigen::HouseholderQR<Matrix> qr(A);
      Matrix Q = qr.householderQ();
      Vector lam(d);
      for (int i = 0; i < d; ++i) lam(i) = u_eig(rng);
      if (force_hard) lam(0) = -std::abs(lam(0)) - 0.5;  // strictly negative minimum
      std::sort(lam.data(), lam.data() + d);
      Matrix H = Q * lam.asDiagonal() * Q.transpose();
      H = 0.5 * (H + H.transpose());

      double delta = deltas[inst % 3];
      Vector psi(d);
      for (int i = 0; i < d; ++i) psi(i) = gauss(rng);
      if (force_hard) {
        // Remove the minimal eigenvector component and keep the regularized
        // step inside the ball so the boundary gap must be closed by the
        // eigenvector direction.
        Eigen::SelfAdjointEigenSolver<Matrix> eig(H);
        Vector v = eig.eigenvectors().col(0);
        psi -= v.dot(psi) * v;
        double reg_norm = 0;
        for (int i = 1; i < d; ++i) {
          const double qi = eig.eigenvectors().col(i).dot(psi);
          const double den = eig.eigenvalues()(i) - eig.eigenvalues()(0);
          if (den > 1e-9) reg_norm += qi * qi / (den * den);
        }
        reg_norm = std::sqrt(reg_norm);
        if (reg_norm > 0.5 * delta) psi *= (0.5 * delta / reg_norm);
        ++hard_cases;
      }

      TrsSolution sol = solve_trs_exact(H, psi, delta);
      const double resid = std::max({sol.stationarity_residual, sol.complementarity_residual,
                                     sol.constraint_violation, -sol.psd_margin});
      worst_resid = std::max(worst_resid, resid);
      if (resid > 1e-8) ok = false;

      // Sampling oracle: no random point in the ball may beat the solution.
      double best = 0;  // the zero step is always feasible
      for (int s = 0; s < 10000; ++s) {
        Vector dir(d);
        for (int i = 0; i < d; ++i) dir(i) = gauss(rng);
        const double n = dir.norm();
        if (n < 1e-12) continue;
        dir *= delta * std::pow(u01(rng), 1.0 / d) / n;
        best = std::min(best, 0.5 * dir.dot(H * dir) + psi.dot(dir));
      }
      worst_gap = std::max(worst_gap, sol.model_value - best);
      if (sol.model_value > best + 1e-9) ok = false;
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 10.0 && hard_cases >= 5;
    return CriterionOutcome{ok, "max residual " + fmt(worst_resid) + ", max objective gap " +
                                    fmt(worst_gap) + ", " + std::to_string(hard_cases) +
                                    " hard, " + fmt(secs) + " s"};
  });

  // 4. Newton/TRS equivalence at interior points of T1 and T2.
  run_criterion(results, 4, "Newton/TRS step equivalence at interior points (T1, T2)", [&] {
    bool ok = true;
    double worst = 0;
    std::uniform_real_distribution<double> u_x(0.1, 2.0), u_y(0.5, 2.0), u_mu(1e-3, 0.1);
    BuiltinProblem t1 = builtin_problem("T1");
    for (int s = 0; s < 10; ++s) {
      PrimalDualPoint w{t1.problem.manifold().point(u_x(rng) * Vector::Ones(1)),
                        u_y(rng) * Vector::Ones(1), Vector(0)};
      EquivalenceReport rep = newton_equivalence_check(t1.problem, w, u_mu(rng), 10.0);
      worst = std::max({worst, rep.dx_diff, rep.dy_diff});
      ok = ok && rep.pass;
    }
    BuiltinProblem t2 = builtin_problem("T2");
    std::uniform_real_distribution<double> u_g(0.05, 0.45), u_y2(0.3, 1.0), u_mu2(1e-3, 0.01);
    for (int s = 0; s < 10; ++s) {
      const double x1 = 0.5 + u_g(rng);
      Vector x(2);
      x << x1, -std::sqrt(1.0 - x1 * x1);
      PrimalDualPoint w{t2.problem.manifold().point(x), u_y2(rng) * Vector::Ones(1), Vector(0)};
      EquivalenceReport rep = newton_equivalence_check(t2.problem, w, u_mu2(rng), 10.0);
      worst = std::max({worst, rep.dx_diff, rep.dy_diff});
      ok = ok && rep.pass;
    }
    return CriterionOutcome{ok, "max block deviation " + fmt(worst)};
  });

  // 5. Superlinear / near-quadratic convergence of both solvers.
  std::vector<RateRun> runs;
  run_criterion(results, 5, "Superlinear and near-quadratic convergence (T1-T3)", [&] {
    bool ok = true;
    std::string detail;
    runs = run_rate_problems();
    for (const auto& run : runs) {
      BuiltinProblem bp = builtin_problem(run.problem);
      bool this_ok = run.report.status == SolveStatus::Converged &&
                     static_cast<int>(run.report.trace.size()) <= 30 &&
                     kkt_residual(bp.problem, run.report.final_point) <= 1e-10 &&
                     run.seconds < 1.0;
      double med = 0, min_ratio = 1e300;
      try {
        RateReport rate = rate_from_trace(run.report.trace);
        med = rate.median_order;
        for (double r : rate.ratios) min_ratio = std::min(min_ratio, r);
        this_ok = this_ok && med >= 1.5 && min_ratio < 0.1;
      } catch (const std::exception&) {
        this_ok = false;
      }
      detail += run.label + "(p=" + fmt(med) + ") ";
      ok = ok && this_ok;
    }
    if (!options.out_dir.empty()) {
      std::filesystem::create_directories(options.out_dir);
      for (const auto& run : runs)
        write_trace_csv(options.out_dir + "/c5_" + run.label + ".csv", run.report.trace);
    }
    return CriterionOutcome{ok, detail};
  });

  // 6. Zero-inner-iteration tail of every rate run.
  run_criterion(results, 6, "Zero inner iterations for all k >= K with K <= 10", [&] {
    bool ok = runs.size() == kRateRunCount;
    std::string detail;
    for (const auto& run : runs) {
      const auto& tr = run.report.trace;
      int K = static_cast<int>(tr.size());
      for (int k = static_cast<int>(tr.size()) - 1; k >= 0 && tr[k].inner_iters == 0; --k) K = k;
      const bool tail_ok = !tr.empty() && tr.back().inner_iters == 0 && K <= 10;
      detail += run.label + "(K=" + std::to_string(K) + ") ";
      ok = ok && tail_ok;
    }
    return CriterionOutcome{ok, detail};
  });

  // 7. Error law err_{k} / mu_k stays within a factor-100 band.
  run_criterion(results, 7, "Error-to-barrier ratio band over the last iterations <= 100", [&] {
    bool ok = runs.size() == kRateRunCount;
    std::string detail;
    for (const auto& run : runs) {
      double band = std::numeric_limits<double>::quiet_NaN();
      try {
        band = rate_from_trace(run.report.trace).theta_band;
      } catch (const std::exception&) {
      }
      detail += run.label + "(band=" + fmt(band) + ") ";
      ok = ok && band == band && band <= 100.0;
    }
    return CriterionOutcome{ok, detail};
  });

  // 8. Condensed Hessian positive definite near the solution (riptrm runs).
  run_criterion(results, 8, "Condensed Hessian positive definite near the solution (T1, T2)",
                [&] {
    bool ok = runs.size() == kRateRunCount;
    int checked = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& run : runs) {
      if (run.report.algorithm != "riptrm") continue;
      for (const auto& row : run.report.trace) {
        if (row.err_to_ref <= 1e-3 && row.min_g > 0 && row.lambda_min_h == row.lambda_min_h) {
          ++checked;
          worst = std::min(worst, row.lambda_min_h);
          if (!(row.lambda_min_h > 0)) ok = false;
        }
      }
    }
    ok = ok && checked > 0;
    return CriterionOutcome{
        ok, std::to_string(checked) + " iterates, min lambda_min " + fmt(worst)};
  });

  // 9. Barrier schedule assumptions.
  run_criterion(results, 9, "Barrier schedule decay assumptions (kappa=0.5, theta in {0.5,0.9})",
                [&] {
    bool ok = true;
    for (double theta : {0.5, 0.9}) {
      ScheduleReport rep = schedule_check(BarrierSchedule{1.0, 0.5, theta}, 20);
      ok = ok && rep.pass;
    }
    return CriterionOutcome{ok, ""};
  });

  // 10. Regularity at the shipped references; fault fixtures must fail.
  run_criterion(results, 10, "Regularity suite at references and fault fixtures", [&] {
    bool ok = true;
    std::string detail;
    for (const std::string& name : builtin_problem_names()) {
      BuiltinProblem bp = builtin_problem(name);
      PrimalDualPoint ref{bp.reference.x, bp.reference.y, bp.reference.z};
      RegularityReport rep = regularity_check(bp.problem, ref);
      const bool good = rep.licq.pass && rep.sc.pass && rep.sosc.ok();
      detail += name + (good ? "+ " : "- ");
      ok = ok && good;
    }
    RegularityFixture scf = sc_violating_fixture();
    RegularityReport sc_rep = regularity_check(scf.problem, scf.point);
    ok = ok && !sc_rep.sc.pass;
    detail += std::string("sc_fixture") + (!sc_rep.sc.pass ? "+" : "-") + " ";
    RegularityFixture lf = licq_violating_fixture();
    RegularityReport licq_rep = regularity_check(lf.problem, lf.point);
    ok = ok && !licq_rep.licq.pass;
    detail += std::string("licq_fixture") + (!licq_rep.licq.pass ? "+" : "-");
    return CriterionOutcome{ok, detail};
  });

  // 11. Determinism: repeating the rate runs reproduces the traces bytewise.
  run_criterion(results, 11, "Determinism: repeated runs produce byte-identical traces", [&] {
    std::vector<RateRun> rerun = run_rate_problems();
    bool ok = rerun.size() == runs.size() && !runs.empty();
    if (ok) {
      for (std::size_t i = 0; i < runs.size(); ++i)
        ok = ok && trace_to_csv(runs[i].report.trace) == trace_to_csv(rerun[i].report.trace);
    }
    return CriterionOutcome{ok, ""};
  });

  return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace riemip
