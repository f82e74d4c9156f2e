#include "riemip/diagnostics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "riemip/kkt.hpp"

namespace riemip {

namespace {

constexpr double kErrorFloor = 1e-14;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

const char* to_string(SoscStatus s) {
  switch (s) {
    case SoscStatus::Pass:
      return "pass";
    case SoscStatus::Fail:
      return "fail";
    case SoscStatus::VacuousPass:
      return "vacuous-pass";
    case SoscStatus::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

RegularityReport regularity_check(const ConstrainedProblem& prob, const PrimalDualPoint& w,
                                  double tol) {
  require_multiplier_dims(prob, w);
  if (kkt_residual(prob, w) > 1e-6)
    throw std::invalid_argument("regularity_check requires an approximate KKT point");

  RegularityReport rep;
  const int m = prob.num_inequalities();
  const int p = prob.num_equalities();
  TangentBasis basis = prob.manifold().tangent_basis(w.x);
  const int d = basis.dim();
  Vector g = prob.inequalities(w.x);

  std::vector<int> active = active_set(prob, w.x, tol);

  // LICQ on row-normalized active and equality gradients.
  {
    const int rows = static_cast<int>(active.size()) + p;
    rep.licq.active_rows = rows;
    if (rows == 0) {
      rep.licq.pass = true;
      rep.licq.sigma_min = kInf;
    } else {
      Matrix A(rows, d);
      int r = 0;
      bool zero_gradient = false;
      auto add_row = [&](const TangentVector& grad) {
        Vector c = basis.coords_of(grad);
        const double n = c.norm();
        if (n < 1e-14) {
          zero_gradient = true;
          A.row(r++).setZero();
        } else {
          A.row(r++) = c.transpose() / n;
        }
      };
      for (int i : active) add_row(prob.inequality_grad(i, w.x));
      for (int j = 0; j < p; ++j) add_row(prob.equality_grad(j, w.x));
      if (rows > d || zero_gradient) {
        rep.licq.sigma_min = 0;
        rep.licq.pass = false;
      } else {
        Eigen::JacobiSVD<Matrix> svd(A);
        rep.licq.sigma_min = svd.singularValues().minCoeff();
        rep.licq.pass = rep.licq.sigma_min > tol;
      }
    }
  }

  // Strict complementarity: exactly one of y_i, g_i at zero per index.
  {
    rep.sc.pass = true;
    rep.sc.min_max_pair = kInf;
    for (int i = 0; i < m; ++i) {
      const bool y_zero = w.y(i) <= tol;
      const bool g_zero = g(i) <= tol;
      if (y_zero == g_zero) rep.sc.pass = false;
      rep.sc.min_max_pair = std::min(rep.sc.min_max_pair, std::max(w.y(i), g(i)));
    }
  }

  // SOSC on the null-space realization of the critical cone.
  {
    std::vector<int> strong, weak;
    for (int i : active) {
      if (w.y(i) > tol)
        strong.push_back(i);
      else
        weak.push_back(i);
    }
    if (!weak.empty()) {
      rep.sosc.status = SoscStatus::Inconclusive;
      rep.sosc.min_rayleigh = kNan;
      rep.sosc.cone_dim = -1;
      return rep;
    }
    const int rows = static_cast<int>(strong.size()) + p;
    Matrix A(rows, d);
    int r = 0;
    for (int i : strong) A.row(r++) = basis.coords_of(prob.inequality_grad(i, w.x)).transpose();
    for (int j = 0; j < p; ++j) A.row(r++) = basis.coords_of(prob.equality_grad(j, w.x)).transpose();

    Matrix K;  // orthonormal basis of the cone (null space of A)
    if (rows == 0) {
      K = Matrix::Identity(d, d);
    } else {
      Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullV);
      int rank = 0;
      const auto& sv = svd.singularValues();
      const double cutoff = 1e-12 * std::max(1.0, sv.size() ? sv(0) : 0.0);
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
      K = svd.matrixV().rightCols(d - rank);
    }
    rep.sosc.cone_dim = static_cast<int>(K.cols());
    if (K.cols() == 0) {
      rep.sosc.status = SoscStatus::VacuousPass;
      rep.sosc.min_rayleigh = kInf;
    } else {
      Matrix HL(d, d);
      for (int j = 0; j < d; ++j) {
        TangentVector bj = basis.vector_from(Vector::Unit(d, j));
        HL.col(j) = basis.coords_of(lagrangian_hess_vec(prob, w, bj));
      }
      Matrix R = K.transpose() * HL * K;
      R = 0.5 * (R + R.transpose());
      Eigen::SelfAdjointEigenSolver<Matrix> eig(R);
      rep.sosc.min_rayleigh = eig.eigenvalues()(0);
      rep.sosc.status = rep.sosc.min_rayleigh > tol ? SoscStatus::Pass : SoscStatus::Fail;
    }
  }
  return rep;
}

ScheduleReport schedule_check_sequence(const std::vector<double>& log_mu) {
  if (log_mu.size() < 3)
    throw std::invalid_argument("schedule_check needs at least 3 steps");
  ScheduleReport rep;
  rep.log_mu = log_mu;
  for (std::size_t k = 0; k + 1 < log_mu.size(); ++k) {
    rep.log_sq_ratio.push_back(2.0 * log_mu[k] - log_mu[k + 1]);
    rep.log_step_ratio.push_back(log_mu[k + 1] - log_mu[k]);
  }
  bool ok = true;
  for (std::size_t k = 0; k + 1 < log_mu.size(); ++k)
    if (!(log_mu[k + 1] < log_mu[k])) ok = false;  // monotone decrease
  for (std::size_t k = 0; k + 1 < rep.log_sq_ratio.size(); ++k) {
    if (!(rep.log_sq_ratio[k + 1] < rep.log_sq_ratio[k])) ok = false;
    if (!(rep.log_step_ratio[k + 1] < rep.log_step_ratio[k])) ok = false;
  }
  if (!(rep.log_sq_ratio.back() < std::log(1e-3))) ok = false;
  if (!(rep.log_step_ratio.back() < rep.log_step_ratio.front())) ok = false;
  rep.pass = ok;
  return rep;
}

ScheduleReport schedule_check(const BarrierSchedule& schedule, int steps) {
  schedule.validate();
  if (steps < 3) throw std::invalid_argument("schedule_check needs at least 3 steps");
  // Iterate in log space; the raw values underflow within a few dozen steps.
  std::vector<double> log_mu;
  double lmu = std::log(schedule.mu0);
  const double lkappa = std::log(schedule.kappa);
  for (int k = 0; k < steps; ++k) {
    log_mu.push_back(lmu);
    lmu = lkappa + (1.0 + schedule.theta) * lmu;
  }
  return schedule_check_sequence(log_mu);
}

RateReport convergence_order(const std::vector<double>& errors) {
  RateReport rep;
  rep.errors = errors;
  while (!rep.errors.empty() && rep.errors.back() <= kErrorFloor) rep.errors.pop_back();
  if (rep.errors.size() < 3)
    throw std::invalid_argument("convergence_order needs at least 3 errors above the noise floor");
  for (double e : rep.errors)
    if (!(e > kErrorFloor))
      throw std::invalid_argument("convergence_order: interior error at or below the noise floor");

  const std::size_t n = rep.errors.size();
  rep.ratios.resize(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) rep.ratios[k] = rep.errors[k + 1] / rep.errors[k];
  rep.orders.assign(n - 2, kNan);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const double den = std::log(rep.errors[k + 1] / rep.errors[k]);
    if (den != 0 && std::isfinite(den))
      rep.orders[k] = std::log(rep.errors[k + 2] / rep.errors[k + 1]) / den;
  }
  std::vector<double> valid;
  for (double o : rep.orders)
    if (std::isfinite(o)) valid.push_back(o);
  if (valid.empty()) throw std::invalid_argument("convergence_order: no usable order estimates");
  const std::size_t take = std::min<std::size_t>(3, valid.size());
  std::vector<double> last(valid.end() - take, valid.end());
  std::sort(last.begin(), last.end());
  rep.median_order = last[last.size() / 2];
  if (last.size() % 2 == 0) rep.median_order = 0.5 * (last[last.size() / 2 - 1] + last[last.size() / 2]);
  rep.theta_band = kNan;
  return rep;
}

RateReport rate_from_trace(const std::vector<IterationTrace>& trace) {
  std::vector<double> errors;
  for (const auto& r : trace) errors.push_back(r.err_to_ref);
  RateReport rep = convergence_order(errors);
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (trace[k].err_to_ref > kErrorFloor && trace[k].mu > 0)
      rep.theta_ratios.push_back(trace[k].err_to_ref / trace[k].mu);
  }
  const std::size_t take = std::min<std::size_t>(5, rep.theta_ratios.size());
  double lo = kInf, hi = 0;
  for (std::size_t i = rep.theta_ratios.size() - take; i < rep.theta_ratios.size(); ++i) {
    lo = std::min(lo, rep.theta_ratios[i]);
    hi = std::max(hi, rep.theta_ratios[i]);
  }
  rep.theta_band = (take > 0 && lo > 0) ? hi / lo : kNan;
  return rep;
}

PrimalDualPoint random_interior_point(const ConstrainedProblem& prob, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u_y(0.2, 2.0);
  std::uniform_real_distribution<double> u_z(-1.0, 1.0);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Point x = prob.manifold().random_point(rng);
    Vector g = prob.inequalities(x);
    if (g.size() && g.minCoeff() <= 1e-3) continue;
    Vector y(prob.num_inequalities());
    for (int i = 0; i < y.size(); ++i) y(i) = u_y(rng);
    Vector z(prob.num_equalities());
    for (int j = 0; j < z.size(); ++j) z(j) = u_z(rng);
    return PrimalDualPoint{std::move(x), std::move(y), std::move(z)};
  }
  throw std::runtime_error("could not sample a strictly interior point for " + prob.name());
}

namespace {

double gradient_fd_error(const Manifold& M, const std::function<double(const Point&)>& value,
                         const std::function<TangentVector(const Point&)>& grad, const Point& x,
                         std::mt19937_64& rng) {
  TangentVector v = M.random_tangent(x, rng);
  const double n = M.norm(v);
  if (n < 1e-12) return 0;
  v.coords /= n;
  const double h = 1e-6;
  const double fp = value(M.retract(x, TangentVector{h * v.coords, x}));
  const double fm = value(M.retract(x, TangentVector{-h * v.coords, x}));
  const double fd = (fp - fm) / (2 * h);
  const double an = grad(x).coords.dot(v.coords);
  return std::abs(fd - an) / std::max(1.0, std::abs(an));
}

}  // namespace

FdValidationReport fd_validate(const ConstrainedProblem& prob, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  FdValidationReport rep;
  std::uniform_real_distribution<double> u_mu(1e-3, 0.5);
  for (int s = 0; s < samples; ++s) {
    PrimalDualPoint w = random_interior_point(prob, rng);
    auto check = [&](std::function<double(const Point&)> value,
                     std::function<TangentVector(const Point&)> grad) {
      const double e = gradient_fd_error(prob.manifold(), value, grad, w.x, rng);
      rep.max_gradient_error = std::max(rep.max_gradient_error, e);
    };
    check([&](const Point& p) { return prob.objective(p); },
          [&](const Point& p) { return prob.objective_grad(p); });
    for (int i = 0; i < prob.num_inequalities(); ++i)
      check([&, i](const Point& p) { return prob.inequality(i, p); },
            [&, i](const Point& p) { return prob.inequality_grad(i, p); });
    for (int j = 0; j < prob.num_equalities(); ++j)
      check([&, j](const Point& p) { return prob.equality(j, p); },
            [&, j](const Point& p) { return prob.equality_grad(j, p); });

    rep.max_jacobian_error =
        std::max(rep.max_jacobian_error, jacobian_fd_error(prob, w, u_mu(rng)));
  }
  rep.pass = rep.max_gradient_error <= 1e-5 && rep.max_jacobian_error <= 1e-5;
  return rep;
}

}  // namespace riemip
