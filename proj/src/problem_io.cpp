#include "riemip/problem_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include <json.hpp>

namespace riemip {

namespace {

using nlohmann::json;

struct Term {
  double coeff = 0;
  std::vector<int> powers;
};

using Polynomial = std::vector<Term>;

double poly_value(const Polynomial& poly, const Vector& x) {
  double s = 0;
  for (const auto& t : poly) {
    double v = t.coeff;
    for (std::size_t i = 0; i < t.powers.size(); ++i)
      for (int k = 0; k < t.powers[i]; ++k) v *= x(static_cast<Eigen::Index>(i));
    s += v;
  }
  return s;
}

double monomial_partial(const Term& t, const Vector& x, int j) {
  if (t.powers[j] == 0) return 0;
  double v = t.coeff * t.powers[j];
  for (std::size_t i = 0; i < t.powers.size(); ++i) {
    int e = t.powers[i] - (static_cast<int>(i) == j ? 1 : 0);
    for (int k = 0; k < e; ++k) v *= x(static_cast<Eigen::Index>(i));
  }
  return v;
}

double monomial_second(const Term& t, const Vector& x, int j, int l) {
  int ej = t.powers[j], el = t.powers[l];
  if (j == l) {
    if (ej < 2) return 0;
    double v = t.coeff * ej * (ej - 1);
    for (std::size_t i = 0; i < t.powers.size(); ++i) {
      int e = t.powers[i] - (static_cast<int>(i) == j ? 2 : 0);
      for (int k = 0; k < e; ++k) v *= x(static_cast<Eigen::Index>(i));
    }
    return v;
  }
  if (ej < 1 || el < 1) return 0;
  double v = t.coeff * ej * el;
  for (std::size_t i = 0; i < t.powers.size(); ++i) {
    int e = t.powers[i];
    if (static_cast<int>(i) == j) e -= 1;
    if (static_cast<int>(i) == l) e -= 1;
    for (int k = 0; k < e; ++k) v *= x(static_cast<Eigen::Index>(i));
  }
  return v;
}

Vector poly_grad(const Polynomial& poly, const Vector& x) {
  Vector g = Vector::Zero(x.size());
  for (const auto& t : poly)
    for (int j = 0; j < x.size(); ++j) g(j) += monomial_partial(t, x, j);
  return g;
}

Vector poly_hess_vec(const Polynomial& poly, const Vector& x, const Vector& v) {
  Vector hv = Vector::Zero(x.size());
  for (const auto& t : poly)
    for (int j = 0; j < x.size(); ++j)
      for (int l = 0; l < x.size(); ++l) hv(j) += monomial_second(t, x, j, l) * v(l);
  return hv;
}

Polynomial parse_polynomial(const json& j, int dim, const std::string& what) {
  if (!j.is_array()) throw std::invalid_argument(what + " must be an array of terms");
  Polynomial poly;
  for (const auto& tj : j) {
    Term t;
    t.coeff = tj.at("coeff").get<double>();
    t.powers = tj.at("powers").get<std::vector<int>>();
    if (static_cast<int>(t.powers.size()) != dim)
      throw std::invalid_argument(what + ": powers length must equal the manifold dimension");
    for (int e : t.powers)
      if (e < 0) throw std::invalid_argument(what + ": powers must be nonnegative");
    poly.push_back(std::move(t));
  }
  return poly;
}

ScalarOracle poly_oracle(std::shared_ptr<const Manifold> m, Polynomial poly) {
  auto p = std::make_shared<Polynomial>(std::move(poly));
  return ambient_oracle(
      std::move(m), [p](const Vector& x) { return poly_value(*p, x); },
      [p](const Vector& x) { return poly_grad(*p, x); },
      [p](const Vector& x, const Vector& v) { return poly_hess_vec(*p, x, v); });
}

}  // namespace

LoadedProblem parse_problem_json(const std::string& text, const std::string& display_name) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("problem file is not valid JSON: " + std::string(e.what()));
  }

  const auto& mj = j.at("manifold");
  const std::string kind = mj.at("kind").get<std::string>();
  if (kind != "euclidean")
    throw std::invalid_argument("problem files support only Euclidean manifolds, got: " + kind);
  const int dim = mj.at("dim").get<int>();
  if (dim < 1) throw std::invalid_argument("manifold dim must be at least 1");
  auto manifold = Manifold::euclidean(dim);

  std::string name = j.value("name", display_name);

  ScalarOracle f = poly_oracle(manifold, parse_polynomial(j.at("objective"), dim, "objective"));
  std::vector<ScalarOracle> gs, hs;
  if (j.contains("inequalities"))
    for (const auto& gj : j.at("inequalities"))
      gs.push_back(poly_oracle(manifold, parse_polynomial(gj, dim, "inequality")));
  if (j.contains("equalities"))
    for (const auto& hj : j.at("equalities"))
      hs.push_back(poly_oracle(manifold, parse_polynomial(hj, dim, "equality")));

  ConstrainedProblem prob(name, manifold, std::move(f), std::move(gs), std::move(hs));

  std::optional<PrimalDualPoint> initial;
  if (j.contains("initial")) {
    const auto& ij = j.at("initial");
    std::vector<double> xv = ij.at("x").get<std::vector<double>>();
    if (static_cast<int>(xv.size()) != dim)
      throw std::invalid_argument("initial.x has wrong dimension");
    Vector x0 = Eigen::Map<Vector>(xv.data(), dim);
    Vector y0 = Vector::Ones(prob.num_inequalities());
    Vector z0 = Vector::Zero(prob.num_equalities());
    if (ij.contains("y")) {
      std::vector<double> yv = ij.at("y").get<std::vector<double>>();
      if (static_cast<int>(yv.size()) != prob.num_inequalities())
        throw std::invalid_argument("initial.y has wrong dimension");
      y0 = Eigen::Map<Vector>(yv.data(), static_cast<Eigen::Index>(yv.size()));
    }
    if (ij.contains("z")) {
      std::vector<double> zv = ij.at("z").get<std::vector<double>>();
      if (static_cast<int>(zv.size()) != prob.num_equalities())
        throw std::invalid_argument("initial.z has wrong dimension");
      z0 = Eigen::Map<Vector>(zv.data(), static_cast<Eigen::Index>(zv.size()));
    }
    initial = PrimalDualPoint{manifold->point(x0), std::move(y0), std::move(z0)};
  }
  return LoadedProblem{std::move(prob), std::move(initial)};
}

LoadedProblem load_problem_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open problem file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_problem_json(ss.str(), path);
}

}  // namespace riemip
