#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "riemip/errors.hpp"
#include "riemip/manifold.hpp"

using namespace riemip;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

std::vector<std::shared_ptr<const Manifold>> all_manifolds() {
  return {Manifold::euclidean(2), Manifold::sphere(2), Manifold::sphere(4),
          Manifold::product({Manifold::sphere(3), Manifold::euclidean(2)})};
}

}  // namespace

TEST_CASE("inner product matches the ambient dot product") {
  auto e2 = Manifold::euclidean(2);
  Point p = e2->point(vec2(3, -1));
  CHECK(e2->inner(e2->tangent(p, vec2(1, 0)), e2->tangent(p, vec2(0, 1))) == 0.0);

  auto s1 = Manifold::sphere(2);
  Point q = s1->point(vec2(1, 0));
  TangentVector u = s1->tangent(q, vec2(0, 2));
  CHECK(s1->inner(u, u) == doctest::Approx(4.0).epsilon(1e-14));

  Point r = s1->point(vec2(0, 1));
  CHECK(s1->inner(s1->tangent(r, vec2(1, 0)), s1->tangent(r, vec2(3, 0))) ==
        doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("inner rejects tangent vectors with different base points") {
  auto s1 = Manifold::sphere(2);
  Point p = s1->point(vec2(1, 0));
  Point q = s1->point(vec2(0, 1));
  TangentVector u = s1->tangent(p, vec2(0, 1));
  TangentVector v = s1->tangent(q, vec2(1, 0));
  CHECK_THROWS_AS((void)s1->inner(u, v), std::invalid_argument);
}

TEST_CASE("retraction examples") {
  auto e2 = Manifold::euclidean(2);
  Point p = e2->point(vec2(1, 2));
  Point moved = e2->retract(p, e2->tangent(p, vec2(0.5, -1)));
  CHECK(moved.coords(0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(moved.coords(1) == doctest::Approx(1.0).epsilon(1e-15));

  auto s1 = Manifold::sphere(2);
  Point q = s1->point(vec2(1, 0));
  Point fixed = s1->retract(q, s1->zero_tangent(q));
  CHECK((fixed.coords - q.coords).norm() == 0.0);

  Point diag = s1->retract(q, s1->tangent(q, vec2(0, 1)));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(diag.coords(0) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
  CHECK(diag.coords(1) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
}

TEST_CASE("sphere points are normalized on construction") {
  auto s2 = Manifold::sphere(3);
  Vector raw(3);
  raw << 3, 0, 4;
  Point p = s2->point(raw);
  CHECK(std::abs(p.coords.norm() - 1.0) <= 1e-12);
  CHECK_THROWS_AS((void)s2->point(Vector::Zero(3)), std::invalid_argument);
}

TEST_CASE("transport examples") {
  auto e2 = Manifold::euclidean(2);
  Point a = e2->point(vec2(0, 0)), b = e2->point(vec2(5, -3));
  TangentVector u = e2->tangent(a, vec2(1, 2));
  TangentVector moved = e2->transport(a, b, u);
  CHECK((moved.coords - vec2(1, 2)).norm() == 0.0);

  auto s1 = Manifold::sphere(2);
  Point p = s1->point(vec2(0, 1));
  TangentVector v = s1->tangent(p, vec2(3, 0));
  TangentVector same = s1->transport(p, p, v);
  CHECK((same.coords - vec2(3, 0)).norm() <= 1e-14);

  // Quarter turn along the great circle rotates the tangent accordingly.
  Point from = s1->point(vec2(1, 0)), to = s1->point(vec2(0, 1));
  TangentVector w = s1->transport(from, to, s1->tangent(from, vec2(0, 1)));
  CHECK((w.coords - vec2(-1, 0)).norm() <= 1e-12);
}

TEST_CASE("transport is undefined between antipodal sphere points") {
  auto s1 = Manifold::sphere(2);
  Point p = s1->point(vec2(1, 0)), q = s1->point(vec2(-1, 0));
  TangentVector u = s1->tangent(p, vec2(0, 1));
  CHECK_THROWS_AS((void)s1->transport(p, q, u), TransportUndefined);
}

TEST_CASE("transport is isometric and inverts along the return trip") {
  std::mt19937_64 rng(7);
  for (const auto& m : all_manifolds()) {
    for (int trial = 0; trial < 100; ++trial) {
      Point p = m->random_point(rng);
      Point q = m->random_point(rng);
      TangentVector u = m->random_tangent(p, rng);
      TangentVector moved = u;
      try {
        moved = m->transport(p, q, u);
      } catch (const TransportUndefined&) {
        continue;  // a factor drew a nearly antipodal pair
      }
      CHECK(std::abs(m->norm(moved) - m->norm(u)) <= 1e-12 * std::max(1.0, m->norm(u)));
      TangentVector back = m->transport(q, p, moved);
      CHECK((back.coords - u.coords).norm() <= 1e-10 * std::max(1.0, u.coords.norm()));
    }
  }
}

TEST_CASE("transport adjoint equals inverse") {
  std::mt19937_64 rng(11);
  auto s2 = Manifold::sphere(3);
  for (int trial = 0; trial < 50; ++trial) {
    Point p = s2->random_point(rng);
    Point q = s2->random_point(rng);
    if (p.coords.dot(q.coords) < -1 + 1e-6) continue;
    TangentVector u = s2->random_tangent(p, rng);
    TangentVector v = s2->random_tangent(q, rng);
    const double lhs = s2->inner(s2->transport(p, q, u), v);
    const double rhs = s2->inner(u, s2->transport(q, p, v));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
  }
}

TEST_CASE("tangent basis examples") {
  auto e2 = Manifold::euclidean(2);
  Point p = e2->point(vec2(0.3, -2));
  TangentBasis be = e2->tangent_basis(p);
  CHECK((be.columns - Matrix::Identity(2, 2)).norm() == 0.0);

  auto s1 = Manifold::sphere(2);
  TangentBasis bs = s1->tangent_basis(s1->point(vec2(1, 0)));
  REQUIRE(bs.dim() == 1);
  CHECK(bs.columns(0, 0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(bs.columns(1, 0) == doctest::Approx(1.0).epsilon(1e-15));

  auto prod = Manifold::product({Manifold::euclidean(1), Manifold::euclidean(1)});
  TangentBasis bp = prod->tangent_basis(prod->point(vec2(2, 3)));
  CHECK((bp.columns - Matrix::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("tangent basis is orthonormal, reconstructing, and deterministic") {
  std::mt19937_64 rng(3);
  for (const auto& m : all_manifolds()) {
    for (int trial = 0; trial < 20; ++trial) {
      Point p = m->random_point(rng);
      TangentBasis b = m->tangent_basis(p);
      REQUIRE(b.dim() == m->dim());
      Matrix gram = b.columns.transpose() * b.columns;
      CHECK((gram - Matrix::Identity(b.dim(), b.dim())).cwiseAbs().maxCoeff() <= 1e-12);

      TangentVector u = m->random_tangent(p, rng);
      TangentVector rec = b.vector_from(b.coords_of(u));
      CHECK((rec.coords - u.coords).norm() <= 1e-12 * std::max(1.0, u.coords.norm()));

      TangentBasis again = m->tangent_basis(p);
      CHECK((again.columns - b.columns).norm() == 0.0);
    }
  }
}

TEST_CASE("retraction is first order along shrinking steps") {
  std::mt19937_64 rng(5);
  for (const auto& m : all_manifolds()) {
    for (int trial = 0; trial < 25; ++trial) {
      Point p = m->random_point(rng);
      TangentVector u = m->random_tangent(p, rng);
      if (m->norm(u) < 1e-8) continue;
      u.coords /= m->norm(u);
      std::vector<double> ts, errs;
      for (double t : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        Point moved = m->retract(p, TangentVector{t * u.coords, p});
        const double err = ((moved.coords - p.coords) / t - u.coords).norm();
        // keep only truncation-dominated points, not division roundoff
        if (err > 1e-9) {
          ts.push_back(std::log(t));
          errs.push_back(std::log(err));
        }
      }
      if (ts.size() < 2) continue;  // Euclidean blocks are exact
      double st = 0, se = 0, stt = 0, ste = 0;
      for (std::size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        se += errs[i];
        stt += ts[i] * ts[i];
        ste += ts[i] * errs[i];
      }
      const double n = static_cast<double>(ts.size());
      const double slope = (n * ste - st * se) / (n * stt - st * st);
      CHECK(slope >= 0.9);
    }
  }
}

TEST_CASE("sphere retraction is second order: pullback Hessian matches the oracle") {
  // Quadratic test functions f(x) = x^T A x on the sphere; the Riemannian
  // Hessian has the closed form P(2 A v) - 2 (x^T A x) v.
  std::mt19937_64 rng(13);
  auto s2 = Manifold::sphere(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix A(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) A(i, j) = gauss(rng);
    A = 0.5 * (A + A.transpose());
    Point x = s2->random_point(rng);
    TangentVector v = s2->random_tangent(x, rng);
    const double nv = s2->norm(v);
    if (nv < 1e-8) continue;
    v.coords /= nv;

    auto f = [&](const Point& p) { return p.coords.dot(A * p.coords); };
    const double analytic = v.coords.dot(s2->project(x, 2.0 * A * v.coords)) - 2.0 * f(x);

    const double h = 1e-4;
    const double fp = f(s2->retract(x, TangentVector{h * v.coords, x}));
    const double fm = f(s2->retract(x, TangentVector{-h * v.coords, x}));
    const double fd = (fp - 2.0 * f(x) + fm) / (h * h);
    CHECK(fd == doctest::Approx(analytic).epsilon(1e-5));
  }
}

TEST_CASE("distance is a geodesic distance") {
  auto s1 = Manifold::sphere(2);
  Point p = s1->point(vec2(1, 0)), q = s1->point(vec2(0, 1));
  CHECK(s1->distance(p, q) == doctest::Approx(M_PI / 2).epsilon(1e-12));

  auto prod = Manifold::product({Manifold::sphere(2), Manifold::euclidean(1)});
  Vector a(3), b(3);
  a << 1, 0, 2;
  b << 0, 1, 2;
  CHECK(prod->distance(prod->point(a), prod->point(b)) ==
        doctest::Approx(M_PI / 2).epsilon(1e-12));
}

TEST_CASE("manifold descriptors compose") {
  auto prod = Manifold::product({Manifold::sphere(3), Manifold::euclidean(2)});
  CHECK(prod->dim() == 4);
  CHECK(prod->ambient_dim() == 5);
  CHECK(prod->describe() == "Product(Sphere(3),Euclidean(2))");
  CHECK(prod->same_as(*Manifold::product({Manifold::sphere(3), Manifold::euclidean(2)})));
  CHECK(!prod->same_as(*Manifold::euclidean(5)));
  CHECK_THROWS_AS((void)Manifold::euclidean(0), std::invalid_argument);
  CHECK_THROWS_AS((void)Manifold::sphere(1), std::invalid_argument);
}
