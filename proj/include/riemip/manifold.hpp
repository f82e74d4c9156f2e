#pragma once

#include <Eigen/Core>

#include <memory>
#include <random>
#include <string>
#include <vector>

namespace riemip {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class Manifold;

/// A point on a manifold, stored in ambient coordinates. Sphere blocks are
/// renormalized on construction so that the unit-norm invariant holds to
/// machine precision.
struct Point {
  Vector coords;
  std::shared_ptr<const Manifold> manifold;

  const Manifold& M() const { return *manifold; }
};

/// A tangent vector at `base`, stored in ambient coordinates. For sphere
/// blocks the coordinates are orthogonal to the base point.
struct TangentVector {
  Vector coords;
  Point base;
};

/// An orthonormal basis of the tangent space at `base`: an ambient_dim x d
/// matrix whose columns are orthonormal under the Riemannian metric. The sign
/// of each column is fixed (first coefficient above threshold is positive) so
/// that bases, and hence all matrix assemblies built on them, are
/// reproducible.
struct TangentBasis {
  Point base;
  Matrix columns;

  int dim() const { return static_cast<int>(columns.cols()); }
  /// Coefficients of a tangent vector in this basis.
  Vector coords_of(const TangentVector& v) const { return columns.transpose() * v.coords; }
  /// Tangent vector with the given basis coefficients.
  TangentVector vector_from(const Vector& coeffs) const {
    return TangentVector{columns * coeffs, base};
  }
};

/// Geometry kernel for the supported manifolds: Euclidean space R^n, the unit
/// sphere S^{n-1} embedded in R^n, and finite products of those. The metric is
/// the one induced by the ambient Euclidean inner product in all cases, and
/// tangent vectors are kept in ambient coordinates.
///
/// Instances are immutable and only created through the static factories, so
/// they can be shared freely across threads.
class Manifold : public std::enable_shared_from_this<Manifold> {
 public:
  enum class Kind { Euclidean, Sphere, Product };

  static std::shared_ptr<const Manifold> euclidean(int dim);
  static std::shared_ptr<const Manifold> sphere(int ambient_dim);
  static std::shared_ptr<const Manifold> product(std::vector<std::shared_ptr<const Manifold>> factors);

  Kind kind() const { return kind_; }
  /// Intrinsic dimension d.
  int dim() const { return dim_; }
  int ambient_dim() const { return ambient_dim_; }
  const std::vector<std::shared_ptr<const Manifold>>& factors() const { return factors_; }

  bool same_as(const Manifold& other) const;
  std::string describe() const;

  /// Validates and canonicalizes ambient coordinates into a point
  /// (sphere blocks are normalized to unit length).
  Point point(Vector coords) const;

  /// Orthogonal projection of an ambient vector onto the tangent space at p.
  Vector project(const Point& p, const Vector& ambient) const;

  /// Tangent vector at p obtained by projecting an ambient vector.
  TangentVector tangent(const Point& p, const Vector& ambient) const;

  TangentVector zero_tangent(const Point& p) const;

  /// Riemannian inner product of two tangent vectors based at the same point.
  double inner(const TangentVector& u, const TangentVector& v) const;

  double norm(const TangentVector& u) const;

  /// Second-order retraction: vector addition on Euclidean space, metric
  /// projection on the sphere, blockwise on products.
  Point retract(const Point& p, const TangentVector& u) const;

  /// Parallel transport of u from T_from to T_to along the unique minimizing
  /// geodesic. Throws TransportUndefined for antipodal sphere blocks.
  TangentVector transport(const Point& from, const Point& to, const TangentVector& u) const;

  /// Deterministic orthonormal tangent basis at p.
  TangentBasis tangent_basis(const Point& p) const;

  /// Geodesic distance.
  double distance(const Point& p, const Point& q) const;

  Point random_point(std::mt19937_64& rng) const;
  TangentVector random_tangent(const Point& p, std::mt19937_64& rng) const;

  /// Riemannian gradient from the gradient of an ambient extension.
  Vector gradient_from_ambient(const Point& p, const Vector& ambient_grad) const;

  /// Riemannian Hessian-vector product from ambient data: `ambient_hv` is the
  /// ambient Hessian applied to the tangent vector v, `ambient_grad` the
  /// ambient gradient. Adds the curvature (Weingarten) correction for sphere
  /// blocks.
  Vector hessian_from_ambient(const Point& p, const Vector& ambient_grad, const Vector& ambient_hv,
                              const Vector& v) const;

 private:
  Manifold() = default;

  Kind kind_ = Kind::Euclidean;
  int dim_ = 0;
  int ambient_dim_ = 0;
  std::vector<std::shared_ptr<const Manifold>> factors_;  // Product only
  std::vector<int> offsets_;                              // ambient offsets of factors
};

/// Throws std::invalid_argument unless u and v are based at (numerically) the
/// same point of the same manifold.
void require_same_base(const TangentVector& u, const TangentVector& v);
void require_base(const Point& p, const TangentVector& u);

}  // namespace riemip
