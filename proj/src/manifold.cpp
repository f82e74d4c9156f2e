#include "riemip/manifold.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "riemip/errors.hpp"

namespace riemip {

namespace {

constexpr double kBaseMatchTol = 1e-10;
constexpr double kSignThreshold = 1e-8;

void check_ambient(const Manifold& m, const Vector& v, const char* what) {
  if (v.size() != m.ambient_dim())
    throw std::invalid_argument(std::string(what) + " has wrong ambient dimension for " +
                                m.describe());
}

}  // namespace

void require_base(const Point& p, const TangentVector& u) {
  if (!p.M().same_as(u.base.M()) ||
      (p.coords - u.base.coords).norm() > kBaseMatchTol * std::max(1.0, p.coords.norm()))
    throw std::invalid_argument("tangent vector base point mismatch");
}

void require_same_base(const TangentVector& u, const TangentVector& v) {
  require_base(u.base, v);
}

std::shared_ptr<const Manifold> Manifold::euclidean(int dim) {
  if (dim < 1) throw std::invalid_argument("Euclidean manifold needs dim >= 1");
  auto m = std::shared_ptr<Manifold>(new Manifold());
  m->kind_ = Kind::Euclidean;
  m->dim_ = dim;
  m->ambient_dim_ = dim;
  return m;
}

std::shared_ptr<const Manifold> Manifold::sphere(int ambient_dim) {
  if (ambient_dim < 2) throw std::invalid_argument("Sphere manifold needs ambient dim >= 2");
  auto m = std::shared_ptr<Manifold>(new Manifold());
  m->kind_ = Kind::Sphere;
  m->dim_ = ambient_dim - 1;
  m->ambient_dim_ = ambient_dim;
  return m;
}

std::shared_ptr<const Manifold> Manifold::product(
    std::vector<std::shared_ptr<const Manifold>> factors) {
  if (factors.empty()) throw std::invalid_argument("Product manifold needs at least one factor");
  auto m = std::shared_ptr<Manifold>(new Manifold());
  m->kind_ = Kind::Product;
  m->dim_ = 0;
  m->ambient_dim_ = 0;
  for (const auto& f : factors) {
    m->offsets_.push_back(m->ambient_dim_);
    m->dim_ += f->dim();
    m->ambient_dim_ += f->ambient_dim();
  }
  m->factors_ = std::move(factors);
  return m;
}

bool Manifold::same_as(const Manifold& other) const {
  if (kind_ != other.kind_ || dim_ != other.dim_ || ambient_dim_ != other.ambient_dim_)
    return false;
  if (kind_ == Kind::Product) {
    if (factors_.size() != other.factors_.size()) return false;
    for (std::size_t i = 0; i < factors_.size(); ++i)
      if (!factors_[i]->same_as(*other.factors_[i])) return false;
  }
  return true;
}

std::string Manifold::describe() const {
  switch (kind_) {
    case Kind::Euclidean:
      return "Euclidean(" + std::to_string(ambient_dim_) + ")";
    case Kind::Sphere:
      return "Sphere(" + std::to_string(ambient_dim_) + ")";
    case Kind::Product: {
      std::string s = "Product(";
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) s += ",";
        s += factors_[i]->describe();
      }
      return s + ")";
    }
  }
  return "?";
}

Point Manifold::point(Vector coords) const {
  check_ambient(*this, coords, "point");
  switch (kind_) {
    case Kind::Euclidean:
      break;
    case Kind::Sphere: {
      const double n = coords.norm();
      if (n < 1e-14) throw std::invalid_argument("cannot normalize a zero vector onto the sphere");
      coords /= n;
      break;
    }
    case Kind::Product: {
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        const auto& f = *factors_[i];
        Point sub = f.point(coords.segment(offsets_[i], f.ambient_dim()));
        coords.segment(offsets_[i], f.ambient_dim()) = sub.coords;
      }
      break;
    }
  }
  return Point{std::move(coords), shared_from_this()};
}

Vector Manifold::project(const Point& p, const Vector& ambient) const {
  check_ambient(*this, ambient, "ambient vector");
  switch (kind_) {
    case Kind::Euclidean:
      return ambient;
    case Kind::Sphere:
      return ambient - p.coords.dot(ambient) * p.coords;
    case Kind::Product: {
      Vector out(ambient_dim_);
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        const auto& f = *factors_[i];
        Point sub{p.coords.segment(offsets_[i], f.ambient_dim()), factors_[i]};
        out.segment(offsets_[i], f.ambient_dim()) =
            f.project(sub, ambient.segment(offsets_[i], f.ambient_dim()));
      }
      return out;
    }
  }
  return ambient;
}

TangentVector Manifold::tangent(const Point& p, const Vector& ambient) const {
  return TangentVector{project(p, ambient), p};
}

TangentVector Manifold::zero_tangent(const Point& p) const {
  return TangentVector{Vector::Zero(ambient_dim_), p};
}

double Manifold::inner(const TangentVector& u, const TangentVector& v) const {
  require_same_base(u, v);
  // Induced metric: the ambient dot product for every supported manifold.
  return u.coords.dot(v.coords);
}

double Manifold::norm(const TangentVector& u) const { return u.coords.norm(); }

Point Manifold::retract(const Point& p, const TangentVector& u) const {
  require_base(p, u);
  switch (kind_) {
    case Kind::Euclidean:
      return Point{p.coords + u.coords, p.manifold};
    case Kind::Sphere: {
      Vector moved = p.coords + u.coords;
      // u is tangent, so ||p + u|| >= 1 and the projection is well defined.
      return Point{moved / moved.norm(), p.manifold};
    }
    case Kind::Product: {
      Vector out(ambient_dim_);
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        const auto& f = *factors_[i];
        Point sub{p.coords.segment(offsets_[i], f.ambient_dim()), factors_[i]};
        TangentVector subu{u.coords.segment(offsets_[i], f.ambient_dim()), sub};
        out.segment(offsets_[i], f.ambient_dim()) = f.retract(sub, subu).coords;
      }
      return Point{std::move(out), p.manifold};
    }
  }
  return p;
}

TangentVector Manifold::transport(const Point& from, const Point& to, const TangentVector& u) const {
  require_base(from, u);
  if (!to.M().same_as(*this)) throw std::invalid_argument("transport target on different manifold");
  switch (kind_) {
    case Kind::Euclidean:
      return TangentVector{u.coords, to};
    case Kind::Sphere: {
      const double c = from.coords.dot(to.coords);
      if (c < -1.0 + 1e-12)
        throw TransportUndefined("no unique minimizing geodesic between antipodal sphere points");
      Vector w = to.coords - c * from.coords;
      const double wn = w.norm();
      if (wn < 1e-14) return TangentVector{u.coords, to};  // same point
      w /= wn;
      const double theta = std::atan2(wn, c);
      const double a = w.dot(u.coords);
      // Rotate the in-plane component by theta, keep the orthogonal part.
      Vector out = u.coords + a * ((std::cos(theta) - 1.0) * w - std::sin(theta) * from.coords);
      return TangentVector{std::move(out), to};
    }
    case Kind::Product: {
      Vector out(ambient_dim_);
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        const auto& f = *factors_[i];
        Point sub_from{from.coords.segment(offsets_[i], f.ambient_dim()), factors_[i]};
        Point sub_to{to.coords.segment(offsets_[i], f.ambient_dim()), factors_[i]};
        TangentVector subu{u.coords.segment(offsets_[i], f.ambient_dim()), sub_from};
        out.segment(offsets_[i], f.ambient_dim()) = f.transport(sub_from, sub_to, subu).coords;
      }
      return TangentVector{std::move(out), to};
    }
  }
  return TangentVector{u.coords, to};
}

namespace {

/// Fixes the sign of each column so the first coefficient with magnitude above
/// the threshold is positive.
void fix_column_signs(Matrix& cols) {
  for (Eigen::Index j = 0; j < cols.cols(); ++j) {
    for (Eigen::Index i = 0; i < cols.rows(); ++i) {
      if (std::abs(cols(i, j)) > kSignThreshold) {
        if (cols(i, j) < 0) cols.col(j) = -cols.col(j);
        break;
      }
    }
  }
}

}  // namespace

TangentBasis Manifold::tangent_basis(const Point& p) const {
  Matrix cols(ambient_dim_, dim_);
  switch (kind_) {
    case Kind::Euclidean:
      cols = Matrix::Identity(ambient_dim_, dim_);
      break;
    case Kind::Sphere: {
      // Gram-Schmidt of the projected standard basis against the normal
      // direction p; deterministic because the candidate order is fixed.
      int got = 0;
      for (int e = 0; e < ambient_dim_ && got < dim_; ++e) {
        Vector v = Vector::Zero(ambient_dim_);
        v(e) = 1.0;
        v = project(p, v);
        for (int j = 0; j < got; ++j) v -= cols.col(j).dot(v) * cols.col(j);
        // second pass for numerical orthogonality
        for (int j = 0; j < got; ++j) v -= cols.col(j).dot(v) * cols.col(j);
        const double n = v.norm();
        if (n > 1e-7) {
          cols.col(got++) = v / n;
        }
      }
      if (got != dim_) throw std::runtime_error("tangent basis construction failed on sphere");
      break;
    }
    case Kind::Product: {
      cols.setZero();
      int col = 0;
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        const auto& f = *factors_[i];
        Point sub{p.coords.segment(offsets_[i], f.ambient_dim()), factors_[i]};
        TangentBasis sb = f.tangent_basis(sub);
        cols.block(offsets_[i], col, f.ambient_dim(), f.dim()) = sb.columns;
        col += f.dim();
      }
      break;
    }
  }
  fix_column_signs(cols);
  return TangentBasis{p, std::move(cols)};
}

double Manifold::distance(const Point& p, const Point& q) const {
  switch (kind_) {
    case Kind::Euclidean:
      return (p.coords - q.coords).norm();
    case Kind::Sphere: {
      const double chord = (p.coords - q.coords).norm();
      return 2.0 * std::asin(std::min(1.0, 0.5 * chord));
    }
    case Kind::Product: {
      double sq = 0.0;
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        const auto& f = *factors_[i];
        Point sp{p.coords.segment(offsets_[i], f.ambient_dim()), factors_[i]};
        Point sq_{q.coords.segment(offsets_[i], f.ambient_dim()), factors_[i]};
        const double d = f.distance(sp, sq_);
        sq += d * d;
      }
      return std::sqrt(sq);
    }
  }
  return 0.0;
}

Point Manifold::random_point(std::mt19937_64& rng) const {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(ambient_dim_);
  for (int i = 0; i < ambient_dim_; ++i) v(i) = gauss(rng);
  if (kind_ == Kind::Sphere && v.norm() < 1e-8) v(0) = 1.0;
  return point(std::move(v));
}

TangentVector Manifold::random_tangent(const Point& p, std::mt19937_64& rng) const {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(ambient_dim_);
  for (int i = 0; i < ambient_dim_; ++i) v(i) = gauss(rng);
  return tangent(p, v);
}

Vector Manifold::gradient_from_ambient(const Point& p, const Vector& ambient_grad) const {
  return project(p, ambient_grad);
}

Vector Manifold::hessian_from_ambient(const Point& p, const Vector& ambient_grad,
                                      const Vector& ambient_hv, const Vector& v) const {
  switch (kind_) {
    case Kind::Euclidean:
      return ambient_hv;
    case Kind::Sphere:
      // Projected ambient Hessian plus the Weingarten correction of the
      // embedded sphere: Hess f[v] = P(D^2 f v) - <x, grad f> v.
      return project(p, ambient_hv) - p.coords.dot(ambient_grad) * v;
    case Kind::Product: {
      Vector out(ambient_dim_);
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        const auto& f = *factors_[i];
        const int off = offsets_[i];
        const int n = f.ambient_dim();
        Point sub{p.coords.segment(off, n), factors_[i]};
        out.segment(off, n) = f.hessian_from_ambient(sub, ambient_grad.segment(off, n),
                                                     ambient_hv.segment(off, n), v.segment(off, n));
      }
      return out;
    }
  }
  return ambient_hv;
}

}  // namespace riemip
