#pragma once

#include <stdexcept>
#include <string>

namespace riemip {

/// Thrown by the Newton machinery when the estimated condition number of the
/// barrier KKT Jacobian exceeds the configured cap. Signals a regularity
/// failure at the current iterate rather than a numerical accident, so it is
/// surfaced instead of regularized away.
class NearSingularJacobian : public std::runtime_error {
 public:
  explicit NearSingularJacobian(double condition)
      : std::runtime_error("barrier KKT Jacobian is near singular (condition estimate " +
                           std::to_string(condition) + ")"),
        condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

/// Thrown when an inner iteration cannot make progress (no acceptable step
/// length, vanishing trust region, or iteration cap).
class InnerStalled : public std::runtime_error {
 public:
  explicit InnerStalled(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown by operations that require strictly positive inequality values,
/// e.g. anything involving S(x)^{-1}.
class NonpositiveConstraint : public std::runtime_error {
 public:
  explicit NonpositiveConstraint(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown by the Newton/TRS equivalence check when the trust-region step is
/// not strictly interior.
class NotInterior : public std::runtime_error {
 public:
  explicit NotInterior(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown by parallel transport between antipodal sphere points, where no
/// unique minimizing geodesic exists.
class TransportUndefined : public std::domain_error {
 public:
  explicit TransportUndefined(const std::string& what) : std::domain_error(what) {}
};

}  // namespace riemip
