#pragma once

#include <stdexcept>
#include <string>

namespace scswalk {

/// Bad input: wrong dimensions, out-of-range parameters, broken invariants.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numeric check exceeded its tolerance (e.g. a matrix that should be
/// Hermitian is not).
class ToleranceError : public ValidationError {
 public:
  ToleranceError(const std::string& what, double violation, double tolerance)
      : ValidationError(what + ": violation " + std::to_string(violation) +
                        " exceeds tolerance " + std::to_string(tolerance)),
        violation_(violation),
        tolerance_(tolerance) {}

  double violation() const noexcept { return violation_; }
  double tolerance() const noexcept { return tolerance_; }

 private:
  double violation_;
  double tolerance_;
};

/// Degenerate band point where the Bloch vector is undefined.
class SingularPointError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Winding number cannot be resolved on the given k-grid.
class AmbiguousWindingError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace scswalk
