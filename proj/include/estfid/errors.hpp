#pragma once

#include <stdexcept>
#include <string>

namespace estfid {

/// Requested object (lattice, dense spectrum, ...) exceeds a configured size cap.
class capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative eigensolver exhausted its iteration budget before reaching the
/// requested residual; carries the best residual seen.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

/// Empty or mismatched operand dimensions.
class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The polynomial test vector vanishes identically on the requested lattice.
class zero_test_vector_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation only defined for d in {2,3} (segment / equilateral-triangle meshes).
class unsupported_dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Mass matrix (or other pencil right-hand side) is not positive definite.
class not_positive_definite_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mesh simplex has (numerically) zero volume.
class degenerate_simplex_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Least-squares fit is ill-conditioned (sample points too clustered).
class ill_conditioned_fit_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace estfid
