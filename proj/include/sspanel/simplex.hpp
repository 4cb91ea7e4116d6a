#pragma once

#include <Eigen/Dense>

namespace sspanel::simplex {

struct FeasibilityResult {
  /// True when the artificial objective was driven to `tol` or below.
  bool feasible = false;
  /// Candidate solution (size = columns of A); meaningful when feasible.
  Eigen::VectorXd x;
  /// Sum of artificial variables at termination (the phase-1 objective).
  double artificial_sum = 0.0;
  int iterations = 0;
};

/// Searches for x >= 0 with A x = b by a dense phase-1 simplex using
/// Bland's smallest-index rule for both the entering and the leaving
/// variable, which rules out cycling. Throws ConfigError on shape
/// mismatch and InternalError if the iteration safeguard trips.
FeasibilityResult phase1_feasible(const Eigen::MatrixXd& A,
                                  const Eigen::VectorXd& b,
                                  double tol = 1e-9);

}  // namespace sspanel::simplex
