#include "sspanel/simplex.hpp"

#include <cstdlib>
#include <vector>

#include "sspanel/errors.hpp"

namespace sspanel::simplex {

namespace {
constexpr double kEnterTol = 1e-9;   // reduced cost must beat this to enter
constexpr double kPivotMin = 1e-11;  // smallest pivot magnitude accepted
}  // namespace

FeasibilityResult phase1_feasible(const Eigen::MatrixXd& A,
                                  const Eigen::VectorXd& b, double tol) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (b.size() != m) {
    throw ConfigError("phase1_feasible: right-hand side length must match rows");
  }
  if (m == 0) {
    FeasibilityResult res;
    res.feasible = true;
    res.x = Eigen::VectorXd::Zero(n);
    return res;
  }

  // Tableau [A | I | b] with the right-hand side made nonnegative row by
  // row; the identity block holds the artificial variables, which form the
  // starting basis.
  Eigen::MatrixXd T(m, n + m + 1);
  T.leftCols(n) = A;
  T.block(0, n, m, m) = Eigen::MatrixXd::Identity(m, m);
  T.col(n + m) = b;
  for (int i = 0; i < m; ++i) {
    if (T(i, n + m) < 0.0) T.row(i) = -T.row(i);
  }
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  // Generous safeguard; Bland's rule terminates long before this.
  const long long max_iters = 1000LL * (n + m) + 100000LL;
  FeasibilityResult res;

  std::vector<char> is_basic(n + m, 0);
  for (int idx : basis) is_basic[idx] = 1;

  for (;;) {
    // Phase-1 costs are 1 on artificials and 0 elsewhere, so the reduced
    // cost of column j is c_j minus the column's total over rows whose
    // basic variable is artificial.
    int enter = -1;
    for (int j = 0; j < n + m; ++j) {
      if (is_basic[j]) continue;
      double rc = (j >= n) ? 1.0 : 0.0;
      for (int i = 0; i < m; ++i) {
        if (basis[i] >= n) rc -= T(i, j);
      }
      if (rc < -kEnterTol) {
        enter = j;  // Bland: smallest eligible index
        break;
      }
    }
    if (enter < 0) break;

    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      const double a = T(i, enter);
      if (a <= kPivotMin) continue;
      const double ratio = T(i, n + m) / a;
      if (leave < 0 || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) {
      // The phase-1 objective is bounded below by zero, so an unbounded
      // ray cannot occur; reaching this means the tableau degraded.
      throw InternalError("phase1_feasible: no admissible pivot row");
    }

    const double piv = T(leave, enter);
    T.row(leave) /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      const double f = T(i, enter);
      if (f != 0.0) T.row(i) -= f * T.row(leave);
    }
    is_basic[basis[leave]] = 0;
    is_basic[enter] = 1;
    basis[leave] = enter;
    if (++res.iterations > max_iters) {
      throw InternalError("phase1_feasible: iteration safeguard exceeded");
    }
  }

  res.x = Eigen::VectorXd::Zero(n);
  res.artificial_sum = 0.0;
  for (int i = 0; i < m; ++i) {
    const double v = T(i, n + m);
    if (basis[i] < n) {
      res.x[basis[i]] = v;
    } else {
      res.artificial_sum += std::abs(v);
    }
  }
  res.feasible = res.artificial_sum <= tol;
  return res;
}

}  // namespace sspanel::simplex
