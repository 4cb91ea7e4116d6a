#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace sspanel::maxscore {

/// Optimization strategy for the score objective.
enum class Method {
  kExactArrangement,  // enumerate sign cells; exact global optimum (k <= 3)
  kRandomSearch,      // best over a deterministic stream of random directions
  kGridSearch,        // best over a deterministic direction lattice
};

struct MaxOptions {
  Method method = Method::kExactArrangement;
  /// Row cap for the three-column exact enumeration, whose candidate
  /// count grows quadratically (with a cubic work bound). Configurable.
  long long k3_row_cap = 2000;
  /// Direction stream seed (random search only).
  std::uint64_t seed = 0;
  /// Number of sampled directions (search methods only).
  long long iterations = 100000;
};

/// Result of score sup/inf. `value` is attained: re-evaluating the score
/// at `argq` reproduces it (the indicator signs at `argq` are decided by
/// exact predicates, and boundary-achieving representatives are scaled by
/// powers of two so their zero inner products survive in floating point).
struct MaxScoreResult {
  double value = 0.0;
  /// Exact integer numerator: value = num / n.
  long long num = 0;
  /// Representative direction of an optimal cell, scaled to near-unit
  /// norm (within a factor sqrt(2), plus a ~1% slack for perturbed
  /// representatives). Among tied cells the candidate with
  /// lexicographically smallest representative is returned, so results
  /// are scheduling-independent.
  Eigen::VectorXd argq;
  Method method = Method::kExactArrangement;
  /// Number of candidate cells evaluated.
  long long cells_visited = 0;
  /// Sign of w_i' argq on the chosen cell, one entry per input row.
  std::vector<int> pattern;
};

/// Sample score of direction q: (1/n) * sum_i d_i * 1{w_i' q >= 0}, with
/// the tie 1{0 >= 0} = 1 counting. The denominator is the full n
/// including d_i = 0 rows. Indicator signs are exact for k <= 3;
/// compensated floating-point dots decide them for larger k.
/// Throws DomainError for q = 0, DegenerateDataError for an empty sample,
/// ConfigError for d entries outside {-1, 0, 1} or size mismatches.
double rho_hat(const Eigen::MatrixXd& W, const Eigen::VectorXi& d,
               const Eigen::VectorXd& q);

/// Global sup of rho_hat over nonzero directions. Exact for k <= 3 under
/// kExactArrangement; the search methods give a lower bound for the sup.
/// Throws CapacityError when exact enumeration is requested beyond its
/// range (k > 3, or k = 3 with more than k3_row_cap effective rows).
MaxScoreResult maximize(const Eigen::MatrixXd& W, const Eigen::VectorXi& d,
                        const MaxOptions& opts = {});

/// Global inf of rho_hat over nonzero directions: maximize with d negated
/// and the value's sign flipped.
MaxScoreResult minimize(const Eigen::MatrixXd& W, const Eigen::VectorXi& d,
                        const MaxOptions& opts = {});

/// Exact cell optimizer for integer-weighted sign objectives:
///   base + sum_i [ plus_w[i] * 1{w_i' q > 0} + zero_w[i] * 1{w_i' q = 0} ]
/// over nonzero q. This is the engine under maximize(); the bootstrap
/// statistic drives it directly with pooled resample weights.
struct CellResult {
  long long best_num = 0;
  Eigen::VectorXd argq;
  std::vector<int> pattern;
  long long cells_visited = 0;
};

CellResult maximize_cells(const Eigen::MatrixXd& rows,
                          const std::vector<long long>& plus_w,
                          const std::vector<long long>& zero_w, long long base,
                          long long k3_row_cap = 2000);

/// Weighted cell optimum under the method selected in `opts`: exact
/// enumeration for kExactArrangement (1 to 3 columns), otherwise the best
/// value over the method's deterministic direction stream — a lower bound
/// for the true optimum with the same reproducibility guarantees as
/// maximize(). Throws CapacityError when the exact method is requested
/// beyond its range and ConfigError for mismatched weight vectors.
CellResult optimize_cells(const Eigen::MatrixXd& rows,
                          const std::vector<long long>& plus_w,
                          const std::vector<long long>& zero_w, long long base,
                          const MaxOptions& opts);

}  // namespace sspanel::maxscore
