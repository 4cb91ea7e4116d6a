#pragma once

#include <cstdint>
#include <vector>

#include "sspanel/dgp.hpp"
#include "sspanel/maxscore.hpp"

namespace sspanel::sstest {

/// Tie rule for rows that sit exactly on a candidate boundary hyperplane
/// inside the centred bootstrap statistic.
enum class BoundaryRule {
  /// Both the resample average and its centering term use the inclusive
  /// indicator 1{w'q >= 0}, matching the sample score everywhere. A row
  /// drawn m times then contributes (m - 1) times its outcome change on
  /// the boundary, the same as off it.
  kInclusive,
  /// The resample average uses the strict indicator 1{w'q > 0} while the
  /// centering term keeps 1{w'q >= 0}; a boundary row then contributes
  /// its negated outcome change regardless of how often it was drawn.
  kStrictBootstrap,
};

/// Configuration shared by the one-sided bootstrap tests.
struct TestConfig {
  /// Nominal level of each one-sided test, strictly inside (0, 1).
  double alpha = 0.05;
  /// Number of bootstrap replicates. Must satisfy alpha * b_reps >= 1 so
  /// the draws can resolve the requested upper quantile.
  int b_reps = 199;
  /// Seed for the resampling streams. Replicate r draws its row indices
  /// from a counter-based stream keyed by (seed, r), so every draw is
  /// reproducible in isolation and the order of evaluation is free.
  std::uint64_t seed = 0;
  /// Optimizer used for the observed statistic and for every bootstrap
  /// replicate. The exact method covers samples with at most three
  /// columns; the search methods give deterministic lower-bound optima
  /// beyond that range.
  maxscore::MaxOptions optimizer{};
  /// Boundary handling inside the bootstrap statistic.
  BoundaryRule boundary = BoundaryRule::kInclusive;
};

/// Outcome of a one-sided test.
struct TestReport {
  /// Scaled statistic: sqrt(n) times the supremum (upper test) or the
  /// infimum (lower test) of the sample score over directions.
  double t_n = 0.0;
  /// Bootstrap critical value: the ceil((1 - alpha) * b_reps) ascending
  /// order statistic of the draws.
  double c_crit = 0.0;
  /// Bootstrap draws sqrt(n) * sup_q (resampled score - sample score),
  /// stored in replicate order.
  std::vector<double> boot_draws;
  /// Upper test: t_n > c_crit. Lower test: t_n < -c_crit.
  bool reject = false;
  /// Number of sample rows used.
  long long n = 0;
};

/// Upper test of H0: sup_q rho(q) <= 0. The statistic is sqrt(n) times
/// the exact supremum of the sample score; the critical value is the
/// ceil((1 - alpha) * b_reps) order statistic of the centred bootstrap
/// supremum draws, and the test rejects when the statistic exceeds it.
/// Rejection indicates a direction whose sign cell carries strictly
/// positive expected outcome change.
/// Throws ConfigError for an invalid configuration and
/// DegenerateDataError for fewer than two rows or an outcome-change
/// vector that is identically zero.
TestReport test_upper(const dgp::PanelSample& sample, const TestConfig& cfg);

/// Lower test of H0: inf_q rho(q) >= 0, the mirror image of test_upper.
/// The statistic is sqrt(n) times the exact infimum of the sample score;
/// the critical value is built from the same centred supremum draws as
/// the upper test, and the test rejects when the statistic falls below
/// the negated critical value. Same error conditions as test_upper.
TestReport test_lower(const dgp::PanelSample& sample, const TestConfig& cfg);

/// Verdict of the combined check.
enum class CheckVerdict {
  kSaturationSupported,  ///< both one-sided tests reject
  kInconclusive,         ///< at least one side fails to reject
};

/// Result of running both one-sided tests on one sample.
struct CheckResult {
  CheckVerdict verdict = CheckVerdict::kInconclusive;
  TestReport upper;
  TestReport lower;
};

/// Runs both one-sided tests on the same sample and configuration,
/// sharing a single set of bootstrap draws (the two standalone tests
/// would generate identical draws anyway; the shared run just computes
/// them once). Saturation is supported only when both sides reject.
/// Each side runs at level cfg.alpha with no multiplicity adjustment:
/// the verdict is a confirmatory conjunction, and both reports are
/// returned so callers can apply their own correction if they need one.
CheckResult sign_saturation_check(const dgp::PanelSample& sample,
                                  const TestConfig& cfg);

}  // namespace sspanel::sstest
