#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

#include "sspanel/dgp.hpp"
#include "sspanel/sstest.hpp"

namespace sspanel::mc {

/// One simulate-and-test experiment repeated over independent trials.
struct StudyConfig {
  dgp::PanelDesign design{};
  /// Rows per simulated sample.
  long long n = 500;
  int trials = 100;
  /// Test settings shared by every trial. The seed field is ignored: each
  /// trial derives its own simulation and resampling seeds from the
  /// study's master seed and the trial index, so trials are independent
  /// and any subset can be reproduced in isolation.
  sstest::TestConfig test{};
  std::uint64_t seed = 0;
  /// Upper bound on worker threads; results are identical for any value.
  int threads = 1;
};

/// Outcome of a single trial.
struct TrialRow {
  int trial = 0;
  double t_upper = 0.0;
  double c_upper = 0.0;
  bool reject_upper = false;
  double t_lower = 0.0;
  double c_lower = 0.0;
  bool reject_lower = false;
  /// Both one-sided tests rejected.
  bool saturation = false;
  /// Sample score of the direction opposite the design's beta, the
  /// anchor statistic whose across-trial variance has a known limit.
  double rho_at_minus_beta = 0.0;
  /// False when the trial was skipped because the study was stopped.
  bool done = false;
};

/// Aggregates over the completed trials.
struct StudySummary {
  int trials_requested = 0;
  int trials_done = 0;
  long long n = 0;
  double alpha = 0.0;
  int b_reps = 0;
  double upper_reject_rate = 0.0;
  double upper_reject_se = 0.0;
  double lower_reject_rate = 0.0;
  double lower_reject_se = 0.0;
  double saturation_rate = 0.0;
  double saturation_se = 0.0;
  double mean_rho_at_minus_beta = 0.0;
  /// Sample variance across trials of sqrt(n) * rho_at_minus_beta
  /// (zero when fewer than two trials completed).
  double scaled_var_rho_at_minus_beta = 0.0;
  /// True when the study stopped before finishing every requested trial.
  bool truncated = false;
};

struct StudyResult {
  StudySummary summary;
  /// One row per requested trial, in trial order; rows with done = false
  /// were skipped and carry default values.
  std::vector<TrialRow> rows;
};

/// Runs the study: for each trial, simulates a fresh sample with a seed
/// derived from (seed, trial), runs both one-sided tests with a second
/// derived seed, and records the outcomes. Trials run in parallel over at
/// most cfg.threads workers; each writes only its own row, so the result
/// is byte-identical for every thread count. When `stop` is non-null and
/// becomes true, workers skip their remaining trials and the summary over
/// the completed rows is flagged truncated.
/// Throws ConfigError for trials < 1, threads < 1, or an invalid design;
/// errors from simulation or testing propagate.
StudyResult run_study(const StudyConfig& cfg,
                      const std::atomic<bool>* stop = nullptr);

/// Single-row CSV rendering of the summary (header + one data row,
/// 17-significant-digit reals, booleans as 0/1).
std::string summary_csv(const StudySummary& s);

}  // namespace sspanel::mc
