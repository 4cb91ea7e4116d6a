#include "sspanel/mc_study.hpp"

#include <cmath>
#include <sstream>

#include "sspanel/errors.hpp"
#include "sspanel/maxscore.hpp"
#include "sspanel/parallel.hpp"
#include "sspanel/records.hpp"
#include "sspanel/rng.hpp"

namespace sspanel::mc {

namespace {

void validate_config(const StudyConfig& cfg) {
  if (cfg.trials < 1) throw ConfigError("trial count must be >= 1");
  if (cfg.threads < 1) throw ConfigError("thread count must be >= 1");
  if (cfg.design.beta.size() == 0 ||
      cfg.design.beta.cwiseAbs().maxCoeff() == 0.0) {
    throw ConfigError("study design needs a nonzero beta");
  }
}

double rate_se(double p, int m) {
  return m > 0 ? std::sqrt(std::max(0.0, p * (1.0 - p)) /
                           static_cast<double>(m))
               : 0.0;
}

}  // namespace

StudyResult run_study(const StudyConfig& cfg,
                      const std::atomic<bool>* stop) {
  validate_config(cfg);

  StudyResult out;
  out.rows.assign(static_cast<std::size_t>(cfg.trials), TrialRow{});
  const Eigen::VectorXd minus_beta = -cfg.design.beta;

  parallel_for(cfg.trials, cfg.threads, [&](long long trial) {
    if (stop != nullptr && stop->load(std::memory_order_relaxed)) return;
    TrialRow& row = out.rows[static_cast<std::size_t>(trial)];
    row.trial = static_cast<int>(trial);

    const std::uint64_t sim_seed = rng::derive_seed(
        cfg.seed, static_cast<std::uint64_t>(trial), rng::kTagTrialSimSeed);
    const std::uint64_t test_seed = rng::derive_seed(
        cfg.seed, static_cast<std::uint64_t>(trial), rng::kTagTrialTestSeed);

    const dgp::PanelSample sample = dgp::simulate(cfg.design, cfg.n, sim_seed);
    sstest::TestConfig tc = cfg.test;
    tc.seed = test_seed;
    const sstest::CheckResult check = sstest::sign_saturation_check(sample, tc);

    row.t_upper = check.upper.t_n;
    row.c_upper = check.upper.c_crit;
    row.reject_upper = check.upper.reject;
    row.t_lower = check.lower.t_n;
    row.c_lower = check.lower.c_crit;
    row.reject_lower = check.lower.reject;
    row.saturation =
        check.verdict == sstest::CheckVerdict::kSaturationSupported;
    row.rho_at_minus_beta = maxscore::rho_hat(sample.w, sample.d, minus_beta);
    row.done = true;
  });

  StudySummary& s = out.summary;
  s.trials_requested = cfg.trials;
  s.n = cfg.n;
  s.alpha = cfg.test.alpha;
  s.b_reps = cfg.test.b_reps;

  long long up = 0, low = 0, sat = 0;
  double sum = 0.0;
  for (const TrialRow& row : out.rows) {
    if (!row.done) continue;
    ++s.trials_done;
    up += row.reject_upper ? 1 : 0;
    low += row.reject_lower ? 1 : 0;
    sat += row.saturation ? 1 : 0;
    sum += row.rho_at_minus_beta;
  }
  s.truncated = s.trials_done < s.trials_requested;
  if (s.trials_done > 0) {
    const double m = static_cast<double>(s.trials_done);
    s.upper_reject_rate = static_cast<double>(up) / m;
    s.lower_reject_rate = static_cast<double>(low) / m;
    s.saturation_rate = static_cast<double>(sat) / m;
    s.upper_reject_se = rate_se(s.upper_reject_rate, s.trials_done);
    s.lower_reject_se = rate_se(s.lower_reject_rate, s.trials_done);
    s.saturation_se = rate_se(s.saturation_rate, s.trials_done);
    s.mean_rho_at_minus_beta = sum / m;
    if (s.trials_done > 1) {
      double ss = 0.0;
      for (const TrialRow& row : out.rows) {
        if (!row.done) continue;
        const double dev = row.rho_at_minus_beta - s.mean_rho_at_minus_beta;
        ss += dev * dev;
      }
      s.scaled_var_rho_at_minus_beta =
          static_cast<double>(cfg.n) * ss / (m - 1.0);
    }
  }
  return out;
}

std::string summary_csv(const StudySummary& s) {
  std::ostringstream os;
  os << "trials_requested,trials_done,n,alpha,b_reps,"
     << "upper_reject_rate,upper_reject_se,"
     << "lower_reject_rate,lower_reject_se,"
     << "saturation_rate,saturation_se,"
     << "mean_rho_at_minus_beta,scaled_var_rho_at_minus_beta,truncated\n";
  os << records::fmt_int(s.trials_requested) << ","
     << records::fmt_int(s.trials_done) << "," << records::fmt_int(s.n) << ","
     << records::fmt_real(s.alpha) << "," << records::fmt_int(s.b_reps) << ","
     << records::fmt_real(s.upper_reject_rate) << ","
     << records::fmt_real(s.upper_reject_se) << ","
     << records::fmt_real(s.lower_reject_rate) << ","
     << records::fmt_real(s.lower_reject_se) << ","
     << records::fmt_real(s.saturation_rate) << ","
     << records::fmt_real(s.saturation_se) << ","
     << records::fmt_real(s.mean_rho_at_minus_beta) << ","
     << records::fmt_real(s.scaled_var_rho_at_minus_beta) << ","
     << (s.truncated ? "1" : "0") << "\n";
  return os.str();
}

}  // namespace sspanel::mc
