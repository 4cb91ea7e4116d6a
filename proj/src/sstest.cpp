#include "sspanel/sstest.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <utility>
#include <vector>

#include "sspanel/errors.hpp"
#include "sspanel/rng.hpp"

namespace sspanel::sstest {

namespace {

void validate_config(const TestConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw ConfigError("test level alpha must lie strictly between 0 and 1");
  }
  if (cfg.b_reps < 1) throw ConfigError("b_reps must be at least 1");
  if (cfg.alpha * static_cast<double>(cfg.b_reps) < 1.0) {
    std::ostringstream os;
    os << "b_reps = " << cfg.b_reps << " cannot resolve the upper "
       << cfg.alpha << " tail; need alpha * b_reps >= 1";
    throw ConfigError(os.str());
  }
}

void validate_sample(const dgp::PanelSample& sample) {
  if (sample.w.rows() < 2) {
    throw DegenerateDataError("the bootstrap test needs at least two rows");
  }
  if (sample.d.size() != sample.w.rows()) {
    throw ConfigError("sample outcome changes must match the row count");
  }
  bool any = false;
  for (Eigen::Index i = 0; i < sample.d.size(); ++i) {
    any = any || sample.d[i] != 0;
  }
  if (!any) {
    throw DegenerateDataError(
        "every outcome change is zero, so the score objective vanishes "
        "identically and the test statistic is degenerate");
  }
}

/// One centred bootstrap supremum per replicate. Resampling rows with
/// replacement multiplies row i's score term by its multiplicity m_i, so
/// the centred difference collapses onto the original rows with integer
/// weights:
///   sup_q sum_i [ (m_i - 1) d_i 1{w_i'q > 0} + z_i 1{w_i'q = 0} ]
/// where z_i = (m_i - 1) d_i under the inclusive rule and z_i = -d_i when
/// the resample average uses the strict indicator. The exact cell
/// optimizer then yields the supremum with no direction grid involved.
std::vector<double> bootstrap_draws(const Eigen::MatrixXd& w,
                                    const Eigen::VectorXi& d,
                                    const TestConfig& cfg) {
  const Eigen::Index n = w.rows();
  const double dn = static_cast<double>(n);
  const double root_n = std::sqrt(dn);
  std::vector<long long> mult(static_cast<std::size_t>(n), 0);
  std::vector<long long> plus(mult.size()), zero(mult.size());
  std::vector<double> draws(static_cast<std::size_t>(cfg.b_reps), 0.0);
  for (int r = 0; r < cfg.b_reps; ++r) {
    rng::Stream idx(cfg.seed, static_cast<std::uint64_t>(r),
                    rng::kTagBootstrapIdx);
    std::fill(mult.begin(), mult.end(), 0);
    for (Eigen::Index j = 0; j < n; ++j) {
      ++mult[static_cast<std::size_t>(
          idx.next_below(static_cast<std::uint64_t>(n)))];
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto s = static_cast<std::size_t>(i);
      const long long extra = (mult[s] - 1) * static_cast<long long>(d[i]);
      plus[s] = extra;
      zero[s] = cfg.boundary == BoundaryRule::kInclusive
                    ? extra
                    : -static_cast<long long>(d[i]);
    }
    const maxscore::CellResult cell =
        maxscore::optimize_cells(w, plus, zero, 0, cfg.optimizer);
    draws[static_cast<std::size_t>(r)] =
        root_n * (static_cast<double>(cell.best_num) / dn);
  }
  return draws;
}

double critical_value(std::vector<double> draws, double alpha) {
  std::sort(draws.begin(), draws.end());
  const double b = static_cast<double>(draws.size());
  // Order-statistic index ceil((1 - alpha) * b_reps), taken with a tiny
  // slack so a product that is integral in exact arithmetic is not pushed
  // up one rank by floating-point excess.
  auto idx = static_cast<long long>(std::ceil((1.0 - alpha) * b - 1e-9));
  idx = std::max<long long>(1, std::min<long long>(idx, static_cast<long long>(draws.size())));
  return draws[static_cast<std::size_t>(idx - 1)];
}

TestReport finish_report(double t_n, std::vector<double> draws, double alpha,
                         bool lower_tail, Eigen::Index n) {
  TestReport rep;
  rep.t_n = t_n;
  rep.c_crit = critical_value(draws, alpha);
  rep.boot_draws = std::move(draws);
  rep.n = static_cast<long long>(n);
  rep.reject = lower_tail ? (t_n < -rep.c_crit) : (t_n > rep.c_crit);
  return rep;
}

}  // namespace

TestReport test_upper(const dgp::PanelSample& sample, const TestConfig& cfg) {
  validate_config(cfg);
  validate_sample(sample);
  const maxscore::MaxScoreResult sup =
      maxscore::maximize(sample.w, sample.d, cfg.optimizer);
  const double root_n = std::sqrt(static_cast<double>(sample.w.rows()));
  return finish_report(root_n * sup.value,
                       bootstrap_draws(sample.w, sample.d, cfg), cfg.alpha,
                       /*lower_tail=*/false, sample.w.rows());
}

TestReport test_lower(const dgp::PanelSample& sample, const TestConfig& cfg) {
  validate_config(cfg);
  validate_sample(sample);
  const maxscore::MaxScoreResult inf =
      maxscore::minimize(sample.w, sample.d, cfg.optimizer);
  const double root_n = std::sqrt(static_cast<double>(sample.w.rows()));
  return finish_report(root_n * inf.value,
                       bootstrap_draws(sample.w, sample.d, cfg), cfg.alpha,
                       /*lower_tail=*/true, sample.w.rows());
}

CheckResult sign_saturation_check(const dgp::PanelSample& sample,
                                  const TestConfig& cfg) {
  validate_config(cfg);
  validate_sample(sample);
  const maxscore::MaxScoreResult sup =
      maxscore::maximize(sample.w, sample.d, cfg.optimizer);
  const maxscore::MaxScoreResult inf =
      maxscore::minimize(sample.w, sample.d, cfg.optimizer);
  const double root_n = std::sqrt(static_cast<double>(sample.w.rows()));
  std::vector<double> draws = bootstrap_draws(sample.w, sample.d, cfg);

  CheckResult out;
  out.upper = finish_report(root_n * sup.value, draws, cfg.alpha,
                            /*lower_tail=*/false, sample.w.rows());
  out.lower = finish_report(root_n * inf.value, std::move(draws), cfg.alpha,
                            /*lower_tail=*/true, sample.w.rows());
  out.verdict = out.upper.reject && out.lower.reject
                    ? CheckVerdict::kSaturationSupported
                    : CheckVerdict::kInconclusive;
  return out;
}

}  // namespace sspanel::sstest
