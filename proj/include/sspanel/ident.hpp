#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "sspanel/dgp.hpp"

namespace sspanel::ident {

/// How a population quantity was evaluated.
enum class EvalMethod {
  kAnalytic,    // exact closed form for the supported designs
  kMonteCarlo,  // empirical frequency over simulated regressor draws
};

/// Population sign-mismatch probability of a candidate direction b against
/// the design's true coefficient vector.
struct RValue {
  double value = 0.0;
  double se = 0.0;  ///< binomial standard error; 0 for analytic results
  EvalMethod method = EvalMethod::kAnalytic;
  long long draws = 0;  ///< Monte Carlo sample size; 0 for analytic
};

/// The three sign masses of W'b with per-mass binomial standard errors
/// (zero for analytic results).
struct SignMass {
  double pos = 0.0;
  double neg = 0.0;
  double zero = 0.0;
  double se_pos = 0.0;
  double se_neg = 0.0;
  double se_zero = 0.0;
  EvalMethod method = EvalMethod::kAnalytic;
  long long draws = 0;
};

/// Conclusion about a candidate direction b.
enum class Verdict {
  kEquivalentToBeta,        ///< b is a positive rescaling of beta
  kDistinguished,           ///< observables separate b from beta
  kSaturationFailsForBeta,  ///< beta itself has a one-sided sign, so the
                            ///< equivalence criterion does not apply
  kInconclusive,            ///< Monte Carlo uncertainty straddles a threshold
};

struct IdOptions {
  /// Analytic threshold below which a mismatch probability counts as zero.
  double r_tol = 1e-12;
  /// Monte Carlo sample size when no closed form applies (or when forced).
  long long mc_draws = 1'000'000;
  std::uint64_t seed = 0;
  /// Evaluate by simulation even for designs with closed forms.
  bool force_monte_carlo = false;
};

/// Full diagnostic for one candidate direction.
struct IdReport {
  Eigen::VectorXd b;
  double r_value = 0.0;
  double r_se = 0.0;
  double mass_pos = 0.0;
  double mass_neg = 0.0;
  double mass_zero = 0.0;
  Verdict verdict = Verdict::kInconclusive;
  EvalMethod method = EvalMethod::kAnalytic;
  long long draws = 0;
};

/// Exact mismatch probability P(sgn(W1 + beta2 W2) != sgn(W1 + b2 W2)) for
/// W1, W2 independent uniform on (-1, 1): the area of the double wedge
/// between the two boundary lines, integrated in closed form (piecewise
/// trapezoids, no quadrature). Symmetric in its arguments.
double r_uniform_closed_form(double beta2, double b2);

/// Exact mismatch probability P(sgn(Z + beta2) != sgn(Z + b2)) for Z
/// uniform on (z_law.lo, z_law.hi): the length of the interval between
/// -beta2 and -b2 clipped to the support, over the support length.
double r_chamberlain_closed_form(double beta2, double b2,
                                 const dgp::ZLaw& z_law = {});

/// Mismatch probability of b against the design's beta. Analytic requests
/// dispatch to the closed forms (two-column uniform-square and bounded-Z
/// designs); Monte Carlo draws `mc_draws` regressor rows and returns the
/// mismatch frequency with its binomial standard error.
/// Throws DomainError for b = 0, ConfigError for a size mismatch, a zero
/// beta, or an analytic request on an unsupported design.
RValue r_population(const dgp::PanelDesign& design, const Eigen::VectorXd& b,
                    EvalMethod method, long long mc_draws = 1'000'000,
                    std::uint64_t seed = 0);

/// The sign masses P(W'b > 0), P(W'b < 0), P(W'b = 0). Same dispatch and
/// error rules as r_population.
SignMass sign_mass(const dgp::PanelDesign& design, const Eigen::VectorXd& b,
                   EvalMethod method, long long mc_draws = 1'000'000,
                   std::uint64_t seed = 0);

/// Classifies b against the design's beta:
///  1. If beta's own smaller sign mass vanishes, the verdict is
///     kSaturationFailsForBeta (the equivalence criterion needs both signs
///     of W'beta to occur).
///  2. Otherwise b is kEquivalentToBeta exactly when both sign masses of
///     W'b are positive and its mismatch probability is zero (analytic:
///     <= r_tol), and kDistinguished when the mismatch probability is
///     positive or a sign mass vanishes.
/// Monte Carlo evaluations use three-standard-error evidence rules; when
/// the estimate straddles a threshold the verdict is kInconclusive. All
/// quantities for one verdict come from a single simulated sample.
IdReport identification_verdict(const dgp::PanelDesign& design,
                                const Eigen::VectorXd& b,
                                const IdOptions& opts = {});

/// One report per grid point.
std::vector<IdReport> id_scan(const dgp::PanelDesign& design,
                              const std::vector<Eigen::VectorXd>& b_grid,
                              const IdOptions& opts = {});

/// CSV rendering of a scan: header b_1..b_k, r_value, se, mass_pos,
/// mass_neg, verdict, method; one row per report; 17-significant-digit
/// reals. An empty table renders as an empty string.
std::string id_scan_csv(const std::vector<IdReport>& table);

const char* verdict_name(Verdict v);
const char* method_name(EvalMethod m);

}  // namespace sspanel::ident
