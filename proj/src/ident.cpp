#include "sspanel/ident.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "sspanel/errors.hpp"
#include "sspanel/records.hpp"

namespace sspanel::ident {

namespace {

int sgn(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

void validate_direction(const dgp::PanelDesign& design,
                        const Eigen::VectorXd& b) {
  if (b.size() != design.k) {
    throw ConfigError("candidate direction size must match the design's k");
  }
  bool zero = true;
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    if (!std::isfinite(b[j])) {
      throw ConfigError("candidate direction must be finite");
    }
    zero = zero && b[j] == 0.0;
  }
  if (zero) {
    throw DomainError("the zero direction is degenerate: W'b = 0 everywhere");
  }
  if (design.beta.size() != design.k) {
    throw ConfigError("design beta size must match the design's k");
  }
  bool beta_zero = true;
  for (Eigen::Index j = 0; j < design.beta.size(); ++j) {
    beta_zero = beta_zero && design.beta[j] == 0.0;
  }
  if (beta_zero) {
    throw ConfigError("design beta must be nonzero for sign diagnostics");
  }
}

bool analytic_supported(const dgp::PanelDesign& design) {
  if (design.regressors == dgp::RegressorKind::kUniformExample) return true;
  return design.regressors == dgp::RegressorKind::kChamberlain &&
         design.k == 2;
}

/// Exact double-wedge probability for W uniform on the square (-1,1)^2:
/// P(sgn(c1 W1 + c2 W2) != sgn(d1 W1 + d2 W2)). Leads are normalized to be
/// nonnegative; each flip complements the mismatch region (almost
/// everywhere), tracked by parity. Conditional on W2 = t the mismatch
/// section in W1 is an interval (or half-line / complement) whose clipped
/// length is piecewise linear in t, so trapezoids between the clip
/// breakpoints integrate it exactly.
double r_uniform_wedge(double c1, double c2, double d1, double d2) {
  int parity = 0;
  if (c1 < 0.0) {
    c1 = -c1;
    c2 = -c2;
    parity ^= 1;
  }
  if (d1 < 0.0) {
    d1 = -d1;
    d2 = -d2;
    parity ^= 1;
  }

  const auto length = [&](double t) {
    double base;
    if (c1 > 0.0 && d1 > 0.0) {
      const double r1 = -(c2 / c1) * t;
      const double r2 = -(d2 / d1) * t;
      const double a = std::min(r1, r2);
      const double c = std::max(r1, r2);
      base = std::max(0.0, std::min(c, 1.0) - std::max(a, -1.0));
    } else if (c1 > 0.0) {
      // The d-line reduces to the constant sign of d2 (for t > 0).
      const double r1 = -(c2 / c1) * t;
      base = d2 > 0.0 ? std::max(0.0, std::min(r1, 1.0) + 1.0)
                      : std::max(0.0, 1.0 - std::max(r1, -1.0));
    } else if (d1 > 0.0) {
      const double r2 = -(d2 / d1) * t;
      base = c2 > 0.0 ? std::max(0.0, std::min(r2, 1.0) + 1.0)
                      : std::max(0.0, 1.0 - std::max(r2, -1.0));
    } else {
      base = (c2 > 0.0) != (d2 > 0.0) ? 2.0 : 0.0;
    }
    return parity == 0 ? base : 2.0 - base;
  };

  // The mismatch region is symmetric under W -> -W, so integrating the
  // section length over t in (0, 1] and halving the 1/4 density factor
  // gives the full probability. Clip kinks happen where a section root
  // crosses the square's edge.
  std::vector<double> cuts{0.0, 1.0};
  if (c1 > 0.0 && c2 != 0.0) {
    const double t = c1 / std::abs(c2);
    if (t > 0.0 && t < 1.0) cuts.push_back(t);
  }
  if (d1 > 0.0 && d2 != 0.0) {
    const double t = d1 / std::abs(d2);
    if (t > 0.0 && t < 1.0) cuts.push_back(t);
  }
  std::sort(cuts.begin(), cuts.end());

  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    integral += 0.5 * (length(a) + length(b)) * (b - a);
  }
  return 0.5 * integral;
}

/// Lebesgue measure of {z in (lo,hi): sgn(c1 z + c0) != sgn(d1 z + d0)},
/// by exact interval arithmetic. Both lines must be not identically zero.
double line_mismatch_measure(double c1, double c0, double d1, double d0,
                             double lo, double hi) {
  int parity = 0;
  if (c1 < 0.0) {
    c1 = -c1;
    c0 = -c0;
    parity ^= 1;
  }
  if (d1 < 0.0) {
    d1 = -d1;
    d0 = -d0;
    parity ^= 1;
  }
  const double len = hi - lo;
  double base;
  if (c1 > 0.0 && d1 > 0.0) {
    const double r1 = -c0 / c1;
    const double r2 = -d0 / d1;
    base = std::max(0.0, std::min(std::max(r1, r2), hi) -
                             std::max(std::min(r1, r2), lo));
  } else if (c1 > 0.0) {
    const double r1 = -c0 / c1;
    base = d0 > 0.0 ? std::max(0.0, std::min(r1, hi) - lo)
                    : std::max(0.0, hi - std::max(r1, lo));
  } else if (d1 > 0.0) {
    const double r2 = -d0 / d1;
    base = c0 > 0.0 ? std::max(0.0, std::min(r2, hi) - lo)
                    : std::max(0.0, hi - std::max(r2, lo));
  } else {
    base = sgn(c0) != sgn(d0) ? len : 0.0;
  }
  return parity == 0 ? base : len - base;
}

void require_z_support(const dgp::ZLaw& z_law) {
  if (!(std::isfinite(z_law.lo) && std::isfinite(z_law.hi) &&
        z_law.hi > z_law.lo)) {
    throw ConfigError("Z support needs finite bounds with hi > lo");
  }
}

double binomial_se(double p, long long m) {
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(m));
}

void require_mc_draws(long long mc_draws) {
  if (mc_draws < 1) throw ConfigError("Monte Carlo draw count must be >= 1");
}

/// All Monte Carlo ingredients from one simulated regressor sample: the
/// mismatch frequency of b against beta and both directions' sign masses.
struct McEval {
  RValue r;
  SignMass mass_b;
  SignMass mass_beta;
};

SignMass tally_to_mass(long long npos, long long nneg, long long nzero,
                       long long m) {
  SignMass out;
  const double dm = static_cast<double>(m);
  out.pos = static_cast<double>(npos) / dm;
  out.neg = static_cast<double>(nneg) / dm;
  out.zero = static_cast<double>(nzero) / dm;
  out.se_pos = binomial_se(out.pos, m);
  out.se_neg = binomial_se(out.neg, m);
  out.se_zero = binomial_se(out.zero, m);
  out.method = EvalMethod::kMonteCarlo;
  out.draws = m;
  return out;
}

McEval mc_evaluate(const dgp::PanelDesign& design, const Eigen::VectorXd& b,
                   long long mc_draws, std::uint64_t seed) {
  require_mc_draws(mc_draws);
  const dgp::PanelSample sample = dgp::simulate(design, mc_draws, seed);
  long long mismatch = 0;
  long long bp = 0, bn = 0, bz = 0;
  long long tp = 0, tn = 0, tz = 0;
  for (Eigen::Index i = 0; i < sample.w.rows(); ++i) {
    const int sb = sgn(sample.w.row(i).dot(design.beta));
    const int sc = sgn(sample.w.row(i).dot(b));
    if (sb != sc) ++mismatch;
    (sc > 0 ? bp : sc < 0 ? bn : bz) += 1;
    (sb > 0 ? tp : sb < 0 ? tn : tz) += 1;
  }
  McEval out;
  out.r.value = static_cast<double>(mismatch) / static_cast<double>(mc_draws);
  out.r.se = binomial_se(out.r.value, mc_draws);
  out.r.method = EvalMethod::kMonteCarlo;
  out.r.draws = mc_draws;
  out.mass_b = tally_to_mass(bp, bn, bz, mc_draws);
  out.mass_beta = tally_to_mass(tp, tn, tz, mc_draws);
  return out;
}

RValue analytic_r(const dgp::PanelDesign& design, const Eigen::VectorXd& b) {
  RValue out;
  out.method = EvalMethod::kAnalytic;
  if (design.regressors == dgp::RegressorKind::kUniformExample) {
    out.value = r_uniform_wedge(design.beta[0], design.beta[1], b[0], b[1]);
    return out;
  }
  if (design.regressors == dgp::RegressorKind::kChamberlain &&
      design.k == 2) {
    require_z_support(design.z_law);
    out.value = line_mismatch_measure(design.beta[0], design.beta[1], b[0],
                                      b[1], design.z_law.lo, design.z_law.hi) /
                (design.z_law.hi - design.z_law.lo);
    return out;
  }
  throw ConfigError(
      "no closed form for this design; request Monte Carlo evaluation");
}

SignMass analytic_mass(const dgp::PanelDesign& design,
                       const Eigen::VectorXd& b) {
  SignMass out;
  out.method = EvalMethod::kAnalytic;
  if (design.regressors == dgp::RegressorKind::kUniformExample) {
    // The square's law is symmetric about the origin and W'b has a
    // continuous distribution for b != 0.
    out.pos = 0.5;
    out.neg = 0.5;
    out.zero = 0.0;
    return out;
  }
  if (design.regressors == dgp::RegressorKind::kChamberlain &&
      design.k == 2) {
    require_z_support(design.z_law);
    const double lo = design.z_law.lo;
    const double hi = design.z_law.hi;
    if (b[0] == 0.0) {
      // Constant sign of the intercept component.
      out.pos = b[1] > 0.0 ? 1.0 : 0.0;
      out.neg = b[1] < 0.0 ? 1.0 : 0.0;
      out.zero = 0.0;
      return out;
    }
    const double root = -b[1] / b[0];
    const double above =
        std::min(1.0, std::max(0.0, (hi - root) / (hi - lo)));
    out.pos = b[0] > 0.0 ? above : 1.0 - above;
    out.neg = 1.0 - out.pos;
    out.zero = 0.0;
    return out;
  }
  throw ConfigError(
      "no closed form for this design; request Monte Carlo evaluation");
}

}  // namespace

double r_uniform_closed_form(double beta2, double b2) {
  if (!(std::isfinite(beta2) && std::isfinite(b2))) {
    throw ConfigError("closed-form inputs must be finite");
  }
  return r_uniform_wedge(1.0, beta2, 1.0, b2);
}

double r_chamberlain_closed_form(double beta2, double b2,
                                 const dgp::ZLaw& z_law) {
  if (!(std::isfinite(beta2) && std::isfinite(b2))) {
    throw ConfigError("closed-form inputs must be finite");
  }
  require_z_support(z_law);
  return line_mismatch_measure(1.0, beta2, 1.0, b2, z_law.lo, z_law.hi) /
         (z_law.hi - z_law.lo);
}

RValue r_population(const dgp::PanelDesign& design, const Eigen::VectorXd& b,
                    EvalMethod method, long long mc_draws,
                    std::uint64_t seed) {
  validate_direction(design, b);
  if (method == EvalMethod::kAnalytic) return analytic_r(design, b);
  return mc_evaluate(design, b, mc_draws, seed).r;
}

SignMass sign_mass(const dgp::PanelDesign& design, const Eigen::VectorXd& b,
                   EvalMethod method, long long mc_draws,
                   std::uint64_t seed) {
  validate_direction(design, b);
  if (method == EvalMethod::kAnalytic) return analytic_mass(design, b);
  return mc_evaluate(design, b, mc_draws, seed).mass_b;
}

IdReport identification_verdict(const dgp::PanelDesign& design,
                                const Eigen::VectorXd& b,
                                const IdOptions& opts) {
  validate_direction(design, b);
  const bool analytic = analytic_supported(design) && !opts.force_monte_carlo;

  IdReport rep;
  rep.b = b;

  if (analytic) {
    const SignMass mass_beta = analytic_mass(design, design.beta);
    const SignMass mass_b = analytic_mass(design, b);
    const RValue r = analytic_r(design, b);
    rep.r_value = r.value;
    rep.r_se = 0.0;
    rep.mass_pos = mass_b.pos;
    rep.mass_neg = mass_b.neg;
    rep.mass_zero = mass_b.zero;
    rep.method = EvalMethod::kAnalytic;
    rep.draws = 0;
    if (std::min(mass_beta.pos, mass_beta.neg) <= 0.0) {
      rep.verdict = Verdict::kSaturationFailsForBeta;
    } else if (std::min(mass_b.pos, mass_b.neg) > 0.0 &&
               r.value <= opts.r_tol) {
      rep.verdict = Verdict::kEquivalentToBeta;
    } else {
      rep.verdict = Verdict::kDistinguished;
    }
    return rep;
  }

  const McEval mc = mc_evaluate(design, b, opts.mc_draws, opts.seed);
  rep.r_value = mc.r.value;
  rep.r_se = mc.r.se;
  rep.mass_pos = mc.mass_b.pos;
  rep.mass_neg = mc.mass_b.neg;
  rep.mass_zero = mc.mass_b.zero;
  rep.method = EvalMethod::kMonteCarlo;
  rep.draws = mc.r.draws;

  // Three-standard-error evidence rules; estimates straddling a threshold
  // leave the verdict open.
  const bool beta_min_is_pos = mc.mass_beta.pos <= mc.mass_beta.neg;
  const double beta_min =
      beta_min_is_pos ? mc.mass_beta.pos : mc.mass_beta.neg;
  const double beta_min_se =
      beta_min_is_pos ? mc.mass_beta.se_pos : mc.mass_beta.se_neg;
  if (beta_min == 0.0) {
    rep.verdict = Verdict::kSaturationFailsForBeta;
    return rep;
  }
  if (beta_min <= 3.0 * beta_min_se) {
    rep.verdict = Verdict::kInconclusive;
    return rep;
  }

  const bool b_min_is_pos = mc.mass_b.pos <= mc.mass_b.neg;
  const double b_min = b_min_is_pos ? mc.mass_b.pos : mc.mass_b.neg;
  const double b_min_se =
      b_min_is_pos ? mc.mass_b.se_pos : mc.mass_b.se_neg;
  const double one_over_m = 1.0 / static_cast<double>(mc.r.draws);
  if (mc.r.value > 3.0 * mc.r.se) {
    rep.verdict = Verdict::kDistinguished;
  } else if (b_min > 3.0 * b_min_se &&
             mc.r.value + 3.0 * mc.r.se < one_over_m) {
    rep.verdict = Verdict::kEquivalentToBeta;
  } else {
    rep.verdict = Verdict::kInconclusive;
  }
  return rep;
}

std::vector<IdReport> id_scan(const dgp::PanelDesign& design,
                              const std::vector<Eigen::VectorXd>& b_grid,
                              const IdOptions& opts) {
  std::vector<IdReport> out;
  out.reserve(b_grid.size());
  for (const auto& b : b_grid) {
    out.push_back(identification_verdict(design, b, opts));
  }
  return out;
}

std::string id_scan_csv(const std::vector<IdReport>& table) {
  if (table.empty()) return std::string{};
  std::ostringstream os;
  const Eigen::Index k = table.front().b.size();
  for (Eigen::Index j = 0; j < k; ++j) os << "b_" << (j + 1) << ",";
  os << "r_value,se,mass_pos,mass_neg,verdict,method\n";
  for (const auto& rep : table) {
    if (rep.b.size() != k) {
      throw ConfigError("scan table rows must share one direction size");
    }
    for (Eigen::Index j = 0; j < k; ++j) {
      os << records::fmt_real(rep.b[j]) << ",";
    }
    os << records::fmt_real(rep.r_value) << "," << records::fmt_real(rep.r_se)
       << "," << records::fmt_real(rep.mass_pos) << ","
       << records::fmt_real(rep.mass_neg) << "," << verdict_name(rep.verdict)
       << "," << method_name(rep.method) << "\n";
  }
  return os.str();
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kEquivalentToBeta:
      return "EquivalentToBeta";
    case Verdict::kDistinguished:
      return "Distinguished";
    case Verdict::kSaturationFailsForBeta:
      return "SaturationFailsForBeta";
    case Verdict::kInconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

const char* method_name(EvalMethod m) {
  return m == EvalMethod::kAnalytic ? "analytic" : "monte_carlo";
}

}  // namespace sspanel::ident
