#include "sspanel/links.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "sspanel/errors.hpp"
#include "sspanel/normal.hpp"

namespace sspanel::links {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double logit(double p) { return std::log(p) - std::log1p(-p); }

void check_open_unit(double p, const char* who) {
  if (!(p > 0.0) || !(p < 1.0)) {
    std::ostringstream os;
    os << who << ": probability must lie strictly inside (0, 1)";
    throw DomainError(os.str());
  }
}

}  // namespace

Link Link::logistic() {
  Link l;
  l.kind_ = Kind::kLogistic;
  l.declared_ = {PeriodKind::kConstant, kNan, kNan};
  l.label_ = "logistic";
  return l;
}

Link Link::periodic_gdot(double a) {
  if (!(a > 1.0)) {
    throw ConfigError("periodic_gdot: slope parameter a must exceed 1");
  }
  Link l;
  l.kind_ = Kind::kPeriodicGdot;
  l.a_ = a;
  l.declared_ = {PeriodKind::kPeriodic, 2.0 * kPi, 2.0 * kPi * a};
  std::ostringstream os;
  os << "periodic_gdot(a=" << a << ")";
  l.label_ = os.str();
  return l;
}

Link Link::gaussian_tail() {
  Link l;
  l.kind_ = Kind::kGaussianTail;
  l.declared_ = {PeriodKind::kNonPeriodic, kNan, kNan};
  l.label_ = "gaussian_tail";
  return l;
}

Link Link::custom(std::function<double(double)> g, std::function<double(double)> g_dot,
                  PeriodClass declared, std::string label) {
  if (!g) throw ConfigError("custom link: transform function is required");
  if (declared.kind == PeriodKind::kPeriodic && !(declared.period > 0.0)) {
    throw ConfigError("custom link: a periodic declaration needs a positive period");
  }
  Link l;
  l.kind_ = Kind::kCustom;
  l.custom_g_ = std::move(g);
  l.custom_gdot_ = std::move(g_dot);
  l.declared_ = declared;
  l.label_ = std::move(label);
  return l;
}

double g_transform(const Link& link, double t) {
  switch (link.kind_) {
    case Link::Kind::kLogistic:
      return t;
    case Link::Kind::kPeriodicGdot:
      return link.a_ * t + std::sin(t);
    case Link::Kind::kGaussianTail: {
      const double p = norm_cdf(t);
      // logit(Phi(t)); in the far tails fall back to asymptotics-safe form.
      if (p <= 0.0) return -0.5 * t * t;     // deep lower tail guard
      if (p >= 1.0) return 0.5 * t * t;      // deep upper tail guard
      return logit(p);
    }
    case Link::Kind::kCustom:
      return link.custom_g_(t);
  }
  throw InternalError("g_transform: unhandled link kind");
}

double g_dot(const Link& link, double t) {
  double d = 0.0;
  switch (link.kind_) {
    case Link::Kind::kLogistic:
      d = 1.0;
      break;
    case Link::Kind::kPeriodicGdot:
      d = link.a_ + std::cos(t);
      break;
    case Link::Kind::kGaussianTail: {
      const double p = norm_cdf(t);
      const double q = 0.5 * std::erfc(t * 0.7071067811865476);  // 1 - Phi(t)
      const double denom = p * q;
      d = denom > 0.0 ? norm_pdf(t) / denom
                      : std::numeric_limits<double>::infinity();
      break;
    }
    case Link::Kind::kCustom: {
      if (link.custom_gdot_) {
        d = link.custom_gdot_(t);
      } else {
        const double h = 6.055454452393343e-06 * std::max(1.0, std::fabs(t));
        d = (link.custom_g_(t + h) - link.custom_g_(t - h)) / (2.0 * h);
      }
      break;
    }
  }
  if (!(d > 0.0)) {
    throw DomainError("g_dot: link derivative must be strictly positive");
  }
  return d;
}

double cdf(const Link& link, double t) {
  return 1.0 / (1.0 + std::exp(-g_transform(link, t)));
}

namespace {

/// Solves g(t) = y for a strictly increasing g on the bracket [lo, hi]
/// (which must contain the root) by Newton steps clipped to the bracket,
/// with bisection whenever Newton leaves it or stalls.
double solve_increasing(const Link& link, double y, double lo, double hi) {
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double val = g_transform(link, t) - y;
    if (val == 0.0) return t;
    if (val > 0.0) {
      hi = t;
    } else {
      lo = t;
    }
    const double width = hi - lo;
    if (width <= 4.0 * std::numeric_limits<double>::epsilon() *
                     std::max(1.0, std::max(std::fabs(lo), std::fabs(hi)))) {
      return 0.5 * (lo + hi);
    }
    const double d = g_dot(link, t);
    double next = t - val / d;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  return t;
}

}  // namespace

double quantile(const Link& link, double p) {
  check_open_unit(p, "quantile");
  switch (link.kind_) {
    case Link::Kind::kLogistic:
      return logit(p);
    case Link::Kind::kGaussianTail:
      // The composed cdf logistic(logit(Phi)) collapses to Phi itself.
      return norm_quantile(p);
    case Link::Kind::kPeriodicGdot: {
      const double y = logit(p);
      // |sin| <= 1 brackets the root of a*t + sin(t) = y.
      return solve_increasing(link, y, (y - 1.0) / link.a_, (y + 1.0) / link.a_);
    }
    case Link::Kind::kCustom: {
      const double y = logit(p);
      double lo = -1.0, hi = 1.0;
      int guard = 0;
      while (g_transform(link, lo) > y) {
        lo *= 2.0;
        if (++guard > 200) throw DomainError("quantile: cannot bracket target below");
      }
      guard = 0;
      while (g_transform(link, hi) < y) {
        hi *= 2.0;
        if (++guard > 200) throw DomainError("quantile: cannot bracket target above");
      }
      return solve_increasing(link, y, lo, hi);
    }
  }
  throw InternalError("quantile: unhandled link kind");
}

PeriodClass classify_period(const Link& link) { return link.declared_; }

}  // namespace sspanel::links
