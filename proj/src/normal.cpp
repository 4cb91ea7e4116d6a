#include "sspanel/normal.hpp"

#include <cmath>

#include "sspanel/errors.hpp"

namespace sspanel {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865476;
constexpr double kInvSqrt2Pi = 0.3989422804014327;
}  // namespace

double norm_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double norm_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw DomainError("norm_quantile: argument must lie strictly inside (0, 1)");
  }
  const double pl = p < 0.5 ? p : 1.0 - p;
  const double t = std::sqrt(-2.0 * std::log(pl));
  // Abramowitz & Stegun 26.2.22-style rational approximation for the
  // lower-tail quantile, |error| < 3e-3; Newton brings it to ~ulp level.
  double x = t - (2.30753 + 0.27061 * t) / (1.0 + t * (0.99229 + 0.04481 * t));
  x = -x;
  if (p > 0.5) x = -x;
  for (int i = 0; i < 3; ++i) {
    const double err = norm_cdf(x) - p;
    const double d = norm_pdf(x);
    if (d <= 0.0) break;
    x -= err / d;
  }
  return x;
}

}  // namespace sspanel
