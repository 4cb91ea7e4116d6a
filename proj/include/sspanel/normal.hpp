#pragma once

namespace sspanel {

/// Standard normal cdf, computed through erfc for accuracy in both tails.
double norm_cdf(double x);

/// Standard normal density.
double norm_pdf(double x);

/// Standard normal quantile (inverse cdf) on (0, 1). Rational initial
/// guess polished by Newton iterations on norm_cdf; absolute error is a
/// few ulp across the usable range. Throws DomainError outside (0, 1).
double norm_quantile(double p);

}  // namespace sspanel
