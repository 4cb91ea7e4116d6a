#pragma once

namespace sspanel::exact_sign {

/// Sign (-1, 0, +1) of the determinant a*d - b*c, exact for all finite
/// inputs whose products stay inside the normal floating-point range.
/// Uses the fused-multiply-add determinant algorithm, whose result has
/// relative error below 2 ulp and is exactly zero when the true
/// determinant is zero, so the sign is always trustworthy.
int det2(double a, double b, double c, double d);

/// Sign of the dot product ax*bx + ay*by, exact under the same range
/// caveat (it is a 2x2 determinant in disguise).
int dot2(double ax, double ay, double bx, double by);

/// Sign of det[u; v; w] for rows u, v, w in R^3, exact for all finite
/// inputs whose intermediate products stay inside the normal range.
/// A cheap floating-point filter answers when the magnitude provably
/// dominates the rounding error; otherwise the determinant is evaluated
/// in nonoverlapping-expansion arithmetic and the sign read off exactly.
int det3(const double* u, const double* v, const double* w);

/// Sign of the dot product a[0]*b[0] + a[1]*b[1] + a[2]*b[2], exact under
/// the same range caveat (filtered, with an expansion fallback).
int dot3(const double* a, const double* b);

}  // namespace sspanel::exact_sign
