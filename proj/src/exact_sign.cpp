#include "sspanel/exact_sign.hpp"

#include <cmath>

namespace sspanel::exact_sign {

namespace {

inline int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

/// x + y == a + b exactly, with x the rounded sum.
inline void two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  const double bv = x - a;
  const double av = x - bv;
  y = (a - av) + (b - bv);
}

/// x + y == a * b exactly, with x the rounded product.
inline void two_prod(double a, double b, double& x, double& y) {
  x = a * b;
  y = std::fma(a, b, -x);
}

/// Fixed-capacity nonoverlapping expansion: the represented value is the
/// exact sum of the components, stored in increasing magnitude order.
/// Grown one scalar at a time, so exactness never depends on input order.
struct Expansion {
  static constexpr int kCap = 32;
  double c[kCap];
  int len = 0;

  void add(double b) {
    double q = b;
    for (int i = 0; i < len; ++i) {
      double qn, h;
      two_sum(q, c[i], qn, h);
      c[i] = h;
      q = qn;
    }
    c[len++] = q;
  }

  /// Adds a*b exactly (two components).
  void add_product(double a, double b) {
    double hi, lo;
    two_prod(a, b, hi, lo);
    add(lo);
    add(hi);
  }

  /// Sign of the represented value: the largest-magnitude component is
  /// stored last, and its sign is the sign of the total.
  int sign() const {
    for (int i = len - 1; i >= 0; --i) {
      if (c[i] != 0.0) return sign_of(c[i]);
    }
    return 0;
  }
};

// Filter constant for the 3x3 determinant: bounds the rounding error of
// the straightforward evaluation by kDet3Err times the permanent of
// absolute values. (7 + 56u) * u with u = 2^-53.
const double kDet3Err = (7.0 + 56.0 * 1.1102230246251565e-16) * 1.1102230246251565e-16;

// Filter constant for a three-term dot product: two roundings per term
// and two for the summation tree give a comfortable 4u bound.
const double kDot3Err = 4.0 * 1.1102230246251565e-16;

}  // namespace

int det2(double a, double b, double c, double d) {
  // Fused-multiply-add determinant: w ~ b*c, e its exact residual, and
  // f = fl(a*d - w); r = f - e then carries the sign of a*d - b*c.
  const double w = b * c;
  const double e = std::fma(b, c, -w);
  const double f = std::fma(a, d, -w);
  const double r = f - e;
  return sign_of(r);
}

int dot2(double ax, double ay, double bx, double by) {
  // ax*bx + ay*by == det[(ax, -ay); (by, bx)].
  return det2(ax, -ay, by, bx);
}

int det3(const double* u, const double* v, const double* w) {
  const double m0 = v[1] * w[2] - v[2] * w[1];
  const double m1 = v[0] * w[2] - v[2] * w[0];
  const double m2 = v[0] * w[1] - v[1] * w[0];
  const double det = u[0] * m0 - u[1] * m1 + u[2] * m2;

  const double p0 = std::fabs(v[1] * w[2]) + std::fabs(v[2] * w[1]);
  const double p1 = std::fabs(v[0] * w[2]) + std::fabs(v[2] * w[0]);
  const double p2 = std::fabs(v[0] * w[1]) + std::fabs(v[1] * w[0]);
  const double permanent =
      p0 * std::fabs(u[0]) + p1 * std::fabs(u[1]) + p2 * std::fabs(u[2]);
  const double errbound = kDet3Err * permanent;
  if (det > errbound) return 1;
  if (det < -errbound) return -1;

  // Exact fallback: accumulate every product of the cofactor expansion
  // det = sum_k u[k] * (v[k+1]*w[k+2] - v[k+2]*w[k+1]) (indices mod 3;
  // the cyclic form needs no alternating sign). Each product is split
  // into exact (hi, lo) parts before scaling by u[k].
  Expansion ex;
  for (int k = 0; k < 3; ++k) {
    const int i = (k + 1) % 3, j = (k + 2) % 3;
    double hi, lo;
    two_prod(v[i], w[j], hi, lo);
    ex.add_product(u[k], hi);
    ex.add_product(u[k], lo);
    two_prod(v[j], w[i], hi, lo);
    ex.add_product(-u[k], hi);
    ex.add_product(-u[k], lo);
  }
  return ex.sign();
}

int dot3(const double* a, const double* b) {
  const double t0 = a[0] * b[0];
  const double t1 = a[1] * b[1];
  const double t2 = a[2] * b[2];
  const double dot = t0 + t1 + t2;
  const double mag = std::fabs(t0) + std::fabs(t1) + std::fabs(t2);
  const double errbound = kDot3Err * mag;
  if (dot > errbound) return 1;
  if (dot < -errbound) return -1;

  Expansion ex;
  for (int k = 0; k < 3; ++k) ex.add_product(a[k], b[k]);
  return ex.sign();
}

}  // namespace sspanel::exact_sign
