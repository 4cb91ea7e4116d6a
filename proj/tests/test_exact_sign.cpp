#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <cstdint>

#include "sspanel/exact_sign.hpp"
#include "sspanel/rng.hpp"

using namespace sspanel;

TEST_CASE("2x2 determinant sign: exact zeros on constructed singular inputs") {
  // Parallel vectors with awkward mantissas: (a, b) vs (c*a, c*b) for
  // power-of-two c gives an exactly singular determinant in doubles.
  rng::Stream s(2024, 0, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double a = s.next_uniform_sym() * 3.0;
    const double b = s.next_uniform_sym() * 3.0;
    const double c = std::ldexp(1.0, static_cast<int>(s.next_below(9)) - 4);
    REQUIRE(exact_sign::det2(a, b, c * a, c * b) == 0);
    REQUIRE(exact_sign::det2(c * a, a, c * b, b) == 0);
  }
  // Near-singular but not singular: a 1-ulp nudge must decide the sign.
  const double x = 1.0 + 1e-9;
  const double xup = std::nextafter(x, 2.0);
  CHECK(exact_sign::det2(x, x, x, xup) == 1);   // x*xup - x*x = x * (1 ulp) > 0
  CHECK(exact_sign::det2(x, x, xup, x) == -1);  // x*x - x*xup < 0
  CHECK(exact_sign::det2(x, x, x, x) == 0);
}

TEST_CASE("2x2 determinant sign agrees with long-double evaluation away from ties") {
  rng::Stream s(7, 0, 0);
  for (int trial = 0; trial < 20000; ++trial) {
    const double a = s.next_uniform_sym(), b = s.next_uniform_sym();
    const double c = s.next_uniform_sym(), d = s.next_uniform_sym();
    const long double ref = static_cast<long double>(a) * d - static_cast<long double>(b) * c;
    if (std::fabs(static_cast<double>(ref)) < 1e-14) continue;
    REQUIRE(exact_sign::det2(a, b, c, d) == (ref > 0 ? 1 : -1));
  }
}

TEST_CASE("dot-product sign: exact zero for constructed perpendiculars") {
  rng::Stream s(11, 0, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double a = s.next_uniform_sym() * 2.0;
    const double b = s.next_uniform_sym() * 2.0;
    // (a, b) . (-b, a) = 0 exactly in real arithmetic on these doubles.
    REQUIRE(exact_sign::dot2(a, b, -b, a) == 0);
    REQUIRE(exact_sign::dot2(a, b, b, -a) == 0);
  }
  CHECK(exact_sign::dot2(1.0, 1e-18, 1.0, -1.0) == 1);
  CHECK(exact_sign::dot2(1e-18, 1.0, 1.0, -1.0) == -1);
}

TEST_CASE("3x3 determinant sign: integer cross-checks and exact coplanarity") {
  // Small integer rows: evaluate against 64-bit integer arithmetic.
  rng::Stream s(5, 0, 0);
  for (int trial = 0; trial < 5000; ++trial) {
    std::int64_t m[3][3];
    double r[3][3];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        m[i][j] = static_cast<std::int64_t>(s.next_below(41)) - 20;
        r[i][j] = static_cast<double>(m[i][j]);
      }
    }
    const std::int64_t det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                             m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    const int want = det > 0 ? 1 : (det < 0 ? -1 : 0);
    REQUIRE(exact_sign::det3(r[0], r[1], r[2]) == want);
  }

  // Exact coplanarity with non-integer entries: u = v + w componentwise
  // where the additions happen to be exact (power-of-two alignment).
  for (int trial = 0; trial < 500; ++trial) {
    double v[3], w[3], u[3];
    for (int j = 0; j < 3; ++j) {
      v[j] = std::ldexp(static_cast<double>(static_cast<std::int64_t>(s.next_below(1000)) - 500), -30);
      w[j] = std::ldexp(static_cast<double>(static_cast<std::int64_t>(s.next_below(1000)) - 500), -30);
      u[j] = v[j] + w[j];  // exact: both are multiples of 2^-30 well inside 53 bits
    }
    REQUIRE(exact_sign::det3(u, v, w) == 0);
  }

  // Antisymmetry under row swap.
  for (int trial = 0; trial < 2000; ++trial) {
    double a[3], b[3], c[3];
    for (int j = 0; j < 3; ++j) {
      a[j] = s.next_uniform_sym();
      b[j] = s.next_uniform_sym();
      c[j] = s.next_uniform_sym();
    }
    REQUIRE(exact_sign::det3(a, b, c) == -exact_sign::det3(b, a, c));
  }
}

TEST_CASE("3-term dot sign: exact zeros and filter consistency") {
  rng::Stream s(13, 0, 0);
  for (int trial = 0; trial < 2000; ++trial) {
    double u[3];
    for (int j = 0; j < 3; ++j) u[j] = s.next_uniform_sym() * 2.0;
    const double p0[3] = {-u[1], u[0], 0.0};
    const double p1[3] = {0.0, -u[2], u[1]};
    const double p2[3] = {u[2], 0.0, -u[0]};
    REQUIRE(exact_sign::dot3(u, p0) == 0);
    REQUIRE(exact_sign::dot3(u, p1) == 0);
    REQUIRE(exact_sign::dot3(u, p2) == 0);
  }
  for (int trial = 0; trial < 5000; ++trial) {
    double a[3], b[3];
    long double ref = 0.0;
    for (int j = 0; j < 3; ++j) {
      a[j] = s.next_uniform_sym();
      b[j] = s.next_uniform_sym();
      ref += static_cast<long double>(a[j]) * b[j];
    }
    if (std::fabs(static_cast<double>(ref)) < 1e-14) continue;
    REQUIRE(exact_sign::dot3(a, b) == (ref > 0 ? 1 : -1));
  }
}
