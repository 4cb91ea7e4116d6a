#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "sspanel/errors.hpp"
#include "sspanel/geometry.hpp"
#include "sspanel/links.hpp"
#include "sspanel/rng.hpp"

using namespace sspanel;
using Catch::Approx;

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Closed-form gap extremes for the sinusoidal-derivative family
/// g(t) = a*t + sin(t): the increment over a shift r is
/// a*r + 2*cos(x + r/2)*sin(r/2), so the extremes are a*r -/+ 2*|sin(r/2)|.
double analytic_inf(double a, double r) {
  return a * r - 2.0 * std::abs(std::sin(r / 2.0));
}
double analytic_sup(double a, double r) {
  return a * r + 2.0 * std::abs(std::sin(r / 2.0));
}

}  // namespace

TEST_CASE("moment vectors: closed-form points and structural invariants") {
  const auto logistic = links::Link::logistic();
  const auto p0 = geometry::moment_vector(logistic, 0.0, 0.0);
  CHECK(p0.v1 == 0.5);
  CHECK(p0.v2 == 0.5);
  CHECK(p0.v3 == 0.25);

  const auto p1 = geometry::moment_vector(logistic, 1.0, 0.0);
  const double e1 = std::exp(1.0) / (1.0 + std::exp(1.0));
  CHECK(p1.v1 == Approx(0.5).margin(1e-15));
  CHECK(p1.v2 == Approx(e1).margin(1e-15));
  CHECK(p1.v3 == Approx(0.5 * e1).margin(1e-15));

  rng::Stream s(3, 0, 0);
  const auto periodic = links::Link::periodic_gdot(2.0);
  for (int i = 0; i < 200; ++i) {
    const double t = 3.0 * s.next_uniform01();
    const double a = 6.0 * s.next_uniform_sym();
    for (const auto* link : {&logistic, &periodic}) {
      const auto p = geometry::moment_vector(*link, t, a);
      CHECK(p.v1 > 0.0);
      CHECK(p.v1 < 1.0);
      CHECK(p.v3 == p.v1 * p.v2);  // exact product by construction
      if (t > 0.0) CHECK(p.v2 > p.v1);
    }
  }
  // The curve approaches (1, 1, 1) far to the right.
  const auto plim = geometry::moment_vector(logistic, 1.0, 60.0);
  CHECK(plim.v1 == Approx(1.0).margin(1e-12));
  CHECK(plim.v2 == Approx(1.0).margin(1e-12));
  CHECK(plim.v3 == Approx(1.0).margin(1e-12));

  CHECK_THROWS_AS(
      geometry::moment_vector(logistic, std::nan(""), 0.0), ConfigError);
}

TEST_CASE("gap summary: constant derivative is closed form") {
  const auto logistic = links::Link::logistic();
  const auto gs = geometry::gap_summary(logistic, 2.0, 1.0);
  CHECK(gs.s_inf == 2.0);
  CHECK(gs.t_sup == 1.0);
  CHECK(gs.exact);
  CHECK(gs.refine_delta == 0.0);

  CHECK_THROWS_AS(geometry::gap_summary(logistic, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(geometry::gap_summary(logistic, 2.0, 0.0), ConfigError);
  CHECK_THROWS_AS(geometry::gap_summary(logistic, 2.0, -1.0), ConfigError);
}

TEST_CASE("gap summary: periodic reduction matches the analytic extremes") {
  const auto link = links::Link::periodic_gdot(2.0);
  {
    // Whole-period shift: the gap is constant, equal to the period rise.
    const auto gs = geometry::gap_summary(link, 2.0 * kPi, kPi);
    CHECK(gs.s_inf == Approx(4.0 * kPi).margin(1e-9));
    CHECK(gs.t_sup == Approx(analytic_sup(2.0, kPi)).margin(1e-6));
    CHECK(gs.t_sup == Approx(2.0 * kPi + 2.0).margin(1e-6));
    CHECK(gs.exact);
    CHECK(gs.refine_delta <= 1e-5);
  }
  {
    const double s = 2.0 * kPi + 1.0;
    const double t = 2.0 * kPi;
    const auto gs = geometry::gap_summary(link, s, t);
    CHECK(gs.s_inf == Approx(analytic_inf(2.0, s)).margin(1e-6));
    CHECK(gs.t_sup == Approx(4.0 * kPi).margin(1e-9));
  }
  {
    // Shifts beyond one period and fractional remainders.
    const double s = 3.0 * 2.0 * kPi + 2.5;
    const double t = 0.75;
    const auto gs = geometry::gap_summary(link, s, t);
    CHECK(gs.s_inf == Approx(analytic_inf(2.0, s)).margin(1e-6));
    CHECK(gs.t_sup == Approx(analytic_sup(2.0, t)).margin(1e-6));
  }
  {
    // A window passed alongside a periodic link changes nothing: the
    // one-period reduction already covers the whole line.
    const auto g1 =
        geometry::gap_summary(link, 2.5, 1.0, geometry::Window{0.0, 2.0 * kPi});
    const auto g3 =
        geometry::gap_summary(link, 2.5, 1.0, geometry::Window{0.0, 6.0 * kPi});
    CHECK(g1.s_inf == g3.s_inf);
    CHECK(g1.t_sup == g3.t_sup);
  }
}

TEST_CASE("gap summary: windowed evaluation for non-periodic declarations") {
  // The same sinusoidal transform declared opaque: windowed scans over one
  // and over three periods must both recover the true extremes.
  const auto opaque = links::Link::custom(
      [](double t) { return 2.0 * t + std::sin(t); },
      [](double t) { return 2.0 + std::cos(t); },
      links::PeriodClass{links::PeriodKind::kNonPeriodic,
                         std::nan(""), std::nan("")},
      "opaque_sinusoid");
  const double s = 2.2;
  const double t = 0.9;
  const auto g1 =
      geometry::gap_summary(opaque, s, t, geometry::Window{0.0, 2.0 * kPi});
  const auto g3 =
      geometry::gap_summary(opaque, s, t, geometry::Window{0.0, 6.0 * kPi});
  CHECK_FALSE(g1.exact);
  CHECK(g1.s_inf == Approx(analytic_inf(2.0, s)).margin(1e-6));
  CHECK(g1.t_sup == Approx(analytic_sup(2.0, t)).margin(1e-6));
  CHECK(g1.s_inf == Approx(g3.s_inf).margin(1e-7));
  CHECK(g1.t_sup == Approx(g3.t_sup).margin(1e-7));

  CHECK_THROWS_AS(geometry::gap_summary(opaque, s, t), ConfigError);

  const auto gauss = links::Link::gaussian_tail();
  const auto gw =
      geometry::gap_summary(gauss, 2.0, 1.0, geometry::Window{-8.0, 8.0});
  CHECK_FALSE(gw.exact);
  CHECK(gw.s_inf > 0.0);
  CHECK(gw.t_sup > gw.s_inf);  // the sup runs away in the tails
}

TEST_CASE("disjointness certificate: separated logistic hulls") {
  const auto logistic = links::Link::logistic();
  const auto cert = geometry::certify_disjoint(logistic, 2.0, 1.0);
  REQUIRE(cert.verdict == geometry::HullVerdict::kDisjoint);
  REQUIRE(cert.separator.has_value());
  CHECK_FALSE(cert.weights_s.has_value());
  CHECK_FALSE(cert.weights_t.has_value());
  const Eigen::Vector3d v = *cert.separator;
  const double lo = 1.0 + 1.0 / std::expm1(2.0);
  const double hi = 1.0 + 1.0 / std::expm1(1.0);
  CHECK(v[0] > lo);
  CHECK(v[0] < hi);
  CHECK(v[1] == 1.0 - v[0]);
  CHECK(v[2] == -1.0);
  // Raw dot-product spot check away from the cancellation-prone tail.
  for (double a = -6.0; a <= 2.0; a += 0.25) {
    const Eigen::Vector3d ps = geometry::moment_vector(logistic, 2.0, a).vec();
    const Eigen::Vector3d pt = geometry::moment_vector(logistic, 1.0, a).vec();
    CHECK(v.dot(ps) < 0.0);
    CHECK(v.dot(pt) > 0.0);
  }

  CHECK_THROWS_AS(geometry::certify_disjoint(logistic, 1.0, 1.0), ConfigError);
}

TEST_CASE("disjointness certificate: periodic family near the threshold") {
  const auto link = links::Link::periodic_gdot(2.0);
  const auto eps = geometry::find_epsilon(link, 2.0 * kPi + 1.0, 2.0 * kPi);
  REQUIRE(eps.has_value());
  // Shrinking the wide shift and growing the narrow one by the certified
  // margin keeps the hulls provably apart.
  const auto cert = geometry::certify_disjoint(link, 2.0 * kPi + 1.0 - *eps,
                                               2.0 * kPi + *eps);
  CHECK(cert.verdict == geometry::HullVerdict::kDisjoint);
  // Symmetric spacing around a whole period separates as well.
  const auto cert2 = geometry::certify_disjoint(link, 2.0 * kPi + *eps,
                                                2.0 * kPi - *eps);
  CHECK(cert2.verdict == geometry::HullVerdict::kDisjoint);
}

TEST_CASE("intersection certificate: identical and near-identical curves") {
  const auto logistic = links::Link::logistic();
  {
    const auto cert = geometry::certify_intersect(logistic, 1.0, 1.0,
                                                  {-5.0, 5.0, 51});
    REQUIRE(cert.verdict == geometry::HullVerdict::kIntersecting);
    REQUIRE(cert.weights_s.has_value());
    REQUIRE(cert.weights_t.has_value());
    CHECK(cert.weights_s->minCoeff() >= 0.0);
    CHECK(cert.weights_t->minCoeff() >= 0.0);
    CHECK(cert.weights_s->sum() == Approx(1.0).margin(1e-9));
    CHECK(cert.weights_t->sum() == Approx(1.0).margin(1e-9));
    CHECK(cert.residual <= 1e-7);
    CHECK_FALSE(cert.separator.has_value());
  }
  {
    // Separated hulls: the grid LP must come back infeasible.
    const auto cert = geometry::certify_intersect(logistic, 2.0, 1.0,
                                                  {-10.0, 10.0, 401});
    CHECK(cert.verdict == geometry::HullVerdict::kUnknown);
    CHECK_FALSE(cert.weights_s.has_value());
  }
  {
    const auto gauss = links::Link::gaussian_tail();
    const auto cert = geometry::certify_intersect(gauss, 1.05, 1.0,
                                                  {-10.0, 10.0, 401});
    REQUIRE(cert.verdict == geometry::HullVerdict::kIntersecting);
    CHECK(cert.residual <= 1e-7);
  }
  CHECK_THROWS_AS(
      geometry::certify_intersect(logistic, 1.0, 1.0, {-5.0, 5.0, 1}),
      ConfigError);
  CHECK_THROWS_AS(
      geometry::certify_intersect(logistic, 1.0, 1.0, {5.0, 5.0, 10}),
      ConfigError);
}

TEST_CASE("epsilon construction: values, ranges, preconditions") {
  const auto logistic = links::Link::logistic();
  const auto e1 = geometry::find_epsilon(logistic, 2.0, 1.0);
  REQUIRE(e1.has_value());
  CHECK(*e1 == 0.25);  // min(1, (s-t)/4) in the constant-derivative case

  const auto link = links::Link::periodic_gdot(2.0);
  {
    // Narrow shift on the period: the margin comes from the one-period
    // minimum of the width-1 increment, 2 - 2*sin(1/2), over a slope
    // bound of 3.
    const auto e = geometry::find_epsilon(link, 2.0 * kPi + 1.0, 2.0 * kPi);
    REQUIRE(e.has_value());
    CHECK(*e > 0.0);
    CHECK(*e <= 0.25);
    const double expected = (2.0 - 2.0 * std::sin(0.5)) / 12.0;
    CHECK(*e == Approx(expected).margin(1e-5));
  }
  {
    // Wide shift on the period: margin (2*pi - 2) over slope bound 3.
    const auto e = geometry::find_epsilon(link, 2.0 * kPi, kPi);
    REQUIRE(e.has_value());
    CHECK(*e <= (2.0 * kPi - kPi) / 4.0);
    const double expected = (2.0 * kPi - 2.0) / 12.0;
    CHECK(*e == Approx(expected).margin(1e-5));
  }
  CHECK_THROWS_AS(geometry::find_epsilon(link, 5.0, 4.0), ConfigError);
  CHECK_THROWS_AS(
      geometry::find_epsilon(links::Link::gaussian_tail(), 2.0, 1.0),
      ConfigError);
}

TEST_CASE("hull dispatcher and certificate exclusivity") {
  const auto logistic = links::Link::logistic();
  CHECK(geometry::hull_status(logistic, 2.0, 1.0).verdict ==
        geometry::HullVerdict::kDisjoint);
  CHECK(geometry::hull_status(logistic, 1.0, 2.0).verdict ==
        geometry::HullVerdict::kDisjoint);  // symmetric in the two shifts
  CHECK(geometry::hull_status(logistic, 1.0, 1.0).verdict ==
        geometry::HullVerdict::kIntersecting);
  CHECK(geometry::hull_status(links::Link::gaussian_tail(), 1.05, 1.0)
            .verdict == geometry::HullVerdict::kIntersecting);
}

TEST_CASE("any direction: the wide-shift hull reaches past the narrow one") {
  // For every direction v, the best value of v'p on the wide-shift curve is
  // at least the worst value on the narrow-shift curve (up to grid slack):
  // both curves share the limit points (0,0,0) and (1,1,1).
  rng::Stream s(404, 0, 0);
  const auto logistic = links::Link::logistic();
  const auto periodic = links::Link::periodic_gdot(2.0);
  struct Setup {
    const links::Link* link;
    double s, t;
  };
  const Setup setups[] = {{&logistic, 2.0, 1.0},
                          {&periodic, 2.0 * kPi + 1.0, 2.0 * kPi}};
  const int kGridN = 2001;
  for (const auto& su : setups) {
    for (int rep = 0; rep < 100; ++rep) {
      Eigen::Vector3d v;
      for (int c = 0; c < 3; ++c) v[c] = 5.0 * s.next_uniform_sym();
      double best_s = -1e300;
      double worst_t = 1e300;
      for (int i = 0; i < kGridN; ++i) {
        const double a = -40.0 + 80.0 * i / (kGridN - 1);
        best_s = std::max(
            best_s, v.dot(geometry::moment_vector(*su.link, su.s, a).vec()));
        worst_t = std::min(
            worst_t, v.dot(geometry::moment_vector(*su.link, su.t, a).vec()));
      }
      REQUIRE(best_s >= worst_t - 1e-9);
    }
  }
}
