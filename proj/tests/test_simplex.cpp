#include <catch2/catch_amalgamated.hpp>

#include "sspanel/errors.hpp"
#include "sspanel/rng.hpp"
#include "sspanel/simplex.hpp"

using namespace sspanel;

TEST_CASE("feasible systems built from a known nonnegative solution") {
  rng::Stream s(11, 0, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 2 + static_cast<int>(s.next_below(3));
    const int n = m + 1 + static_cast<int>(s.next_below(6));
    Eigen::MatrixXd A(m, n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) A(i, j) = 2.0 * s.next_uniform_sym();
    }
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) {
      if (s.next_below(2) == 0) x0[j] = s.next_uniform01();
    }
    const Eigen::VectorXd b = A * x0;
    const auto res = simplex::phase1_feasible(A, b);
    REQUIRE(res.feasible);
    REQUIRE(res.x.minCoeff() >= -1e-12);
    REQUIRE((A * res.x - b).lpNorm<Eigen::Infinity>() <= 1e-8);
  }
}

TEST_CASE("infeasible systems are recognized") {
  {
    // Two copies of the same row demanding different totals.
    Eigen::MatrixXd A(2, 2);
    A << 1.0, 1.0, 1.0, 1.0;
    Eigen::VectorXd b(2);
    b << 1.0, 2.0;
    CHECK_FALSE(simplex::phase1_feasible(A, b).feasible);
  }
  {
    // -x = 1 has no nonnegative solution.
    Eigen::MatrixXd A(1, 1);
    A << -1.0;
    Eigen::VectorXd b(1);
    b << 1.0;
    CHECK_FALSE(simplex::phase1_feasible(A, b).feasible);
  }
}

TEST_CASE("convex-hull membership as a feasibility problem") {
  // Unit square corners; a point is inside iff weights exist.
  Eigen::MatrixXd A(3, 4);
  A << 0.0, 1.0, 0.0, 1.0,  // x coordinates
      0.0, 0.0, 1.0, 1.0,   // y coordinates
      1.0, 1.0, 1.0, 1.0;   // convexity row
  auto contains = [&](double x, double y) {
    Eigen::VectorXd b(3);
    b << x, y, 1.0;
    return simplex::phase1_feasible(A, b).feasible;
  };
  CHECK(contains(0.5, 0.5));
  CHECK(contains(1.0, 0.5));   // boundary edge
  CHECK(contains(0.0, 0.0));   // vertex
  CHECK_FALSE(contains(2.0, 2.0));
  CHECK_FALSE(contains(-0.1, 0.5));
  CHECK_FALSE(contains(0.5, 1.0000001));
}

TEST_CASE("edge cases: zero right-hand side, shape mismatch") {
  Eigen::MatrixXd A(2, 3);
  A << 1.0, -2.0, 0.5, 0.0, 1.0, 1.0;
  const auto res = simplex::phase1_feasible(A, Eigen::VectorXd::Zero(2));
  CHECK(res.feasible);
  CHECK(res.x.lpNorm<Eigen::Infinity>() <= 1e-12);

  Eigen::VectorXd bad(3);
  bad.setZero();
  CHECK_THROWS_AS(simplex::phase1_feasible(A, bad), ConfigError);
}
