#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "sspanel/dgp.hpp"
#include "sspanel/errors.hpp"
#include "sspanel/maxscore.hpp"
#include "sspanel/rng.hpp"
#include "sspanel/sstest.hpp"

using namespace sspanel;

namespace {

/// Wraps a (w, d) pair as a panel sample with outcomes consistent with
/// d = y1 - y0.
dgp::PanelSample make_sample(const Eigen::MatrixXd& w,
                             const Eigen::VectorXi& d) {
  dgp::PanelSample s;
  s.w = w;
  s.d = d;
  s.y0.resize(d.size());
  s.y1.resize(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    s.y0[i] = d[i] < 0 ? 1 : 0;
    s.y1[i] = d[i] > 0 ? 1 : 0;
  }
  return s;
}

/// Rows confined to the open halfspace {x > 0}, so the direction (-1, 0)
/// puts every row strictly on the negative side.
Eigen::MatrixXd halfspace_rows() {
  Eigen::MatrixXd w(4, 2);
  w << 1.0, 0.3, 2.0, -0.5, 1.5, 1.0, 0.5, -0.25;
  return w;
}

/// Reference multiplicities for bootstrap replicate r: the same
/// counter-based stream contract the library documents.
std::vector<long long> replicate_multiplicities(std::uint64_t seed, int r,
                                                Eigen::Index n) {
  rng::Stream idx(seed, static_cast<std::uint64_t>(r), rng::kTagBootstrapIdx);
  std::vector<long long> mult(static_cast<std::size_t>(n), 0);
  for (Eigen::Index j = 0; j < n; ++j) {
    ++mult[static_cast<std::size_t>(
        idx.next_below(static_cast<std::uint64_t>(n)))];
  }
  return mult;
}

/// Weighted cell value at a concrete direction, trusting IEEE exactness of
/// small-integer dot products to decide boundary membership.
long long weighted_value_at(const Eigen::MatrixXd& w,
                            const std::vector<long long>& plus,
                            const std::vector<long long>& zero, double qx,
                            double qy) {
  long long num = 0;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    const double dot = w(i, 0) * qx + w(i, 1) * qy;
    if (dot > 0.0) {
      num += plus[static_cast<std::size_t>(i)];
    } else if (dot == 0.0) {
      num += zero[static_cast<std::size_t>(i)];
    }
  }
  return num;
}

/// Brute-force supremum of the weighted cell objective for two-column
/// integer rows: evaluates every boundary direction (the perpendiculars
/// of the rows, both orientations — exact zero products for integer
/// entries) plus a half-degree angular grid that hits the interior of
/// every open cell (integer rows in [-4, 4] keep neighbouring boundary
/// angles more than a degree apart).
long long brute_force_sup(const Eigen::MatrixXd& w,
                          const std::vector<long long>& plus,
                          const std::vector<long long>& zero) {
  bool any = false;
  long long best = 0;
  auto offer = [&](double qx, double qy) {
    const long long v = weighted_value_at(w, plus, zero, qx, qy);
    if (!any || v > best) {
      any = true;
      best = v;
    }
  };
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    const double a = w(i, 0);
    const double b = w(i, 1);
    if (a == 0.0 && b == 0.0) continue;
    offer(-b, a);
    offer(b, -a);
  }
  constexpr int kGrid = 720;
  for (int j = 0; j < kGrid; ++j) {
    const double th = 2.0 * M_PI * static_cast<double>(j) / kGrid;
    offer(std::cos(th), std::sin(th));
  }
  REQUIRE(any);
  return best;
}

}  // namespace

TEST_CASE("upper test cannot reject when every outcome change is negative") {
  const Eigen::MatrixXd w = halfspace_rows();
  const Eigen::VectorXi d = Eigen::VectorXi::Constant(4, -1);
  sstest::TestConfig cfg;
  cfg.alpha = 0.25;
  cfg.b_reps = 8;
  cfg.seed = 3;

  const auto rep = sstest::test_upper(make_sample(w, d), cfg);
  CHECK(rep.t_n == 0.0);  // the halfspace gap empties every indicator
  CHECK_FALSE(rep.reject);
  CHECK(rep.n == 4);
  REQUIRE(rep.boot_draws.size() == 8);
  for (double v : rep.boot_draws) CHECK(v >= 0.0);
  CHECK(rep.c_crit >= 0.0);
}

TEST_CASE("lower test cannot reject when every outcome change is positive") {
  const Eigen::MatrixXd w = halfspace_rows();
  const Eigen::VectorXi d = Eigen::VectorXi::Constant(4, 1);
  sstest::TestConfig cfg;
  cfg.alpha = 0.25;
  cfg.b_reps = 8;
  cfg.seed = 3;

  const auto rep = sstest::test_lower(make_sample(w, d), cfg);
  CHECK(rep.t_n == 0.0);  // the infimum empties every indicator too
  CHECK_FALSE(rep.reject);
  CHECK(rep.c_crit >= 0.0);
}

TEST_CASE("degenerate samples are rejected up front") {
  sstest::TestConfig cfg;
  cfg.alpha = 0.25;
  cfg.b_reps = 8;

  const Eigen::MatrixXd w = halfspace_rows();
  const Eigen::VectorXi d0 = Eigen::VectorXi::Zero(4);
  CHECK_THROWS_AS(sstest::test_upper(make_sample(w, d0), cfg),
                  DegenerateDataError);
  CHECK_THROWS_AS(sstest::test_lower(make_sample(w, d0), cfg),
                  DegenerateDataError);
  CHECK_THROWS_AS(sstest::sign_saturation_check(make_sample(w, d0), cfg),
                  DegenerateDataError);

  Eigen::MatrixXd one_row(1, 2);
  one_row << 1.0, 0.5;
  const Eigen::VectorXi d1 = Eigen::VectorXi::Constant(1, 1);
  CHECK_THROWS_AS(sstest::test_upper(make_sample(one_row, d1), cfg),
                  DegenerateDataError);
}

TEST_CASE("test configuration is validated") {
  const Eigen::MatrixXd w = halfspace_rows();
  Eigen::VectorXi d(4);
  d << 1, -1, 1, -1;
  const auto sample = make_sample(w, d);

  sstest::TestConfig cfg;
  cfg.b_reps = 40;
  for (double bad : {0.0, 1.0, -0.1, 1.5}) {
    cfg.alpha = bad;
    CHECK_THROWS_AS(sstest::test_upper(sample, cfg), ConfigError);
  }

  cfg.alpha = 0.05;
  cfg.b_reps = 0;
  CHECK_THROWS_AS(sstest::test_upper(sample, cfg), ConfigError);

  // Too few replicates to resolve the upper tail: alpha * b_reps < 1.
  cfg.b_reps = 19;
  CHECK_THROWS_AS(sstest::test_upper(sample, cfg), ConfigError);
  CHECK_THROWS_AS(sstest::test_lower(sample, cfg), ConfigError);
  cfg.b_reps = 20;  // alpha * b_reps = 1 is the smallest admissible choice
  CHECK_NOTHROW(sstest::test_upper(sample, cfg));

  cfg.b_reps = 199;
  cfg.alpha = 0.004;
  CHECK_THROWS_AS(sstest::test_upper(sample, cfg), ConfigError);
}

TEST_CASE("bootstrap draws are reproducible and keyed per replicate") {
  const auto design = dgp::uniform_example_design(0.5);
  const auto sample = dgp::simulate(design, 40, 7);

  sstest::TestConfig cfg;
  cfg.alpha = 0.25;
  cfg.b_reps = 24;
  cfg.seed = 99;

  const auto a = sstest::test_upper(sample, cfg);
  const auto b = sstest::test_upper(sample, cfg);
  CHECK(a.t_n == b.t_n);
  CHECK(a.c_crit == b.c_crit);
  REQUIRE(a.boot_draws == b.boot_draws);

  // The lower test shares the identical draw construction.
  const auto low = sstest::test_lower(sample, cfg);
  CHECK(low.boot_draws == a.boot_draws);
  CHECK(low.c_crit == a.c_crit);

  // Each replicate owns its stream, so a shorter run is a prefix of a
  // longer one.
  sstest::TestConfig shorter = cfg;
  shorter.b_reps = 8;
  const auto prefix = sstest::test_upper(sample, shorter);
  REQUIRE(prefix.boot_draws.size() == 8);
  for (int r = 0; r < 8; ++r) CHECK(prefix.boot_draws[r] == a.boot_draws[r]);

  // A different resampling seed changes the draws.
  sstest::TestConfig other = cfg;
  other.seed = 100;
  const auto c = sstest::test_upper(sample, other);
  CHECK(c.boot_draws != a.boot_draws);
}

TEST_CASE("swapping the outcome columns mirrors the one-sided statistics") {
  const auto design = dgp::uniform_example_design(0.7);
  const auto sample = dgp::simulate(design, 60, 21);

  dgp::PanelSample swapped = sample;
  std::swap(swapped.y0, swapped.y1);
  swapped.d = swapped.y1 - swapped.y0;

  sstest::TestConfig cfg;
  cfg.alpha = 0.1;
  cfg.b_reps = 10;
  cfg.seed = 5;

  const auto up = sstest::test_upper(sample, cfg);
  const auto low = sstest::test_lower(sample, cfg);
  const auto up_swapped = sstest::test_upper(swapped, cfg);
  const auto low_swapped = sstest::test_lower(swapped, cfg);

  CHECK(up_swapped.t_n == -low.t_n);
  CHECK(low_swapped.t_n == -up.t_n);
}

TEST_CASE("critical value is the documented order statistic of the draws") {
  const auto design = dgp::uniform_example_design(0.5);
  const auto sample = dgp::simulate(design, 30, 13);

  auto sorted_draws = [](const sstest::TestReport& rep) {
    std::vector<double> s = rep.boot_draws;
    std::sort(s.begin(), s.end());
    return s;
  };

  sstest::TestConfig cfg;
  cfg.seed = 4;

  cfg.alpha = 0.25;
  cfg.b_reps = 8;  // ceil(0.75 * 8) = 6th smallest draw
  auto rep = sstest::test_upper(sample, cfg);
  CHECK(rep.c_crit == sorted_draws(rep)[5]);

  cfg.alpha = 0.1;
  cfg.b_reps = 10;  // ceil(0.9 * 10) = 9th smallest draw
  rep = sstest::test_upper(sample, cfg);
  CHECK(rep.c_crit == sorted_draws(rep)[8]);

  cfg.alpha = 0.5;
  cfg.b_reps = 4;  // ceil(0.5 * 4) = 2nd smallest draw
  rep = sstest::test_upper(sample, cfg);
  CHECK(rep.c_crit == sorted_draws(rep)[1]);

  // On one fixed set of draws the critical value is monotone in the
  // confidence level.
  cfg.b_reps = 199;
  cfg.alpha = 0.01;
  const double c01 = sstest::test_upper(sample, cfg).c_crit;
  cfg.alpha = 0.05;
  const double c05 = sstest::test_upper(sample, cfg).c_crit;
  cfg.alpha = 0.25;
  const double c25 = sstest::test_upper(sample, cfg).c_crit;
  CHECK(c01 >= c05);
  CHECK(c05 >= c25);
}

TEST_CASE("bootstrap draws match a brute-force resample oracle") {
  std::mt19937 gen(2024);
  std::uniform_int_distribution<int> entry(-4, 4);
  std::uniform_int_distribution<int> nrows(3, 8);
  std::uniform_int_distribution<int> dpick(-1, 1);

  for (int inst = 0; inst < 12; ++inst) {
    const int n = nrows(gen);
    Eigen::MatrixXd w(n, 2);
    Eigen::VectorXi d(n);
    bool any = false;
    for (int i = 0; i < n; ++i) {
      w(i, 0) = entry(gen);
      w(i, 1) = entry(gen);
      d[i] = dpick(gen);
      any = any || d[i] != 0;
    }
    if (!any) d[0] = 1;
    const auto sample = make_sample(w, d);

    for (const auto boundary :
         {sstest::BoundaryRule::kInclusive,
          sstest::BoundaryRule::kStrictBootstrap}) {
      sstest::TestConfig cfg;
      cfg.alpha = 0.5;
      cfg.b_reps = 6;
      cfg.seed = 1000 + static_cast<std::uint64_t>(inst);
      cfg.boundary = boundary;

      const auto rep = sstest::test_upper(sample, cfg);
      REQUIRE(rep.boot_draws.size() == 6);

      const double dn = static_cast<double>(n);
      const double root_n = std::sqrt(dn);
      for (int r = 0; r < cfg.b_reps; ++r) {
        const auto mult = replicate_multiplicities(cfg.seed, r, n);
        std::vector<long long> plus(static_cast<std::size_t>(n));
        std::vector<long long> zero(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
          const auto s = static_cast<std::size_t>(i);
          plus[s] = (mult[s] - 1) * static_cast<long long>(d[i]);
          zero[s] = boundary == sstest::BoundaryRule::kInclusive
                        ? plus[s]
                        : -static_cast<long long>(d[i]);
        }
        const long long sup = brute_force_sup(w, plus, zero);
        const double expected = root_n * (static_cast<double>(sup) / dn);
        REQUIRE(rep.boot_draws[static_cast<std::size_t>(r)] == expected);
      }
    }
  }
}

TEST_CASE("search methods drive the test beyond the exact range") {
  // Four columns: the exact optimizer refuses, the search methods run.
  std::mt19937 gen(77);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = 24;
  Eigen::MatrixXd w(n, 4);
  Eigen::VectorXi d(n);
  Eigen::Vector4d beta(1.0, -0.5, 0.25, 0.75);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 4; ++j) w(i, j) = normal(gen);
    d[i] = w.row(i).dot(beta) >= 0.0 ? 1 : -1;
    if (i % 5 == 0) d[i] = -d[i];
  }
  const auto sample = make_sample(w, d);

  sstest::TestConfig cfg;
  cfg.alpha = 0.25;
  cfg.b_reps = 6;
  cfg.seed = 9;
  CHECK_THROWS_AS(sstest::test_upper(sample, cfg), CapacityError);

  cfg.optimizer.method = maxscore::Method::kRandomSearch;
  cfg.optimizer.iterations = 2000;
  const auto a = sstest::test_upper(sample, cfg);
  const auto b = sstest::test_upper(sample, cfg);
  REQUIRE(a.boot_draws.size() == 6);
  CHECK(a.t_n == b.t_n);
  CHECK(a.boot_draws == b.boot_draws);
  CHECK(a.reject == (a.t_n > a.c_crit));
  CHECK(std::isfinite(a.c_crit));
}

TEST_CASE("search draws never exceed the exact draws") {
  Eigen::MatrixXd w(10, 2);
  w << 1, 0, 0, 1, -1, 2, 3, -1, 2, 2, -2, -1, 1, -3, -1, -1, 0, -2, 4, 1;
  Eigen::VectorXi d(10);
  d << 1, -1, 1, 1, -1, 1, -1, 1, -1, 1;
  const auto sample = make_sample(w, d);

  sstest::TestConfig exact;
  exact.alpha = 0.25;
  exact.b_reps = 12;
  exact.seed = 31;

  sstest::TestConfig grid = exact;
  grid.optimizer.method = maxscore::Method::kGridSearch;
  grid.optimizer.iterations = 360;

  const auto re = sstest::test_upper(sample, exact);
  const auto rg = sstest::test_upper(sample, grid);
  CHECK(rg.t_n <= re.t_n);
  REQUIRE(rg.boot_draws.size() == re.boot_draws.size());
  for (std::size_t r = 0; r < re.boot_draws.size(); ++r) {
    CHECK(rg.boot_draws[r] <= re.boot_draws[r]);
  }
}

TEST_CASE("combined check agrees with the standalone tests") {
  const auto design = dgp::uniform_example_design(0.5);
  const auto sample = dgp::simulate(design, 120, 3);

  sstest::TestConfig cfg;
  cfg.alpha = 0.1;
  cfg.b_reps = 39;
  cfg.seed = 17;

  const auto check = sstest::sign_saturation_check(sample, cfg);
  const auto up = sstest::test_upper(sample, cfg);
  const auto low = sstest::test_lower(sample, cfg);

  CHECK(check.upper.t_n == up.t_n);
  CHECK(check.upper.c_crit == up.c_crit);
  CHECK(check.upper.reject == up.reject);
  CHECK(check.upper.boot_draws == up.boot_draws);
  CHECK(check.lower.t_n == low.t_n);
  CHECK(check.lower.c_crit == low.c_crit);
  CHECK(check.lower.reject == low.reject);
  CHECK(check.lower.boot_draws == low.boot_draws);
  const bool both = up.reject && low.reject;
  CHECK((check.verdict == sstest::CheckVerdict::kSaturationSupported) == both);
}

TEST_CASE("a saturated design with ample data passes the combined check") {
  const auto design = dgp::uniform_example_design(0.5);
  const auto sample = dgp::simulate(design, 400, 11);

  sstest::TestConfig cfg;
  cfg.alpha = 0.1;
  cfg.b_reps = 99;
  cfg.seed = 2;

  const auto check = sstest::sign_saturation_check(sample, cfg);
  CHECK(check.upper.t_n > 0.0);
  CHECK(check.lower.t_n < 0.0);
  CHECK(check.upper.reject);
  CHECK(check.lower.reject);
  CHECK(check.verdict == sstest::CheckVerdict::kSaturationSupported);
}
