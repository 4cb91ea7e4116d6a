#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "sspanel/links.hpp"

namespace sspanel::geometry {

/// Point on the moment curve at shift t and location alpha:
/// (F(alpha), F(t+alpha), F(alpha)*F(t+alpha)) with F the error cdf.
struct MomentVector {
  double v1 = 0.0;
  double v2 = 0.0;
  double v3 = 0.0;
  Eigen::Vector3d vec() const { return {v1, v2, v3}; }
};

MomentVector moment_vector(const links::Link& link, double t, double alpha);

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

/// Extremes of the transform increment at two shifts:
/// s_inf = inf over locations of G(s + a) - G(a),
/// t_sup = sup over locations of G(t + x) - G(x).
struct GapSummary {
  double s_inf = 0.0;
  double t_sup = 0.0;
  /// Range actually scanned; [0, 0] when the answer is purely analytic.
  Window window;
  /// True when the values cover the whole real line (constant derivative,
  /// or periodic derivative via the one-period reduction); false when they
  /// only reflect a finite user-supplied window.
  bool exact = false;
  /// Largest discrepancy between the default grid and a 10x finer one.
  double refine_delta = 0.0;
};

/// Computes both gap extremes for s > t > 0. Constant-derivative links are
/// handled in closed form. Periodic-derivative links reduce shifts modulo
/// the period (each full period adds the fixed increment) and scan one
/// period densely. Other links require a window and are flagged non-exact.
GapSummary gap_summary(const links::Link& link, double s, double t,
                       std::optional<Window> window = std::nullopt);

enum class HullVerdict { kDisjoint, kIntersecting, kUnknown };

struct HullCertificate {
  HullVerdict verdict = HullVerdict::kUnknown;
  /// Disjoint only: v = (v1, 1 - v1, -1) with v'p(s,a) < 0 < v'p(t,x) at
  /// every checked grid point.
  std::optional<Eigen::Vector3d> separator;
  /// Intersecting only: convex weights over the s-grid and t-grid points
  /// whose weighted moment vectors coincide.
  std::optional<Eigen::VectorXd> weights_s;
  std::optional<Eigen::VectorXd> weights_t;
  /// For Intersecting, the max-norm defect of the weight certificate; for
  /// a failed intersection attempt, the LP's remaining artificial mass.
  double residual = 0.0;
  std::string note;
};

struct DisjointOptions {
  /// Scan window; required for links that are neither constant nor
  /// periodic, ignored otherwise.
  std::optional<Window> window;
  /// Extra separation demanded of non-exact (windowed) gap evaluations
  /// before a Disjoint verdict is issued.
  double margin = 1e-3;
};

/// Emits Disjoint with a verified separating vector when the gap criterion
/// s_inf > t_sup > 0 holds (with the safety margin for windowed gaps);
/// otherwise Unknown. A separator that fails re-verification on the grid
/// throws InternalError rather than certifying.
HullCertificate certify_disjoint(const links::Link& link, double s, double t,
                                 const DisjointOptions& opts = {});

struct AlphaGrid {
  double lo = -10.0;
  double hi = 10.0;
  int n = 401;
};

/// Searches for a common point of the two discretized hulls: convex weights
/// over moment vectors at shift s and at shift t with equal barycenters.
/// Feasible and verified -> Intersecting (valid for the true hulls, which
/// contain the discretized ones). Infeasible -> Unknown, since a finite
/// grid cannot prove the full curves' hulls apart.
HullCertificate certify_intersect(const links::Link& link, double s, double t,
                                  const AlphaGrid& grid);

/// For a link whose derivative is periodic with period eta (or constant,
/// the degenerate case), with s/eta or t/eta integral, constructs a margin
/// epsilon in (0, (s-t)/4] such that
///   inf [G(s - eps + a) - G(a)] > sup [G(t + eps + x) - G(x)] > 0,
/// via the margin Delta of the relevant shifted-increment optimum and a
/// Lipschitz bound kappa on G: eps = min{1, (s-t)/4, Delta/(4 kappa)}.
/// The inequality is re-verified on a dense grid; returns nothing if that
/// verification fails.
std::optional<double> find_epsilon(const links::Link& link, double s,
                                   double t);

struct HullOptions {
  std::optional<Window> window;
  double margin = 1e-3;
  AlphaGrid grid{};
};

/// Dispatcher: tries certify_disjoint first (swapping so the larger shift
/// plays s; skipped unless both shifts are positive and distinct), then
/// certify_intersect; returns the first definitive verdict, else Unknown.
HullCertificate hull_status(const links::Link& link, double s, double t,
                            const HullOptions& opts = {});

}  // namespace sspanel::geometry
