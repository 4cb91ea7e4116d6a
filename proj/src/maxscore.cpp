#include "sspanel/maxscore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sspanel/errors.hpp"
#include "sspanel/exact_sign.hpp"
#include "sspanel/rng.hpp"

namespace sspanel::maxscore {

namespace {

using exact_sign::det2;
using exact_sign::det3;
using exact_sign::dot2;
using exact_sign::dot3;

inline int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

/// Exact sign of w'q for k <= 3 (exact predicates); compensated
/// floating-point summation decides larger k.
int sign_wq(const double* w, const double* q, int k) {
  switch (k) {
    case 1:
      return sign_of(w[0]) * sign_of(q[0]);
    case 2:
      return dot2(w[0], w[1], q[0], q[1]);
    case 3:
      return dot3(w, q);
    default: {
      double s = 0.0, comp = 0.0;  // Neumaier-compensated dot product
      for (int j = 0; j < k; ++j) {
        const double prod = w[j] * q[j];
        const double t = s + prod;
        comp += (std::fabs(s) >= std::fabs(prod)) ? (s - t) + prod : (prod - t) + s;
        s = t;
      }
      return sign_of(s + comp);
    }
  }
}

/// Scales q by the power of two bringing its norm nearest 1. The scaling
/// is exact componentwise, so inner-product signs — zeros included — are
/// preserved in real arithmetic.
Eigen::VectorXd pot_unit(const Eigen::VectorXd& q) {
  const double norm = q.norm();
  if (!(norm > 0.0)) throw InternalError("pot_unit: zero direction");
  const int e = static_cast<int>(std::lround(std::log2(norm)));
  return q * std::ldexp(1.0, -e);
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

struct BestCell {
  bool has = false;
  long long num = 0;
  Eigen::VectorXd q;
  std::vector<int> pattern;
};

/// Candidate intake with the first-by-lexicographic-representative rule
/// among value ties; the pattern is materialized only on acceptance.
template <class PatternFn>
void offer(BestCell& best, long long num, const Eigen::VectorXd& q, PatternFn&& fn) {
  if (best.has) {
    if (num < best.num) return;
    if (num == best.num && !lex_less(q, best.q)) return;
  }
  best.has = true;
  best.num = num;
  best.q = q;
  best.pattern = fn();
}

inline long long contrib(int s, long long p, long long z) {
  return s > 0 ? p : (s == 0 ? z : 0);
}

// ---------------------------------------------------------------------------
// One column: two cells.
// ---------------------------------------------------------------------------

void solve_k1(const Eigen::MatrixXd& v, const std::vector<long long>& p,
              const std::vector<long long>& z, long long base, BestCell& best,
              long long& cells) {
  const int n = static_cast<int>(v.rows());
  for (const int qs : {-1, +1}) {
    long long num = base;
    std::vector<int> pat(n);
    for (int i = 0; i < n; ++i) {
      pat[i] = sign_of(v(i, 0)) * qs;
      num += contrib(pat[i], p[i], z[i]);
    }
    Eigen::VectorXd q(1);
    q[0] = qs;
    offer(best, num, q, [&] { return pat; });
    ++cells;
  }
}

// ---------------------------------------------------------------------------
// Two columns: circular sweep over the ray arrangement.
// ---------------------------------------------------------------------------

struct RayEvent {
  double x, y;                              // exact direction of the ray
  std::vector<std::pair<int, int>> mem;     // (row, orientation)
};

void solve_k2(const Eigen::MatrixXd& v, const std::vector<long long>& p,
              const std::vector<long long>& z, long long base, BestCell& best,
              long long& cells) {
  const int n = static_cast<int>(v.rows());

  struct Ray {
    double x, y;
    int row, orient;
  };
  std::vector<Ray> rays;
  rays.reserve(2 * n);
  for (int i = 0; i < n; ++i) {
    const double vx = v(i, 0), vy = v(i, 1);
    rays.push_back({-vy, vx, i, +1});
    rays.push_back({vy, -vx, i, -1});
  }

  // Exact circular order: split at the positive x-axis, compare within a
  // half-turn by the exact cross-product sign.
  const auto half = [](double x, double y) {
    return (y > 0.0 || (y == 0.0 && x > 0.0)) ? 0 : 1;
  };
  const auto ray_less = [&](const Ray& r1, const Ray& r2) {
    const int h1 = half(r1.x, r1.y), h2 = half(r2.x, r2.y);
    if (h1 != h2) return h1 < h2;
    return det2(r1.x, r1.y, r2.x, r2.y) > 0;
  };
  std::sort(rays.begin(), rays.end(), ray_less);

  std::vector<RayEvent> ev;
  for (const Ray& r : rays) {
    if (!ev.empty() && half(ev.back().x, ev.back().y) == half(r.x, r.y) &&
        det2(ev.back().x, ev.back().y, r.x, r.y) == 0) {
      ev.back().mem.emplace_back(r.row, r.orient);
    } else {
      ev.push_back({r.x, r.y, {{r.row, r.orient}}});
    }
  }
  const int m = static_cast<int>(ev.size());

  // Signs at the first ray, from scratch and exactly.
  std::vector<int> s(n);
  long long val = base;
  for (int j = 0; j < n; ++j) {
    s[j] = dot2(v(j, 0), v(j, 1), ev[0].x, ev[0].y);
    val += contrib(s[j], p[j], z[j]);
  }
  const long long val_start = val;
  const auto snapshot = [&] { return s; };

  const auto ray_rep = [](const RayEvent& e) {
    Eigen::VectorXd q(2);
    q << e.x, e.y;
    return pot_unit(q);
  };
  const auto arc_rep = [](const RayEvent& a, const RayEvent& b) {
    Eigen::Vector2d u1(a.x, a.y), u2(b.x, b.y);
    u1.normalize();
    u2.normalize();
    Eigen::Vector2d mid = u1 + u2;
    if (mid.norm() < 1e-9) mid = Eigen::Vector2d(-u1.y(), u1.x());
    mid.normalize();
    Eigen::VectorXd q(2);
    q << mid.x(), mid.y();
    return q;
  };

  for (int e = 0; e < m; ++e) {
    if (e > 0) {
      // Enter the ray: member rows drop from their approach sign to zero.
      for (const auto& [row, o] : ev[e].mem) {
        if (s[row] != o) throw InternalError("cell sweep: unexpected approach sign");
        val += z[row] - (o > 0 ? p[row] : 0);
        s[row] = 0;
      }
    }
    offer(best, val, ray_rep(ev[e]), snapshot);
    ++cells;

    // Leave into the following open arc: member rows cross to the far side.
    for (const auto& [row, o] : ev[e].mem) {
      val += (o < 0 ? p[row] : 0) - z[row];
      s[row] = -o;
    }
    offer(best, val, arc_rep(ev[e], ev[(e + 1) % m]), snapshot);
    ++cells;
  }

  // Close the circle and verify the incremental bookkeeping drifted nowhere.
  for (const auto& [row, o] : ev[0].mem) {
    if (s[row] != o) throw InternalError("cell sweep: unexpected wraparound sign");
    val += z[row] - (o > 0 ? p[row] : 0);
    s[row] = 0;
  }
  if (val != val_start) throw InternalError("cell sweep: value drift around the circle");
}

// ---------------------------------------------------------------------------
// Three columns: vertex-centred enumeration over parallel classes.
// ---------------------------------------------------------------------------

struct K3Class {
  double u[3];                           // representative direction
  std::vector<std::pair<int, int>> mem;  // (row, sign relative to u)
  long long pp = 0, pm = 0, zp = 0, zm = 0;
};

inline long long class_contrib(const K3Class& c, int s) {
  return s > 0 ? c.pp : (s == 0 ? c.zp + c.zm : c.pm);
}

/// Sign of component m of the cross product u x w, via exact 2x2
/// determinants of coordinates.
int cross_comp_sign(const double* u, const double* w, int m) {
  switch (m) {
    case 0:
      return det2(u[1], u[2], w[1], w[2]);
    case 1:
      return det2(u[2], u[0], w[2], w[0]);
    default:
      return det2(u[0], u[1], w[0], w[1]);
  }
}

void solve_k3(const Eigen::MatrixXd& v, const std::vector<long long>& p,
              const std::vector<long long>& z, long long base, BestCell& best,
              long long& cells) {
  const int n = static_cast<int>(v.rows());

  // Group rows into exact parallel classes.
  std::vector<K3Class> cls;
  for (int i = 0; i < n; ++i) {
    const double w[3] = {v(i, 0), v(i, 1), v(i, 2)};
    int found = -1;
    for (int c = 0; c < static_cast<int>(cls.size()) && found < 0; ++c) {
      if (cross_comp_sign(cls[c].u, w, 0) == 0 && cross_comp_sign(cls[c].u, w, 1) == 0 &&
          cross_comp_sign(cls[c].u, w, 2) == 0) {
        found = c;
      }
    }
    if (found < 0) {
      K3Class nc;
      nc.u[0] = w[0];
      nc.u[1] = w[1];
      nc.u[2] = w[2];
      cls.push_back(nc);
      found = static_cast<int>(cls.size()) - 1;
    }
    K3Class& c = cls[found];
    int ax = 0;
    while (c.u[ax] == 0.0) ++ax;
    const int rho = sign_of(w[ax]) * sign_of(c.u[ax]);
    c.mem.emplace_back(i, rho);
    if (rho > 0) {
      c.pp += p[i];
      c.zp += z[i];
    } else {
      c.pm += p[i];
      c.zm += z[i];
    }
  }
  const int nc = static_cast<int>(cls.size());

  const auto expand = [&](const std::vector<int>& sc) {
    std::vector<int> pat(n);
    for (int c = 0; c < nc; ++c) {
      for (const auto& [row, rho] : cls[c].mem) pat[row] = sc[c] * rho;
    }
    return pat;
  };
  const auto value_of = [&](const std::vector<int>& sc) {
    long long num = base;
    for (int c = 0; c < nc; ++c) num += class_contrib(cls[c], sc[c]);
    return num;
  };

  if (nc == 1) {
    const Eigen::Vector3d u(cls[0].u[0], cls[0].u[1], cls[0].u[2]);
    // Exact in-plane representative: a coordinate perpendicular.
    const Eigen::Vector3d perp_cands[3] = {
        {-u.y(), u.x(), 0.0}, {0.0, -u.z(), u.y()}, {u.z(), 0.0, -u.x()}};
    int bi = 0;
    for (int t = 1; t < 3; ++t) {
      if (perp_cands[t].norm() > perp_cands[bi].norm()) bi = t;
    }
    const struct {
      int s;
      Eigen::Vector3d q;
    } cands[3] = {{+1, u}, {0, perp_cands[bi]}, {-1, -u}};
    for (const auto& cand : cands) {
      const std::vector<int> sc{cand.s};
      offer(best, value_of(sc), pot_unit(cand.q), [&] { return expand(sc); });
      ++cells;
    }
    return;
  }

  // At least two classes: every cell of the arrangement touches a vertex
  // formed by two class planes, so sweeping (vertex, adjacent arcs,
  // adjacent faces) over all class pairs and both vertex signs covers
  // every sign pattern.
  std::vector<int> theta(nc), sc(nc);
  for (int a = 0; a < nc; ++a) {
    for (int b = a + 1; b < nc; ++b) {
      const double* ua = cls[a].u;
      const double* ub = cls[b].u;
      int mco = 0;
      int sgm = cross_comp_sign(ua, ub, 0);
      if (sgm == 0) {
        sgm = cross_comp_sign(ua, ub, 1);
        mco = 1;
      }
      if (sgm == 0) {
        sgm = cross_comp_sign(ua, ub, 2);
        mco = 2;
      }
      const Eigen::Vector3d uva(ua[0], ua[1], ua[2]), uvb(ub[0], ub[1], ub[2]);
      const Eigen::Vector3d g0 = uva.cross(uvb);

      for (const int sigma : {+1, -1}) {
        for (int c = 0; c < nc; ++c) {
          theta[c] = (c == a || c == b) ? 0 : sigma * det3(cls[c].u, ua, ub);
        }
        const Eigen::VectorXd gs = pot_unit(static_cast<double>(sigma) * g0);

        // Vertex cell: both defining classes pinned to zero.
        std::copy(theta.begin(), theta.end(), sc.begin());
        sc[a] = sc[b] = 0;
        offer(best, value_of(sc), gs, [&] { return expand(sc); });
        ++cells;

        // Arcs within each defining plane, and the faces beside them.
        for (const int alpha : {a, b}) {
          const Eigen::Vector3d ualpha(cls[alpha].u[0], cls[alpha].u[1], cls[alpha].u[2]);
          const Eigen::VectorXd hs = pot_unit(ualpha.cross(Eigen::Vector3d(gs)));
          const Eigen::VectorXd us = pot_unit(ualpha);
          for (const int tau : {+1, -1}) {
            for (int c = 0; c < nc; ++c) {
              if (c == alpha) {
                sc[c] = 0;
              } else if (theta[c] != 0) {
                sc[c] = theta[c];
              } else {
                sc[c] = tau * sigma * cross_comp_sign(cls[c].u, cls[alpha].u, mco) * sgm;
              }
            }
            const long long arc_val = value_of(sc);
            const Eigen::VectorXd q_arc = gs + (tau * 0x1.0p-8) * hs;
            offer(best, arc_val, q_arc, [&] { return expand(sc); });
            ++cells;
            for (const int nu : {+1, -1}) {
              sc[alpha] = nu;
              const long long face_val =
                  arc_val - class_contrib(cls[alpha], 0) + class_contrib(cls[alpha], nu);
              const Eigen::VectorXd q_face = q_arc + (nu * 0x1.0p-16) * us;
              offer(best, face_val, q_face, [&] { return expand(sc); });
              ++cells;
              sc[alpha] = 0;
            }
          }
        }
      }
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Core entry: weight folding, dispatch, result assembly.
// ---------------------------------------------------------------------------

CellResult maximize_cells(const Eigen::MatrixXd& rows,
                          const std::vector<long long>& plus_w,
                          const std::vector<long long>& zero_w, long long base,
                          long long k3_row_cap) {
  const int n_in = static_cast<int>(rows.rows());
  const int k = static_cast<int>(rows.cols());
  if (k < 1 || k > 3) {
    throw CapacityError(
        "exact cell enumeration supports 1 to 3 columns; use a search method");
  }
  if (static_cast<int>(plus_w.size()) != n_in || static_cast<int>(zero_w.size()) != n_in) {
    throw ConfigError("maximize_cells: weight vectors must match the row count");
  }

  // Fold identically-zero rows (their sign is 0 everywhere) and set aside
  // rows carrying no weight (they cannot move any value).
  std::vector<int> src;
  std::vector<char> is_zero_row(n_in, 0), is_dropped(n_in, 0);
  for (int i = 0; i < n_in; ++i) {
    bool zero = true;
    for (int j = 0; j < k; ++j) zero = zero && rows(i, j) == 0.0;
    if (zero) {
      base += zero_w[i];
      is_zero_row[i] = 1;
    } else if (plus_w[i] == 0 && zero_w[i] == 0) {
      is_dropped[i] = 1;
    } else {
      src.push_back(i);
    }
  }
  const int n_eff = static_cast<int>(src.size());
  if (k == 3 && n_eff > k3_row_cap) {
    std::ostringstream os;
    os << "three-column exact enumeration is capped at " << k3_row_cap
       << " effective rows (got " << n_eff << "); raise the cap or use a search method";
    throw CapacityError(os.str());
  }

  Eigen::MatrixXd v(n_eff, k);
  std::vector<long long> p(n_eff), z(n_eff);
  for (int e = 0; e < n_eff; ++e) {
    v.row(e) = rows.row(src[e]);
    p[e] = plus_w[src[e]];
    z[e] = zero_w[src[e]];
  }

  BestCell best;
  long long cells = 0;
  if (n_eff == 0) {
    Eigen::VectorXd q = Eigen::VectorXd::Zero(k);
    q[0] = -1.0;  // lexicographically smallest unit candidate
    offer(best, base, q, [] { return std::vector<int>{}; });
    cells = 1;
  } else if (k == 1) {
    solve_k1(v, p, z, base, best, cells);
  } else if (k == 2) {
    solve_k2(v, p, z, base, best, cells);
  } else {
    solve_k3(v, p, z, base, best, cells);
  }

  CellResult out;
  out.best_num = best.num;
  out.argq = best.q;
  out.cells_visited = cells;
  out.pattern.assign(n_in, 0);
  for (int e = 0; e < n_eff; ++e) {
    out.pattern[src[e]] = best.pattern.empty() ? 0 : best.pattern[e];
  }
  for (int i = 0; i < n_in; ++i) {
    if (is_dropped[i]) {
      double wbuf[3], qbuf[3];
      for (int j = 0; j < k; ++j) {
        wbuf[j] = rows(i, j);
        qbuf[j] = out.argq[j];
      }
      out.pattern[i] = sign_wq(wbuf, qbuf, k);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Statistical wrappers.
// ---------------------------------------------------------------------------

namespace {

void validate_objective(const Eigen::MatrixXd& W, const Eigen::VectorXi& d) {
  if (W.rows() == 0) throw DegenerateDataError("score objective: empty sample");
  if (d.size() != W.rows()) {
    throw ConfigError("score objective: d must have one entry per row");
  }
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d[i] < -1 || d[i] > 1) {
      throw ConfigError("score objective: d entries must be -1, 0, or 1");
    }
  }
}

long long score_num_at(const Eigen::MatrixXd& W, const Eigen::VectorXi& d,
                       const Eigen::VectorXd& q) {
  const int k = static_cast<int>(W.cols());
  long long num = 0;
  std::vector<double> wbuf(k), qbuf(k);
  for (int j = 0; j < k; ++j) qbuf[j] = q[j];
  for (Eigen::Index i = 0; i < W.rows(); ++i) {
    for (int j = 0; j < k; ++j) wbuf[j] = W(i, j);
    if (sign_wq(wbuf.data(), qbuf.data(), k) >= 0) num += d[i];
  }
  return num;
}

CellResult weighted_search(const Eigen::MatrixXd& rows,
                           const std::vector<long long>& plus_w,
                           const std::vector<long long>& zero_w, long long base,
                           const MaxOptions& opts) {
  const int k = static_cast<int>(rows.cols());
  const int n = static_cast<int>(rows.rows());
  if (static_cast<int>(plus_w.size()) != n ||
      static_cast<int>(zero_w.size()) != n) {
    throw ConfigError("optimize_cells: weight vectors must match the row count");
  }
  if (opts.iterations < 1) throw ConfigError("search methods need iterations >= 1");

  rng::Stream dirs(opts.seed, 0, rng::kTagSearchDir);
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  const double golden_angle = 2.399963229728653;

  bool has = false;
  long long bnum = 0;
  Eigen::VectorXd bq;
  long long visited = 0;
  std::vector<double> wbuf(k), qbuf(k);
  const long long iters =
      (opts.method == Method::kGridSearch && k == 1) ? 2 : opts.iterations;
  for (long long it = 0; it < iters; ++it) {
    Eigen::VectorXd q(k);
    if (opts.method == Method::kRandomSearch || k > 3) {
      for (int j = 0; j < k; ++j) q[j] = dirs.next_normal();
      if (q.norm() == 0.0) continue;
      q.normalize();
    } else if (k == 1) {
      q[0] = it == 0 ? -1.0 : 1.0;
    } else if (k == 2) {
      const double th = kTwoPi * static_cast<double>(it) / static_cast<double>(iters);
      q << std::cos(th), std::sin(th);
    } else {
      const double zc = 1.0 - (2.0 * static_cast<double>(it) + 1.0) / static_cast<double>(iters);
      const double r = std::sqrt(std::max(0.0, 1.0 - zc * zc));
      const double ph = golden_angle * static_cast<double>(it);
      q << r * std::cos(ph), r * std::sin(ph), zc;
    }
    long long num = base;
    for (int j = 0; j < k; ++j) qbuf[j] = q[j];
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < k; ++j) wbuf[j] = rows(i, j);
      const int s = sign_wq(wbuf.data(), qbuf.data(), k);
      if (s > 0) {
        num += plus_w[i];
      } else if (s == 0) {
        num += zero_w[i];
      }
    }
    if (!has || num > bnum || (num == bnum && lex_less(q, bq))) {
      has = true;
      bnum = num;
      bq = q;
    }
    ++visited;
  }
  if (!has) throw InternalError("search produced no candidate directions");

  CellResult out;
  out.best_num = bnum;
  out.argq = bq;
  out.cells_visited = visited;
  out.pattern.resize(n);
  for (int j = 0; j < k; ++j) qbuf[j] = bq[j];
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) wbuf[j] = rows(i, j);
    out.pattern[i] = sign_wq(wbuf.data(), qbuf.data(), k);
  }
  return out;
}

MaxScoreResult search_optimum(const Eigen::MatrixXd& W, const Eigen::VectorXi& d,
                              const MaxOptions& opts) {
  const int n = static_cast<int>(W.rows());
  // The plain score is the weighted objective with both tie terms equal to
  // the outcome weight: 1{. > 0} + 1{. = 0} = 1{. >= 0}.
  std::vector<long long> p(n), z(n);
  for (int i = 0; i < n; ++i) p[i] = z[i] = d[i];
  CellResult cell = weighted_search(W, p, z, 0, opts);

  MaxScoreResult res;
  res.method = opts.method;
  res.num = cell.best_num;
  res.value = static_cast<double>(cell.best_num) / static_cast<double>(n);
  res.argq = std::move(cell.argq);
  res.cells_visited = cell.cells_visited;
  res.pattern = std::move(cell.pattern);
  return res;
}

}  // namespace

double rho_hat(const Eigen::MatrixXd& W, const Eigen::VectorXi& d,
               const Eigen::VectorXd& q) {
  validate_objective(W, d);
  if (q.size() != W.cols()) throw ConfigError("rho_hat: direction size mismatch");
  bool all_zero = true;
  for (Eigen::Index j = 0; j < q.size(); ++j) all_zero = all_zero && q[j] == 0.0;
  if (all_zero) throw DomainError("rho_hat: the zero direction is not admissible");
  return static_cast<double>(score_num_at(W, d, q)) / static_cast<double>(W.rows());
}

MaxScoreResult maximize(const Eigen::MatrixXd& W, const Eigen::VectorXi& d,
                        const MaxOptions& opts) {
  validate_objective(W, d);
  const int n = static_cast<int>(W.rows());
  const int k = static_cast<int>(W.cols());

  if (opts.method != Method::kExactArrangement) return search_optimum(W, d, opts);

  if (k > 3) {
    throw CapacityError(
        "exact arrangement supports at most 3 columns; use RandomSearch or GridSearch");
  }
  std::vector<long long> p(n), z(n);
  for (int i = 0; i < n; ++i) p[i] = z[i] = d[i];
  CellResult cell = maximize_cells(W, p, z, 0, opts.k3_row_cap);

  MaxScoreResult res;
  res.method = Method::kExactArrangement;
  res.num = cell.best_num;
  res.value = static_cast<double>(cell.best_num) / static_cast<double>(n);
  res.argq = cell.argq;
  res.cells_visited = cell.cells_visited;
  res.pattern = std::move(cell.pattern);

  // The optimum must be attained at the reported representative. For one
  // and two columns the representatives preserve boundary products
  // exactly; re-evaluate and insist.
  if (k <= 2 && score_num_at(W, d, res.argq) != res.num) {
    throw InternalError("optimal-cell representative failed re-evaluation");
  }
  return res;
}

MaxScoreResult minimize(const Eigen::MatrixXd& W, const Eigen::VectorXi& d,
                        const MaxOptions& opts) {
  const Eigen::VectorXi dn = -d;
  MaxScoreResult res = maximize(W, dn, opts);
  res.num = -res.num;
  res.value = static_cast<double>(res.num) / static_cast<double>(W.rows());
  return res;
}

CellResult optimize_cells(const Eigen::MatrixXd& rows,
                          const std::vector<long long>& plus_w,
                          const std::vector<long long>& zero_w, long long base,
                          const MaxOptions& opts) {
  if (opts.method == Method::kExactArrangement) {
    return maximize_cells(rows, plus_w, zero_w, base, opts.k3_row_cap);
  }
  return weighted_search(rows, plus_w, zero_w, base, opts);
}

}  // namespace sspanel::maxscore
