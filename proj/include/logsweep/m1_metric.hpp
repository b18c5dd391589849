#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "logsweep/cadlag_path.hpp"
#include "logsweep/core/errors.hpp"

namespace logsweep {

struct Point2 {
  double t;
  double x;
};

/// Distance in the max norm on R^2, the norm under which the M1 distance is
/// the Frechet distance of extended graphs.
inline double dist_inf(const Point2& a, const Point2& b) noexcept {
  return std::max(std::fabs(a.t - b.t), std::fabs(a.x - b.x));
}

/// Graph of a cadlag path with vertical segments filling its jumps, as a
/// polyline in the order of the graph. A jump at the first knot (left value
/// differing from the value at alpha) becomes a vertical segment at alpha.
struct ExtendedGraph {
  std::vector<Point2> pts;

  double length() const {
    double len = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) len += std::hypot(pts[i].t - pts[i - 1].t, pts[i].x - pts[i - 1].x);
    return len;
  }
};

inline ExtendedGraph extended_graph(const CadlagPath& f) {
  ExtendedGraph g;
  g.pts.reserve(2 * f.size());
  for (const auto& k : f.knots()) {
    g.pts.push_back({k.t, k.left});
    if (k.right != k.left) g.pts.push_back({k.t, k.right});
  }
  // Collinear interior vertices of flat runs carry no information.
  std::vector<Point2> kept;
  kept.reserve(g.pts.size());
  for (const auto& p : g.pts) {
    if (kept.size() >= 2) {
      const Point2& a = kept[kept.size() - 2];
      const Point2& b = kept.back();
      const bool flat = a.x == b.x && b.x == p.x;
      const bool vertical = a.t == b.t && b.t == p.t && ((a.x <= b.x && b.x <= p.x) || (a.x >= b.x && b.x >= p.x));
      if (flat || vertical) kept.back() = p;
      else kept.push_back(p);
    } else if (kept.empty() || kept.back().t != p.t || kept.back().x != p.x) {
      kept.push_back(p);
    }
  }
  g.pts = std::move(kept);
  return g;
}

/// Parametric representation sampled at u_k = k/(n-1): points on the
/// extended graph traversed at constant (Euclidean) speed. arclength[k] is the
/// graph position of sample k, so monotonicity in the graph order is
/// monotonicity of arclength.
struct ParamRep {
  std::vector<double> u;
  std::vector<Point2> pts;
  std::vector<double> arclength;

  bool is_monotone() const {
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (arclength[i] < arclength[i - 1] || pts[i].t < pts[i - 1].t) return false;
    }
    return true;
  }
};

inline ParamRep uniform_speed_param(const ExtendedGraph& g, std::size_t n) {
  require(n >= 2, "uniform_speed_param needs n >= 2");
  require(!g.pts.empty(), "empty extended graph");
  std::vector<double> cum(g.pts.size(), 0.0);
  for (std::size_t i = 1; i < g.pts.size(); ++i) {
    cum[i] = cum[i - 1] + std::hypot(g.pts[i].t - g.pts[i - 1].t, g.pts[i].x - g.pts[i - 1].x);
  }
  ParamRep rep;
  const double total = cum.back();
  if (total == 0.0) {
    rep.u = {0.0};
    rep.pts = {g.pts.front()};
    rep.arclength = {0.0};
    return rep;
  }
  rep.u.reserve(n);
  rep.pts.reserve(n);
  rep.arclength.reserve(n);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double u = static_cast<double>(k) / static_cast<double>(n - 1);
    const double s = k + 1 == n ? total : total * u;
    while (seg + 2 < g.pts.size() && cum[seg + 1] < s) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double w = len > 0.0 ? std::clamp((s - cum[seg]) / len, 0.0, 1.0) : 0.0;
    const Point2& a = g.pts[seg];
    const Point2& b = g.pts[seg + 1];
    rep.u.push_back(u);
    rep.pts.push_back(k + 1 == n ? g.pts.back() : Point2{a.t + w * (b.t - a.t), a.x + w * (b.x - a.x)});
    rep.arclength.push_back(s);
  }
  return rep;
}

namespace detail {

struct Interval {
  double lo = 1.0;
  double hi = 0.0;
  bool empty() const noexcept { return lo > hi; }
};

/// {lambda in [0,1] : |a + lambda (b - a) - q|_inf <= eps}.
inline Interval free_interval(const Point2& a, const Point2& b, const Point2& q, double eps) {
  Interval out{0.0, 1.0};
  auto clip = [&](double c, double d) {
    if (d == 0.0) {
      if (std::fabs(c) > eps) out = Interval{};
      return;
    }
    double l0 = (-eps - c) / d;
    double l1 = (eps - c) / d;
    if (l0 > l1) std::swap(l0, l1);
    out.lo = std::max(out.lo, l0);
    out.hi = std::min(out.hi, l1);
  };
  clip(a.t - q.t, b.t - a.t);
  if (!out.empty()) clip(a.x - q.x, b.x - a.x);
  return out;
}

/// Alt-Godau decision: is the Frechet distance of P and Q (max norm) <= eps?
/// Free space in each cell is convex for any norm, so reachable sets on cell
/// boundaries are intervals and one row sweep decides it in O(|P| |Q|).
inline bool frechet_at_most(const std::vector<Point2>& P, const std::vector<Point2>& Q, double eps) {
  const std::size_t n = P.size() - 1;
  const std::size_t m = Q.size() - 1;
  if (dist_inf(P.front(), Q.front()) > eps || dist_inf(P.back(), Q.back()) > eps) return false;
  if (n == 0) {
    for (const auto& q : Q) if (dist_inf(P[0], q) > eps) return false;
    return true;
  }
  if (m == 0) {
    for (const auto& p : P) if (dist_inf(p, Q[0]) > eps) return false;
    return true;
  }
  // bottom[i]: reachable part of the bottom edge of cell (i, j), P segment i at Q vertex j.
  std::vector<Interval> bottom(n);
  bool chain = true;
  for (std::size_t i = 0; i < n; ++i) {
    const Interval f = free_interval(P[i], P[i + 1], Q[0], eps);
    if (chain && !f.empty() && f.lo == 0.0) {
      bottom[i] = f;
      chain = f.hi == 1.0;
    } else {
      bottom[i] = Interval{};
      chain = false;
    }
  }
  bool left_chain = true;
  Interval right{};
  for (std::size_t j = 0; j < m; ++j) {
    // Left edge of cell (0, j): Q segment j at P vertex 0.
    Interval left{};
    const Interval f0 = free_interval(Q[j], Q[j + 1], P[0], eps);
    if (left_chain && !f0.empty() && f0.lo == 0.0) {
      left = f0;
      left_chain = f0.hi == 1.0;
    } else {
      left_chain = false;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Interval lf = free_interval(Q[j], Q[j + 1], P[i + 1], eps);
      const Interval bf = free_interval(P[i], P[i + 1], Q[j + 1], eps);
      Interval r{};
      if (!lf.empty()) {
        if (!bottom[i].empty()) r = lf;
        else if (!left.empty()) r = Interval{std::max(left.lo, lf.lo), lf.hi};
      }
      Interval top{};
      if (!bf.empty()) {
        if (!left.empty()) top = bf;
        else if (!bottom[i].empty()) top = Interval{std::max(bottom[i].lo, bf.lo), bf.hi};
      }
      bottom[i] = top;
      left = r;
    }
    right = left;
  }
  return (!bottom[n - 1].empty() && bottom[n - 1].hi == 1.0) || (!right.empty() && right.hi == 1.0);
}

/// Greedy simplification with a certificate: every replaced run of vertices
/// lies in an axis-parallel box of side <= delta, which also contains the
/// replacing chord, so the Frechet distance (max norm) to the input is <= delta.
inline std::vector<Point2> simplify_box(const std::vector<Point2>& pts, double delta) {
  if (pts.size() <= 2) return pts;
  std::vector<Point2> out;
  out.reserve(pts.size() / 4 + 2);
  out.push_back(pts[0]);
  std::size_t anchor = 0;
  double t_lo = pts[0].t, t_hi = pts[0].t, x_lo = pts[0].x, x_hi = pts[0].x;
  auto reset = [&](const Point2& p) {
    t_lo = t_hi = p.t;
    x_lo = x_hi = p.x;
  };
  auto grow = [&](const Point2& p) {
    t_lo = std::min(t_lo, p.t);
    t_hi = std::max(t_hi, p.t);
    x_lo = std::min(x_lo, p.x);
    x_hi = std::max(x_hi, p.x);
  };
  auto fits = [&]() { return t_hi - t_lo <= delta && x_hi - x_lo <= delta; };
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const double s0 = t_lo, s1 = t_hi, y0 = x_lo, y1 = x_hi;
    grow(pts[k]);
    if (fits()) continue;
    t_lo = s0, t_hi = s1, x_lo = y0, x_hi = y1;
    if (k - 1 > anchor) {
      out.push_back(pts[k - 1]);
      anchor = k - 1;
      reset(pts[k - 1]);
      grow(pts[k]);
      if (fits()) continue;
    }
    out.push_back(pts[k]);
    anchor = k;
    reset(pts[k]);
  }
  if (anchor != pts.size() - 1) out.push_back(pts.back());
  return out;
}

}  // namespace detail

struct M1Bracket {
  double lower;
  double upper;
};

/// Vertex count above which a graph is simplified before the Frechet search.
inline constexpr std::size_t kSimplifyAbove = 4096;

/// Certified bracket [lower, upper], upper - lower <= tol, around the M1
/// distance: the Frechet distance (max norm) between the extended graphs.
inline M1Bracket m1_distance(const CadlagPath& f, const CadlagPath& g, double tol) {
  require(tol > 0.0, "tol must be > 0");
  require(std::fabs(f.alpha() - g.alpha()) <= 1e-12 && std::fabs(f.beta() - g.beta()) <= 1e-12,
          "m1_distance needs paths on the same domain");
  const auto gf = extended_graph(f);
  const auto gg = extended_graph(g);
  const double delta = tol / 8.0;
  double slack = 0.0;
  std::vector<Point2> P = gf.pts;
  std::vector<Point2> Q = gg.pts;
  if (P.size() > kSimplifyAbove) {
    P = detail::simplify_box(P, delta);
    slack += delta;
  }
  if (Q.size() > kSimplifyAbove) {
    Q = detail::simplify_box(Q, delta);
    slack += delta;
  }
  if (P.size() < Q.size()) std::swap(P, Q);
  const double endpoint_lb = std::max(dist_inf(P.front(), Q.front()), dist_inf(P.back(), Q.back()));
  // Two explicit monotone matchings: run P against Q's start then Q against
  // P's end, or the mirror image.
  double hi_a = 0.0, hi_b = 0.0;
  for (const auto& p : P) hi_a = std::max(hi_a, dist_inf(p, Q.front()));
  for (const auto& q : Q) hi_a = std::max(hi_a, dist_inf(P.back(), q));
  for (const auto& q : Q) hi_b = std::max(hi_b, dist_inf(P.front(), q));
  for (const auto& p : P) hi_b = std::max(hi_b, dist_inf(p, Q.back()));
  double lo = endpoint_lb;
  double hi = std::min(hi_a, hi_b);
  if (!detail::frechet_at_most(P, Q, lo)) {
    const double width = tol - 2.0 * slack;
    while (hi - lo > width) {
      const double mid = 0.5 * (lo + hi);
      if (detail::frechet_at_most(P, Q, mid)) hi = mid;
      else lo = mid;
    }
  } else {
    hi = lo;
  }
  return {std::max(endpoint_lb, lo - slack), hi + slack};
}

namespace detail {

enum class Direction { up, down, none };

inline bool is_monotone(const CadlagPath& f, Direction dir) {
  auto ok = [dir](double a, double b) { return dir == Direction::up ? a <= b : a >= b; };
  const auto& k = f.knots();
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (!ok(k[i].left, k[i].right)) return false;
    if (i + 1 < k.size() && !ok(k[i].right, k[i + 1].left)) return false;
  }
  return true;
}

}  // namespace detail

/// sup |f - g| (left values at the domain start included) as an upper bound on
/// the M1 distance of two paths monotone in the same direction.
inline double m1_monotone_bound(const CadlagPath& f, const CadlagPath& g) {
  using detail::Direction;
  const bool up = detail::is_monotone(f, Direction::up) && detail::is_monotone(g, Direction::up);
  const bool down = detail::is_monotone(f, Direction::down) && detail::is_monotone(g, Direction::down);
  require(up || down, "m1_monotone_bound needs two paths monotone in the same direction");
  require(f.alpha() == g.alpha() && f.beta() == g.beta(), "m1_monotone_bound needs a common domain");
  double sup = std::fabs(f.knots().front().left - g.knots().front().left);
  return std::max(sup, sup_abs_diff(f, g));
}

/// Running maximum t -> max of f over [alpha, t]. Crossing points of rising
/// linear pieces become knots. The left value at alpha is kept.
inline CadlagPath running_max(const CadlagPath& f) {
  const auto& k = f.knots();
  std::vector<Knot> out;
  out.reserve(k.size() + 8);
  double m = k[0].right;
  out.push_back({k[0].t, k[0].left, m});
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    const double a = k[i].right;
    const double b = k[i + 1].left;
    if (b > m && a < m) {
      const double tc = k[i].t + (m - a) / (b - a) * (k[i + 1].t - k[i].t);
      if (tc > out.back().t && tc < k[i + 1].t) out.push_back({tc, m, m});
    }
    const double left = std::max(m, b);
    m = std::max(left, k[i + 1].right);
    out.push_back({k[i + 1].t, left, m});
  }
  return CadlagPath(std::move(out));
}

/// t -> max of f over [t, beta]: the running maximum of the time-reversed
/// path, read forward. Nonincreasing.
inline CadlagPath running_max_reversed(const CadlagPath& f) {
  const auto& k = f.knots();
  const std::size_t n = k.size();
  std::vector<Knot> rev;
  rev.reserve(n + 8);
  // Built backwards, then reversed.
  double g = k[n - 1].right;                // value at beta
  double g_left = std::max(k[n - 1].left, g);  // limit from the left at beta
  rev.push_back({k[n - 1].t, g_left, g});
  for (std::size_t i = n - 1; i-- > 0;) {
    // Piece on (t_i, t_{i+1}) runs from a = k[i].right to b = k[i+1].left.
    const double a = k[i].right;
    const double b = k[i + 1].left;
    const double after = g_left;  // max over [t, beta] for t just below t_{i+1}, from the right part
    if (a > after && b < after) {
      const double tc = k[i].t + (a - after) / (a - b) * (k[i + 1].t - k[i].t);
      if (tc > k[i].t && tc < rev.back().t) rev.push_back({tc, after, after});
    }
    const double at = std::max(a, after);
    g = at;
    g_left = std::max(k[i].left, g);
    rev.push_back({k[i].t, g_left, g});
  }
  std::reverse(rev.begin(), rev.end());
  return CadlagPath(std::move(rev));
}

}  // namespace logsweep
