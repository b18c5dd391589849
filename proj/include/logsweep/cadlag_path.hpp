#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "logsweep/core/errors.hpp"

namespace logsweep {

/// Breakpoint of a cadlag path: left limit and value at time t.
struct Knot {
  double t;
  double left;
  double right;
};

/// Real-valued cadlag path on [alpha, beta] with finitely many breakpoints.
/// Between knots j and j+1 the path runs linearly from knots[j].right to
/// knots[j+1].left, so constant pieces have left_{j+1} == right_j. The first
/// knot sits at alpha and its left value is the value the path takes just
/// before the window (the extension convention); the last knot sits at beta.
class CadlagPath {
 public:
  CadlagPath() = default;

  explicit CadlagPath(std::vector<Knot> knots) : knots_(std::move(knots)) {
    require(knots_.size() >= 2, "a cadlag path needs at least two knots");
    for (std::size_t i = 0; i < knots_.size(); ++i) {
      require(std::isfinite(knots_[i].t) && std::isfinite(knots_[i].left) && std::isfinite(knots_[i].right),
              "cadlag knots must be finite");
      if (i > 0) require(knots_[i - 1].t < knots_[i].t, "cadlag knot times must be strictly increasing");
    }
  }

  /// Step function on [alpha, beta] with value `initial` on [alpha, first jump)
  /// and `steps` = (time, new value) pairs with times in (alpha, beta].
  static CadlagPath step(double alpha, double beta, double initial,
                         const std::vector<std::pair<double, double>>& steps, double before = NAN) {
    require(alpha < beta, "step path needs alpha < beta");
    std::vector<Knot> k;
    k.reserve(steps.size() + 2);
    k.push_back({alpha, std::isnan(before) ? initial : before, initial});
    double current = initial;
    for (const auto& [t, v] : steps) {
      require(t > k.back().t && t <= beta, "step times must be increasing inside (alpha, beta]");
      k.push_back({t, current, v});
      current = v;
    }
    if (k.back().t < beta) k.push_back({beta, current, current});
    return CadlagPath(std::move(k));
  }

  /// Continuous piecewise-linear path through (t, x) vertices.
  static CadlagPath linear(const std::vector<std::pair<double, double>>& vertices) {
    std::vector<Knot> k;
    k.reserve(vertices.size());
    for (const auto& [t, x] : vertices) k.push_back({t, x, x});
    return CadlagPath(std::move(k));
  }

  const std::vector<Knot>& knots() const noexcept { return knots_; }
  std::size_t size() const noexcept { return knots_.size(); }
  double alpha() const { return knots_.front().t; }
  double beta() const { return knots_.back().t; }

  /// f(t) for t in [alpha, beta].
  double value(double t) const {
    const std::size_t j = locate(t);
    const Knot& a = knots_[j];
    if (t == a.t || j + 1 == knots_.size()) return a.right;
    return interpolate(j, t);
  }

  /// f(t-) for t in (alpha, beta]; at alpha the extension value.
  double left_limit(double t) const {
    const std::size_t j = locate(t);
    if (t == knots_[j].t) return knots_[j].left;
    return interpolate(j, t);
  }

  CadlagPath shifted(double dt) const {
    std::vector<Knot> k = knots_;
    for (auto& x : k) x.t += dt;
    return CadlagPath(std::move(k));
  }

  /// Path plus a constant.
  CadlagPath offset(double c) const {
    std::vector<Knot> k = knots_;
    for (auto& x : k) {
      x.left += c;
      x.right += c;
    }
    return CadlagPath(std::move(k));
  }

  /// Restriction to [lo, hi] inside the domain. The left value at lo is the
  /// left limit of the original path there.
  CadlagPath restricted(double lo, double hi) const {
    require(lo < hi && lo >= alpha() && hi <= beta(), "restriction window must lie inside the domain");
    std::vector<Knot> k;
    k.push_back({lo, left_limit(lo), value(lo)});
    for (const auto& x : knots_) {
      if (x.t > lo && x.t < hi) k.push_back(x);
    }
    k.push_back({hi, left_limit(hi), value(hi)});
    return CadlagPath(std::move(k));
  }

 private:
  // Index of the last knot with knot.t <= t.
  std::size_t locate(double t) const {
    require(t >= alpha() && t <= beta(), "time outside the path's domain");
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t, [](double x, const Knot& k) { return x < k.t; });
    return static_cast<std::size_t>(it - knots_.begin()) - 1;
  }

  double interpolate(std::size_t j, double t) const {
    const Knot& a = knots_[j];
    const Knot& b = knots_[j + 1];
    if (a.right == b.left) return a.right;
    const double w = (t - a.t) / (b.t - a.t);
    return a.right + w * (b.left - a.right);
  }

  std::vector<Knot> knots_;
};

/// Time interval [lo, hi] or [lo, hi). Whether lo itself belongs to it never
/// changes a sup of a right-continuous path, so only hi carries a flag.
struct TimeInterval {
  double lo;
  double hi;
  bool hi_closed = true;
};

/// sup over t in the interval (intersected with both domains) of |f(t) - g(t)|.
/// Exact: f - g is linear between merged breakpoints, so the sup is reached at
/// a breakpoint value or one-sided limit. Returns -1 for an empty set.
inline double sup_abs_diff(const CadlagPath& f, const CadlagPath& g, const TimeInterval& iv) {
  const double lo = std::max({iv.lo, f.alpha(), g.alpha()});
  const double hi = std::min({iv.hi, f.beta(), g.beta()});
  const bool hi_closed = iv.hi_closed || hi < iv.hi;
  if (lo > hi || (lo == hi && !hi_closed)) return -1.0;
  double sup = 0.0;
  auto take = [&sup](double v) { sup = std::max(sup, std::fabs(v)); };
  if (lo == hi) {
    take(f.value(lo) - g.value(lo));
    return sup;
  }
  take(f.value(lo) - g.value(lo));
  std::vector<double> cuts;
  for (const auto& k : f.knots()) {
    if (k.t > lo && k.t < hi) cuts.push_back(k.t);
  }
  for (const auto& k : g.knots()) {
    if (k.t > lo && k.t < hi) cuts.push_back(k.t);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (double t : cuts) {
    take(f.left_limit(t) - g.left_limit(t));
    take(f.value(t) - g.value(t));
  }
  take(f.left_limit(hi) - g.left_limit(hi));
  if (hi_closed) take(f.value(hi) - g.value(hi));
  return sup;
}

/// sup over the whole common domain.
inline double sup_abs_diff(const CadlagPath& f, const CadlagPath& g) {
  return sup_abs_diff(f, g, {std::max(f.alpha(), g.alpha()), std::min(f.beta(), g.beta())});
}

}  // namespace logsweep
