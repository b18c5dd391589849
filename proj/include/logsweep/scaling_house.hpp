#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "logsweep/cadlag_path.hpp"
#include "logsweep/core/errors.hpp"
#include "logsweep/core/numeric.hpp"
#include "logsweep/gw_branching.hpp"
#include "logsweep/model_params.hpp"
#include "logsweep/moran.hpp"
#include "logsweep/sweep_io.hpp"

namespace logsweep {

/// The limit shape (h0, h1): h1 jumps from 0 to b at t1 = 0 and climbs with
/// slope a to 1 at the ridge (1-b)/a; h0 stays at 1 until the ridge, falls with
/// slope a to b and jumps to 0 at t0 = 2(1-b)/a.
struct House {
  double a;
  double b;

  House(double a_, double b_) : a(a_), b(b_) {
    require(a_ > 0.0, "house slope a must be > 0");
    require(b_ >= 0.0 && b_ < 1.0, "house jump height b must lie in [0, 1)");
  }
  explicit House(const ModelParams& p) : House(p.a(), p.b()) {}

  double ridge() const noexcept { return (1.0 - b) / a; }
  double t0() const noexcept { return 2.0 * (1.0 - b) / a; }
};

/// Exact value of h_which(t), right-continuous at the walls.
inline double house_eval(const House& h, int which, double t) {
  require(which == 0 || which == 1, "which must be 0 or 1");
  if (which == 1) {
    if (t < 0.0) return 0.0;
    if (t < h.ridge()) return std::min(1.0, h.b + h.a * t);
    return 1.0;
  }
  if (t < h.ridge()) return 1.0;
  if (t < h.t0()) return std::clamp(2.0 - (h.b + h.a * t), 0.0, 1.0);
  return 0.0;
}

/// h_which on [alpha, beta] as a CadlagPath. The left value at alpha is h(alpha-).
inline CadlagPath house_path(const House& h, int which, double alpha, double beta) {
  require(which == 0 || which == 1, "which must be 0 or 1");
  require(alpha < beta, "house window needs alpha < beta");
  std::vector<double> cuts = which == 1 ? std::vector<double>{0.0, h.ridge()} : std::vector<double>{h.ridge(), h.t0()};
  auto left = [&](double t) {
    // Left limits: the only discontinuities are the walls.
    if (which == 1 && t == 0.0) return 0.0;
    if (which == 0 && t == h.t0()) return h.b;
    return house_eval(h, which, t);
  };
  std::vector<Knot> k;
  k.push_back({alpha, left(alpha), house_eval(h, which, alpha)});
  for (double c : cuts) {
    if (c > alpha && c < beta) k.push_back({c, left(c), house_eval(h, which, c)});
  }
  k.push_back({beta, left(beta), house_eval(h, which, beta)});
  return CadlagPath(std::move(k));
}

namespace detail {

/// Step path t -> log_N^+(count(t * scale)) on [alpha, beta] from (time,
/// count) breakpoints starting at time 0. `before` is the value for t < 0;
/// after the last breakpoint the count is held.
template <class Points, class Count>
CadlagPath log_step_path(const Points& pts, Count count_of, double log_n, double scale, double before,
                         double alpha, double beta) {
  require(alpha < beta, "window needs alpha < beta");
  require(!pts.empty(), "empty path");
  auto val = [&](std::int64_t c) { return log_base_plus(static_cast<double>(c), log_n); };
  // State just before alpha and at alpha.
  std::size_t i = 0;
  double left_alpha = before;
  double current = before;
  if (alpha >= 0.0) {
    while (i < pts.size() && pts[i].time / scale < alpha) left_alpha = val(count_of(pts[i++]));
    current = left_alpha;
    while (i < pts.size() && pts[i].time / scale == alpha) current = val(count_of(pts[i++]));
  }
  std::vector<Knot> k;
  k.push_back({alpha, left_alpha, current});
  for (; i < pts.size(); ++i) {
    const double t = pts[i].time / scale;
    if (t > beta) break;
    const double v = val(count_of(pts[i]));
    if (v == current) continue;
    if (t == k.back().t) {
      k.back().right = v;
    } else {
      k.push_back({t, current, v});
    }
    current = v;
  }
  if (k.back().t < beta) k.push_back({beta, current, current});
  return CadlagPath(std::move(k));
}

}  // namespace detail

/// H_which(t) = log_N^+(X_which(t phi^{-1} log N)) on [alpha, beta], with
/// (H0, H1) = (1, 0) for t < 0.
inline CadlagPath rescale(const SweepPath& path, const ModelParams& p, int which, double alpha, double beta) {
  require(which == 0 || which == 1, "which must be 0 or 1");
  require(path.n == p.n(), "path and parameters disagree on N");
  const std::int64_t n = p.n();
  auto count = [which, n](const SweepPoint& pt) { return which == 0 ? pt.residents : n - pt.residents; };
  return detail::log_step_path(path.points, count, p.log_n(), p.time_scale(), which == 0 ? 1.0 : 0.0, alpha,
                               beta);
}

/// log_N^+(Z(t phi^{-1} log N)) on [alpha, beta] for a branching path, with
/// value `before` for t < 0.
inline CadlagPath rescale_gw(const GwPath& path, const ModelParams& p, double before, double alpha, double beta) {
  return detail::log_step_path(path.points, [](const GwPoint& pt) { return pt.size; }, p.log_n(),
                               p.time_scale(), before, alpha, beta);
}

/// Default window [-eps, 2(1-b)/a + 3 eps].
struct Window {
  double alpha;
  double beta;
};
inline Window default_window(const House& h, double eps = 0.1) { return {-eps, h.t0() + 3.0 * eps}; }

/// sup over D_which^eps (intersected with the common window) of |f - g|, where
/// D_1 = R \ [0, eps) and D_0 = R \ (t0 - eps, t0 + eps).
inline double sup_distance_restricted(const CadlagPath& f, const CadlagPath& g, int which, double eps,
                                      const House& house) {
  require(which == 0 || which == 1, "which must be 0 or 1");
  require(eps > 0.0, "eps must be > 0");
  const double lo = std::max(f.alpha(), g.alpha());
  const double hi = std::min(f.beta(), g.beta());
  require(lo <= hi, "paths have disjoint windows");
  const double cut_lo = which == 1 ? 0.0 : house.t0() - eps;
  const double cut_hi = which == 1 ? eps : house.t0() + eps;
  // Pieces [lo, cut_lo) (or [lo, cut_lo] for D0) and [cut_hi, hi] (or (cut_hi, hi]).
  double sup = -1.0;
  if (lo < cut_lo || (which == 0 && lo <= cut_lo)) {
    sup = std::max(sup, sup_abs_diff(f, g, {lo, std::min(cut_lo, hi), which == 0 || cut_lo > hi}));
  }
  if (cut_hi <= hi) {
    // For D0 the point t0 + eps itself is excluded, but right-continuity makes
    // the sup over (t0 + eps, hi] equal to the one over [t0 + eps, hi].
    sup = std::max(sup, sup_abs_diff(f, g, {std::max(cut_hi, lo), hi, true}));
  }
  require(sup >= 0.0, "restricted set is empty inside the window");
  return sup;
}

/// Rescaled fixation time T_fix / (phi^{-1} log N).
inline double fixation_time_rescaled(const SweepPath& path, const ModelParams& p) {
  require(path.terminal == Terminal::fixation, "fixation_time_rescaled needs a fixation path");
  return path.fixation_time() / p.time_scale();
}

struct PhaseBoundaries {
  double tau23;
  double tau34;
};

/// Rescaled first passage times of the mutant levels floor(N / log N) and
/// floor(N(1 - 1/sqrt log N)).
inline PhaseBoundaries phase_boundaries(const SweepPath& path, const ModelParams& p) {
  require(path.terminal == Terminal::fixation, "phase_boundaries needs a fixation path");
  const double t23 = mutant_hitting_time(path, log_level(p));
  const double t34 = mutant_hitting_time(path, handover_level(p));
  if (!std::isfinite(t23) || !std::isfinite(t34)) throw Error("fixation path never hit a phase level");
  return {t23 / p.time_scale(), t34 / p.time_scale()};
}

/// Levels to pass to RecordSpec::level_hits for phase_boundaries.
inline std::vector<std::int64_t> phase_levels(const ModelParams& p) { return {log_level(p), handover_level(p)}; }

/// Plot table: t, H0, H1, h0, h1 at every breakpoint of H0 and H1 (right
/// values), thinned to at most max_rows rows.
inline void write_house_csv(std::ostream& out, const CadlagPath& h0_emp, const CadlagPath& h1_emp, const House& h,
                            std::size_t max_rows = 20000) {
  std::vector<double> ts;
  for (const auto& k : h0_emp.knots()) ts.push_back(k.t);
  for (const auto& k : h1_emp.knots()) ts.push_back(k.t);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  const std::size_t stride = ts.size() > max_rows ? (ts.size() + max_rows - 1) / max_rows : 1;
  const double lo = std::max(h0_emp.alpha(), h1_emp.alpha());
  const double hi = std::min(h0_emp.beta(), h1_emp.beta());
  out << "t,H0,H1,h0,h1\n";
  for (std::size_t i = 0; i < ts.size(); i += stride) {
    const double t = ts[i];
    if (t < lo || t > hi) continue;
    out << format_double(t) << ',' << format_double(h0_emp.value(t)) << ',' << format_double(h1_emp.value(t))
        << ',' << format_double(house_eval(h, 0, t)) << ',' << format_double(house_eval(h, 1, t)) << '\n';
  }
}

}  // namespace logsweep
