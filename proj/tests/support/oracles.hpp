#pragma once

// Independent reference computations used only by the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "logsweep/core/rng.hpp"
#include "logsweep/m1_metric.hpp"

namespace oracle {

struct DenseFrechet {
  double value;
  /// Largest distance between consecutive samples on either curve.
  double spacing;
};

/// Arclength-equispaced samples with every vertex of the polyline kept.
inline std::vector<logsweep::Point2> dense_samples(const std::vector<logsweep::Point2>& pts, std::size_t n,
                                                   double& spacing) {
  double total = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) total += std::hypot(pts[i].t - pts[i - 1].t, pts[i].x - pts[i - 1].x);
  const double step = total > 0.0 ? total / static_cast<double>(n) : 1.0;
  std::vector<logsweep::Point2> out{pts.front()};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const auto& a = pts[i - 1];
    const auto& b = pts[i];
    const double len = std::hypot(b.t - a.t, b.x - a.x);
    const auto pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / step)));
    for (std::size_t k = 1; k <= pieces; ++k) {
      const double w = static_cast<double>(k) / static_cast<double>(pieces);
      out.push_back({a.t + w * (b.t - a.t), a.x + w * (b.x - a.x)});
    }
  }
  for (std::size_t i = 1; i < out.size(); ++i) spacing = std::max(spacing, std::hypot(out[i].t - out[i - 1].t, out[i].x - out[i - 1].x));
  return out;
}

/// Discrete Frechet distance (max norm) of dense samples of both extended
/// graphs. With all vertices among the samples it is an upper bound on the
/// continuous distance and exceeds it by at most the sample spacing.
inline DenseFrechet dense_frechet(const logsweep::CadlagPath& f, const logsweep::CadlagPath& g, std::size_t n) {
  double spacing = 0.0;
  const auto P = dense_samples(logsweep::extended_graph(f).pts, n, spacing);
  const auto Q = dense_samples(logsweep::extended_graph(g).pts, n, spacing);
  std::vector<double> prev(Q.size()), cur(Q.size());
  for (std::size_t i = 0; i < P.size(); ++i) {
    for (std::size_t j = 0; j < Q.size(); ++j) {
      const double d = logsweep::dist_inf(P[i], Q[j]);
      double best;
      if (i == 0 && j == 0) best = d;
      else if (i == 0) best = std::max(cur[j - 1], d);
      else if (j == 0) best = std::max(prev[j], d);
      else best = std::max(std::min({prev[j], prev[j - 1], cur[j - 1]}), d);
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  return {prev.back(), spacing};
}

/// Depth-first enumeration of nearest-neighbour paths from `start` that stay
/// in [lo, hi] until their first visit to `target` (outside [lo, hi]). Each
/// step multiplies two weights, one per law, and `visit(path, wp, wq)` sees
/// every complete path. Paths longer than max_len steps are dropped; their
/// mass is what the callers call the tail.
template <class StepP, class StepQ, class Visit>
void enumerate_paths(std::int64_t start, std::int64_t target, std::int64_t lo, std::int64_t hi, std::size_t max_len,
                     StepP&& step_p, StepQ&& step_q, Visit&& visit) {
  std::vector<std::int64_t> path{start};
  std::vector<double> wp{1.0}, wq{1.0};
  std::function<void()> dfs = [&]() {
    const std::int64_t k = path.back();
    if (k == target) {
      visit(path, wp.back(), wq.back());
      return;
    }
    if (path.size() > max_len) return;
    for (int dir : {+1, -1}) {
      const std::int64_t next = k + dir;
      if (next != target && (next < lo || next > hi)) continue;
      path.push_back(next);
      wp.push_back(wp.back() * step_p(k, dir));
      wq.push_back(wq.back() * step_q(k, dir));
      dfs();
      path.pop_back();
      wp.pop_back();
      wq.pop_back();
    }
  };
  dfs();
}

/// TV of two path laws coarsened to (enumerated path, or tail).
class LawComparison {
 public:
  void add(double p, double q) {
    diff_ += std::fabs(p - q);
    max_abs_ = std::max(max_abs_, std::fabs(p - q));
    mass_p_ += p;
    mass_q_ += q;
    ++paths_;
  }

  double tv() const { return 0.5 * (diff_ + std::fabs((1.0 - mass_p_) - (1.0 - mass_q_))); }
  double max_abs() const { return max_abs_; }
  double tail_p() const { return 1.0 - mass_p_; }
  double tail_q() const { return 1.0 - mass_q_; }
  std::size_t paths() const { return paths_; }

 private:
  double diff_ = 0.0;
  double max_abs_ = 0.0;
  double mass_p_ = 0.0;
  double mass_q_ = 0.0;
  std::size_t paths_ = 0;
};

/// Gambler's ruin: probability that a walk with up-probability p started at k
/// reaches n before 0.
inline double ruin_up(double p, std::int64_t k, std::int64_t n) {
  const double r = (1.0 - p) / p;
  if (r == 1.0) return static_cast<double>(k) / static_cast<double>(n);
  return (1.0 - std::pow(r, static_cast<double>(k))) / (1.0 - std::pow(r, static_cast<double>(n)));
}

/// Mutant count after `jumps` jumps of the Moran jump chain from one mutant,
/// kept only when the chain goes on to fix.
inline std::vector<std::int64_t> moran_rejection(std::int64_t n, double s, std::size_t jumps, std::size_t keep,
                                                 logsweep::Rng& rng) {
  const double up = (1.0 + s) / (2.0 + s);
  std::vector<std::int64_t> out;
  while (out.size() < keep) {
    std::int64_t m = 1;
    std::int64_t at = -1;
    std::size_t step = 0;
    while (m > 0 && m < n) {
      m += rng.bernoulli(up) ? 1 : -1;
      if (++step == jumps) at = m;
    }
    if (m == n) out.push_back(at);
  }
  return out;
}

/// Size after `jumps` jumps of a birth-death chain from 1, kept only when it
/// reaches `proxy` before 0 (survival up to probability (mu/lambda)^proxy).
inline std::vector<std::int64_t> gw_rejection(double lambda, double mu, std::int64_t proxy, std::size_t jumps,
                                              std::size_t keep, logsweep::Rng& rng) {
  const double up = lambda / (lambda + mu);
  std::vector<std::int64_t> out;
  while (out.size() < keep) {
    std::int64_t k = 1;
    std::int64_t at = -1;
    std::size_t step = 0;
    while (k > 0 && k < proxy) {
      k += rng.bernoulli(up) ? 1 : -1;
      if (++step == jumps) at = k;
    }
    if (k == proxy) out.push_back(at);
  }
  return out;
}

}  // namespace oracle
