#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "logsweep/core/errors.hpp"
#include "logsweep/core/numeric.hpp"
#include "logsweep/core/rng.hpp"
#include "logsweep/gw_branching.hpp"
#include "logsweep/model_params.hpp"
#include "logsweep/moran.hpp"

namespace logsweep {

/// Moran path assembled from two branching paths, together with the clock map
/// between branching time (the Z-clock) and Moran time (the X-clock).
///
/// Mutants follow z1 until it reaches L = floor(N(1 - 1/sqrt log N)); from
/// there residents follow z0, started at N - L. While a branching path sits at
/// count c the Moran process holds with rate f = 1 - c/N times the branching
/// rate, so a Z-clock sojourn dz lasts dz / f on the X-clock.
struct TimeChangedPair {
  SweepPath path;
  /// Knots (x_time, z_time) of the increasing piecewise-linear clock map.
  std::vector<std::pair<double, double>> clock;
  /// f on each clock piece: factor[i] applies between clock[i] and clock[i+1].
  std::vector<double> factor;
  /// X-time at which the mutant count first reaches L.
  double handover_time = 0.0;

  /// sigma(x): Z-time elapsed by X-time x. Increasing, and sigma(x) <= x.
  double sigma(double x) const {
    require(!clock.empty(), "empty clock");
    if (x <= clock.front().first) return clock.front().second;
    if (x >= clock.back().first) return clock.back().second + (x - clock.back().first);
    auto it = std::upper_bound(clock.begin(), clock.end(), x,
                               [](double v, const std::pair<double, double>& k) { return v < k.first; });
    const std::size_t i = static_cast<std::size_t>(it - clock.begin()) - 1;
    return clock[i].second + (x - clock[i].first) * factor[i];
  }

  /// f at X-time x.
  double factor_at(double x) const {
    if (factor.empty() || x >= clock.back().first) return 1.0;
    auto it = std::upper_bound(clock.begin(), clock.end(), x,
                               [](double v, const std::pair<double, double>& k) { return v < k.first; });
    const std::size_t i = it == clock.begin() ? 0 : static_cast<std::size_t>(it - clock.begin()) - 1;
    return factor[i];
  }
};

/// Build the Moran path from z1 (mutant process conditioned on survival,
/// started at 1 and stopped on reaching L) and z0 (resident process started at
/// N - L and run to extinction without reaching N).
inline TimeChangedPair build_time_changed_pair(const GwPath& z1, const GwPath& z0, const ModelParams& p) {
  require_selection(p);
  const std::int64_t n = p.n();
  const std::int64_t handover = handover_level(p);
  require(handover >= 1 && handover < n, "hand-over level must lie in [1, N)");
  require(!z1.points.empty() && z1.start == 1, "z1 must start at 1");
  require(z1.final_size() == handover, "z1 must be stopped on reaching floor(N(1 - 1/sqrt log N))");
  require(!z0.points.empty() && z0.start == n - handover, "z0 must start at N - floor(N(1 - 1/sqrt log N))");
  require(z0.absorbed, "z0 must run until extinction");

  TimeChangedPair out;
  out.path.n = n;
  out.path.policy = RecordPolicy::full;
  CompensatedSum x_clock;
  const double nd = static_cast<double>(n);

  out.path.points.push_back({0.0, n - 1});
  out.clock.push_back({0.0, 0.0});
  for (std::size_t i = 1; i < z1.points.size(); ++i) {
    const std::int64_t held = z1.points[i - 1].size;
    require(held >= 1 && held < n, "z1 left (0, N) before the hand-over");
    const double f = 1.0 - static_cast<double>(held) / nd;
    x_clock.add((z1.points[i].time - z1.points[i - 1].time) / f);
    out.factor.push_back(f);
    out.clock.push_back({x_clock.value(), z1.points[i].time});
    out.path.points.push_back({x_clock.value(), n - z1.points[i].size});
  }
  out.handover_time = x_clock.value();
  const double z_offset = z1.end_time;
  for (std::size_t i = 1; i < z0.points.size(); ++i) {
    const std::int64_t held = z0.points[i - 1].size;
    require(held >= 1 && held < n, "z0 reached N; the pair is only defined when z0 dies out first");
    const double f = 1.0 - static_cast<double>(held) / nd;
    x_clock.add((z0.points[i].time - z0.points[i - 1].time) / f);
    out.factor.push_back(f);
    out.clock.push_back({x_clock.value(), z_offset + z0.points[i].time});
    out.path.points.push_back({x_clock.value(), z0.points[i].size});
  }
  out.path.terminal = Terminal::fixation;
  return out;
}

/// Sample z1 and z0 and build the pair. z0 is redrawn until it dies out
/// before reaching N, which is exactly the conditioning on fixation for the
/// resident phase.
inline TimeChangedPair sample_time_changed_pair(const ModelParams& p, Rng& rng,
                                                std::uint64_t cap = kDefaultEventCap) {
  require_selection(p);
  const std::int64_t n = p.n();
  const std::int64_t handover = handover_level(p);
  StopRule up = StopRule::level(handover);
  up.cap = cap;
  const GwPath z1 = simulate_gw_conditioned_survival(GwParams::mutant(p), rng, up);
  StopRule down = StopRule::level(n);
  down.cap = cap;
  while (true) {
    GwPath z0 = simulate_gw(GwParams::resident(p), n - handover, down, rng);
    if (z0.absorbed) return build_time_changed_pair(z1, z0, p);
  }
}

}  // namespace logsweep
