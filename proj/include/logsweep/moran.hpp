#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "logsweep/core/errors.hpp"
#include "logsweep/core/numeric.hpp"
#include "logsweep/core/rng.hpp"
#include "logsweep/gw_branching.hpp"
#include "logsweep/model_params.hpp"

namespace logsweep {

enum class Terminal : std::uint8_t { fixation = 0, loss = 1, open = 2 };

enum class RecordPolicy : std::uint8_t { full = 0, level_hits = 1, time_grid = 2 };

inline const char* to_string(Terminal t) {
  switch (t) {
    case Terminal::fixation: return "fixation";
    case Terminal::loss: return "loss";
    case Terminal::open: return "open";
  }
  return "?";
}

/// What a Moran simulation keeps.
///  full:       every jump.
///  level_hits: the start, the first passage of the mutant count through each
///              listed level, and the absorption point.
///  time_grid:  the state at every multiple of grid_step, and absorption.
struct RecordSpec {
  RecordPolicy policy = RecordPolicy::full;
  std::vector<std::int64_t> levels;
  double grid_step = 0.0;
  std::uint64_t cap = kDefaultEventCap;

  static RecordSpec full() { return {}; }
  static RecordSpec level_hits(std::vector<std::int64_t> mutant_levels) {
    std::sort(mutant_levels.begin(), mutant_levels.end());
    mutant_levels.erase(std::unique(mutant_levels.begin(), mutant_levels.end()), mutant_levels.end());
    return {RecordPolicy::level_hits, std::move(mutant_levels), 0.0};
  }
  static RecordSpec time_grid(double step) { return {RecordPolicy::time_grid, {}, step}; }
};

struct SweepPoint {
  double time;
  std::int64_t residents;
};

/// Resident count trajectory of a two-type Moran model. The mutant count is
/// N - residents. For t < 0 the population is all residents. Under the full
/// policy consecutive points differ by exactly one individual.
struct SweepPath {
  std::int64_t n = 0;
  Terminal terminal = Terminal::open;
  RecordPolicy policy = RecordPolicy::full;
  std::vector<std::int64_t> levels;
  std::vector<SweepPoint> points;

  double end_time() const { return points.empty() ? 0.0 : points.back().time; }

  std::int64_t residents_at(double t) const {
    if (t < 0.0 || points.empty()) return n;
    auto it = std::upper_bound(points.begin(), points.end(), t,
                               [](double x, const SweepPoint& p) { return x < p.time; });
    return std::prev(it)->residents;
  }
  std::int64_t mutants_at(double t) const { return n - residents_at(t); }

  /// Absorption time when the sweep fixed.
  double fixation_time() const {
    require(terminal == Terminal::fixation, "path did not end in fixation");
    return end_time();
  }
};

struct MoranRates {
  double up;    ///< resident gains one
  double down;  ///< resident loses one
};

/// Transition rates with k residents: k(N-k)/N up and (1 + a phi) k(N-k)/N down.
inline MoranRates moran_rates(std::int64_t k, const ModelParams& p) {
  require(k >= 0 && k <= p.n(), "resident count must lie in [0, N]");
  const double n = static_cast<double>(p.n());
  const double base = static_cast<double>(k) * static_cast<double>(p.n() - k) / n;
  return {base, (1.0 + p.selection()) * base};
}

/// Probability that m mutants eventually fix: (1 - r^m)/(1 - r^N), r = 1/(1 + a phi).
inline double fixation_prob_exact(const ModelParams& p, std::int64_t m) {
  require(m >= 0 && m <= p.n(), "mutant count must lie in [0, N]");
  const double s = p.selection();
  if (m == 0) return 0.0;
  if (m == p.n()) return 1.0;
  if (s == 0.0) return static_cast<double>(m) / static_cast<double>(p.n());
  const double log_r = -std::log1p(s);
  return one_minus_pow(log_r, static_cast<double>(m)) / one_minus_pow(log_r, static_cast<double>(p.n()));
}

namespace detail {

class SweepRecorder {
 public:
  SweepRecorder(const ModelParams& p, const RecordSpec& spec, std::int64_t start_mutants) : spec_(spec) {
    path_.n = p.n();
    path_.policy = spec.policy;
    path_.levels = spec.levels;
    if (spec.policy == RecordPolicy::time_grid) {
      require(spec.grid_step > 0.0, "time grid step must be > 0");
    }
    next_level_ = std::upper_bound(spec_.levels.begin(), spec_.levels.end(), start_mutants) - spec_.levels.begin();
    path_.points.push_back({0.0, p.n() - start_mutants});
    next_grid_ = spec.grid_step;
  }

  // Called after a jump at time t to `mutants`; `previous` is the state held
  // on [last jump, t).
  void jump(double t, std::int64_t mutants, std::int64_t previous) {
    switch (spec_.policy) {
      case RecordPolicy::full:
        path_.points.push_back({t, path_.n - mutants});
        break;
      case RecordPolicy::level_hits:
        if (next_level_ < spec_.levels.size() && mutants == spec_.levels[next_level_]) {
          path_.points.push_back({t, path_.n - mutants});
          ++next_level_;
        }
        break;
      case RecordPolicy::time_grid:
        while (next_grid_ < t) {
          path_.points.push_back({next_grid_, path_.n - previous});
          next_grid_ = spec_.grid_step * static_cast<double>(path_.points.size());
        }
        break;
    }
  }

  SweepPath finish(double t, std::int64_t mutants, Terminal terminal) {
    const SweepPoint& last = path_.points.back();
    if (last.time != t || last.residents != path_.n - mutants) path_.points.push_back({t, path_.n - mutants});
    path_.terminal = terminal;
    return std::move(path_);
  }

 private:
  const RecordSpec& spec_;
  SweepPath path_;
  std::size_t next_level_ = 0;
  double next_grid_ = 0.0;
};

/// Jump chain of the mutant count with holding rate (2 + s) m (N - m) / N.
template <class UpProb>
SweepPath run_moran(const ModelParams& p, std::int64_t start_mutants, Rng& rng, const RecordSpec& spec,
                    UpProb&& up) {
  require(start_mutants >= 0 && start_mutants <= p.n(), "start mutant count must lie in [0, N]");
  const std::int64_t n = p.n();
  const double rate_scale = (2.0 + p.selection()) / static_cast<double>(n);
  SweepRecorder rec(p, spec, start_mutants);
  std::int64_t m = start_mutants;
  CompensatedSum clock;
  std::uint64_t events = 0;
  while (m > 0 && m < n) {
    if (events >= spec.cap) throw CapExceeded(spec.cap);
    const double rate = rate_scale * static_cast<double>(m) * static_cast<double>(n - m);
    clock.add(rng.exponential(rate));
    const std::int64_t previous = m;
    m += rng.bernoulli(up(m)) ? 1 : -1;
    ++events;
    rec.jump(clock.value(), m, previous);
  }
  return rec.finish(clock.value(), m, m == n ? Terminal::fixation : Terminal::loss);
}

/// Up-step probabilities of the mutant count conditioned on fixation, for
/// m = 0..N-1: p (1 - r^{m+1}) / (1 - r^m) with p = (1 + s)/(2 + s), r = 1/(1 + s).
inline std::vector<double> fixation_up_table(const ModelParams& p) {
  const double s = p.selection();
  const double log_r = -std::log1p(s);
  const double up = (1.0 + s) / (2.0 + s);
  std::vector<double> table(static_cast<std::size_t>(p.n()), 1.0);
  double h_prev = one_minus_pow(log_r, 1.0);
  for (std::int64_t m = 1; m < p.n(); ++m) {
    const double h_next = one_minus_pow(log_r, static_cast<double>(m + 1));
    table[static_cast<std::size_t>(m)] = std::min(1.0, up * h_next / h_prev);
    h_prev = h_next;
  }
  return table;
}

}  // namespace detail

/// Exact simulation of the two-type Moran model from `start_mutants` mutants
/// until absorption. a phi = 0 (neutral) is allowed here only.
inline SweepPath simulate_moran(const ModelParams& p, std::int64_t start_mutants, Rng& rng,
                                const RecordSpec& spec = RecordSpec::full()) {
  const double up = (1.0 + p.selection()) / (2.0 + p.selection());
  return detail::run_moran(p, start_mutants, rng, spec, [up](std::int64_t) { return up; });
}

/// Fixation or loss from `start_mutants`, drawn from the jump chain alone
/// (the holding times do not affect the outcome).
inline Terminal moran_outcome(const ModelParams& p, std::int64_t start_mutants, Rng& rng,
                              std::uint64_t cap = kDefaultEventCap) {
  require(start_mutants >= 0 && start_mutants <= p.n(), "start mutant count must lie in [0, N]");
  const double up = (1.0 + p.selection()) / (2.0 + p.selection());
  std::int64_t m = start_mutants;
  for (std::uint64_t events = 0; m > 0 && m < p.n(); ++events) {
    if (events >= cap) throw CapExceeded(cap);
    m += rng.bernoulli(up) ? 1 : -1;
  }
  return m == p.n() ? Terminal::fixation : Terminal::loss;
}

/// Moran model from one mutant conditioned on fixation: the mutant jump chain
/// is h-transformed with h(m) = 1 - r^m while the holding rates are kept.
inline SweepPath simulate_moran_conditioned_fixation(const ModelParams& p, Rng& rng,
                                                     const RecordSpec& spec = RecordSpec::full(),
                                                     std::int64_t start_mutants = 1) {
  require_selection(p);
  require(start_mutants >= 1, "conditioning on fixation needs at least one mutant");
  const auto table = detail::fixation_up_table(p);
  return detail::run_moran(p, start_mutants, rng, spec,
                           [&table](std::int64_t m) { return table[static_cast<std::size_t>(m)]; });
}

/// First time the mutant count is >= level; +infinity if never. Level-hit
/// paths can only answer for recorded levels.
inline double mutant_hitting_time(const SweepPath& path, std::int64_t level) {
  require(level >= 0 && level <= path.n, "level must lie in [0, N]");
  require(!path.points.empty(), "empty sweep path");
  const std::int64_t start_mutants = path.n - path.points.front().residents;
  if (start_mutants >= level) return path.points.front().time;
  if (path.policy == RecordPolicy::level_hits) {
    require(std::binary_search(path.levels.begin(), path.levels.end(), level) || level == path.n,
            "level-hit path does not record the requested level");
  } else {
    require(path.policy == RecordPolicy::full, "time-grid paths cannot answer hitting times");
  }
  for (const auto& pt : path.points) {
    if (path.n - pt.residents >= level) return pt.time;
  }
  return kInfinity;
}


/// First time the mutant count is >= eps N; +infinity if never.
inline double hitting_time(const SweepPath& path, double eps) {
  require(eps > 0.0 && eps <= 1.0, "eps must lie in (0, 1]");
  require(!path.points.empty(), "empty sweep path");
  const auto level = static_cast<std::int64_t>(std::ceil(eps * static_cast<double>(path.n) - 1e-9));
  return mutant_hitting_time(path, std::max<std::int64_t>(level, 0));
}

}  // namespace logsweep
