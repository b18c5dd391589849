#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "logsweep/core/errors.hpp"
#include "logsweep/core/rng.hpp"
#include "logsweep/gw_branching.hpp"
#include "logsweep/walk_probs.hpp"

namespace logsweep {

/// Finite nearest-neighbour integer path w(0), w(1), ...
struct LatticePath {
  std::vector<std::int64_t> values;

  std::size_t steps() const noexcept { return values.empty() ? 0 : values.size() - 1; }

  bool has_unit_steps() const {
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (std::llabs(values[i] - values[i - 1]) != 1) return false;
    }
    return true;
  }
};

/// Up-step probability of the walk W*_p at state k: forced up at 0, the
/// survival h-transform for p > 1/2, the Bessel-like (k+1)/(2k) at p = 1/2.
inline double wstar_up_prob(std::int64_t k, double p) {
  require(k >= 0, "state must be >= 0");
  if (k == 0) return 1.0;
  if (p == 0.5) return bessel_up_prob(k);
  return h_transform_up_prob(k, p);
}

/// h_transform_up_prob(k, p) - bessel_up_prob(k), evaluated as
///   (1 - r) sum_{i=1}^{k-1} (1 - r^i)(1 - r^{k-i}) / (2k (1 + r)(1 - r^k)),
/// a sum of positive terms, so its sign is certified in floating point.
inline double drift_margin(std::int64_t k, double p) {
  require(k >= 1, "drift_margin needs k >= 1");
  require(p > 0.5 && p < 1.0, "drift_margin needs p in (1/2, 1)");
  const double log_r = std::log1p(-p) - std::log(p);
  const double r = std::exp(log_r);
  double sum = 0.0;
  for (std::int64_t i = 1; i < k; ++i) {
    sum += -std::expm1(static_cast<double>(i) * log_r) * -std::expm1(static_cast<double>(k - i) * log_r);
  }
  const double one_minus_rk = -std::expm1(static_cast<double>(k) * log_r);
  return -std::expm1(log_r) * sum / (2.0 * static_cast<double>(k) * (1.0 + r) * one_minus_rk);
}

struct DriftCheck {
  /// Strict dominance for every 2 <= k <= k_max, both in the certified margin
  /// and in the direct comparison of the two probabilities.
  bool holds = true;
  /// Both probabilities equal 1 at k = 1.
  bool equal_at_one = true;
  /// First k >= 2 where dominance failed, if any.
  std::optional<std::int64_t> first_violation;
};

/// Checks that the conditioned walk's up-probability exceeds the Bessel-like
/// one for 2 <= k <= k_max, and records the equality at k = 1.
inline DriftCheck drift_dominates(double p, std::int64_t k_max) {
  require(p > 0.5 && p < 1.0, "drift_dominates needs p in (1/2, 1)");
  require(k_max >= 1, "k_max must be >= 1");
  DriftCheck out;
  out.equal_at_one = h_transform_up_prob(1, p) == 1.0 && bessel_up_prob(1) == 1.0;
  const double log_r = std::log1p(-p) - std::log(p);
  const double r = std::exp(log_r);
  // e[i] = 1 - r^i; the margin numerator is a convolution of e with itself.
  std::vector<double> e(static_cast<std::size_t>(k_max) + 1, 0.0);
  for (std::int64_t i = 1; i <= k_max; ++i) e[static_cast<std::size_t>(i)] = -std::expm1(static_cast<double>(i) * log_r);
  for (std::int64_t k = 2; k <= k_max; ++k) {
    double sum = 0.0;
    for (std::int64_t i = 1; i < k; ++i) sum += e[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(k - i)];
    const double margin = e[1] * sum / (2.0 * static_cast<double>(k) * (1.0 + r) * e[static_cast<std::size_t>(k)]);
    const bool direct = h_transform_up_prob(k, p) > bessel_up_prob(k);
    if (!(margin > 0.0) || !direct) {
      out.holds = false;
      out.first_violation = k;
      break;
    }
  }
  return out;
}

namespace detail {

inline std::vector<double> conditioned_table(double p, std::int64_t levels) {
  std::vector<double> t(static_cast<std::size_t>(levels) + 1, 1.0);
  for (std::int64_t k = 1; k <= levels; ++k) t[static_cast<std::size_t>(k)] = h_transform_up_prob(k, p);
  return t;
}

}  // namespace detail

/// Walk with up-probability p > 1/2 conditioned never to hit 0, from `start`
/// until it first reaches `stop_level`.
inline LatticePath simulate_conditioned_walk(double p, std::int64_t start, std::int64_t stop_level, Rng& rng,
                                             std::uint64_t cap = kDefaultEventCap) {
  require(p > 0.5 && p <= 1.0, "conditioned walk needs p in (1/2, 1]");
  require(start >= 1 && start <= stop_level, "conditioned walk needs 1 <= start <= stop level");
  const auto table = detail::conditioned_table(p, stop_level);
  LatticePath w;
  std::int64_t k = start;
  w.values.push_back(k);
  while (k < stop_level) {
    if (w.values.size() > cap) throw CapExceeded(cap);
    k += rng.bernoulli(table[static_cast<std::size_t>(k)]) ? 1 : -1;
    w.values.push_back(k);
  }
  return w;
}

/// Plain walk with up-probability p from `start` until it hits 0 or `stop_level`.
inline LatticePath simulate_walk(double p, std::int64_t start, std::int64_t stop_level, Rng& rng,
                                 std::uint64_t cap = kDefaultEventCap) {
  require(p > 0.0 && p < 1.0, "walk needs p in (0, 1)");
  require(start >= 0 && start <= stop_level, "walk needs 0 <= start <= stop level");
  LatticePath w;
  std::int64_t k = start;
  w.values.push_back(k);
  while (k > 0 && k < stop_level) {
    if (w.values.size() > cap) throw CapExceeded(cap);
    k += rng.bernoulli(p) ? 1 : -1;
    w.values.push_back(k);
  }
  return w;
}

/// W*_p (p = 1/2: the Bessel-like walk) from `start` until it first reaches `stop_level`.
inline LatticePath simulate_wstar(double p, std::int64_t start, std::int64_t stop_level, Rng& rng,
                                  std::uint64_t cap = kDefaultEventCap) {
  require(p >= 0.5 && p <= 1.0, "W*_p needs p in [1/2, 1]");
  require(start >= 0 && start <= stop_level, "W*_p needs 0 <= start <= stop level");
  std::vector<double> table(static_cast<std::size_t>(stop_level) + 1);
  for (std::int64_t k = 0; k <= stop_level; ++k) table[static_cast<std::size_t>(k)] = wstar_up_prob(k, p);
  LatticePath w;
  std::int64_t k = start;
  w.values.push_back(k);
  while (k < stop_level) {
    if (w.values.size() > cap) throw CapExceeded(cap);
    k += rng.bernoulli(table[static_cast<std::size_t>(k)]) ? 1 : -1;
    w.values.push_back(k);
  }
  return w;
}

/// Bessel-like walk from `start` for n_steps steps.
inline LatticePath simulate_bessel(std::int64_t start, std::size_t n_steps, Rng& rng) {
  require(start >= 0, "Bessel walk needs start >= 0");
  LatticePath w;
  w.values.reserve(n_steps + 1);
  std::int64_t k = start;
  w.values.push_back(k);
  for (std::size_t n = 0; n < n_steps; ++n) {
    k += rng.bernoulli(bessel_up_prob(k)) ? 1 : -1;
    w.values.push_back(k);
  }
  return w;
}

/// Whether w starts at N >= 1, ends at 0 and stays in [1, N-1] in between.
inline bool in_down_set(const LatticePath& w) {
  if (w.values.size() < 2 || !w.has_unit_steps()) return false;
  const std::int64_t n = w.values.front();
  if (n < 1 || w.values.back() != 0) return false;
  for (std::size_t i = 1; i + 1 < w.values.size(); ++i) {
    if (w.values[i] < 1 || w.values[i] >= n) return false;
  }
  return true;
}

/// Index reversal (w(tau_0), ..., w(0)) of a path from N down to 0 that never
/// returns to N; the image runs from 0 up to N without returning to 0.
inline LatticePath reverse_path(const LatticePath& w) {
  require(in_down_set(w), "reverse_path needs a path from N to 0 that never returns to N");
  LatticePath v;
  v.values.assign(w.values.rbegin(), w.values.rend());
  return v;
}

/// First-visit, first-return and last-visit-before-0 indices per level, and
/// the maximum before the first visit to 0. Entries are -1 where undefined;
/// sigma and max_before_zero are defined only for paths that hit 0.
struct PathFunctionals {
  std::vector<std::int64_t> tau;
  std::vector<std::int64_t> tau_plus;
  std::vector<std::int64_t> sigma;
  std::optional<std::int64_t> max_before_zero;

  static std::optional<std::int64_t> at(const std::vector<std::int64_t>& v, std::int64_t k) {
    if (k < 0 || static_cast<std::size_t>(k) >= v.size() || v[static_cast<std::size_t>(k)] < 0) return std::nullopt;
    return v[static_cast<std::size_t>(k)];
  }
  std::optional<std::int64_t> tau_of(std::int64_t k) const { return at(tau, k); }
  std::optional<std::int64_t> tau_plus_of(std::int64_t k) const { return at(tau_plus, k); }
  std::optional<std::int64_t> sigma_of(std::int64_t k) const { return at(sigma, k); }
};

inline PathFunctionals path_functionals(const LatticePath& w) {
  require(!w.values.empty(), "empty lattice path");
  std::int64_t top = 0;
  for (auto v : w.values) {
    require(v >= 0, "path_functionals needs a nonnegative path");
    top = std::max(top, v);
  }
  PathFunctionals f;
  const auto size = static_cast<std::size_t>(top) + 1;
  f.tau.assign(size, -1);
  f.tau_plus.assign(size, -1);
  f.sigma.assign(size, -1);
  std::optional<std::size_t> hit_zero;
  for (std::size_t n = 0; n < w.values.size(); ++n) {
    const auto k = static_cast<std::size_t>(w.values[n]);
    if (f.tau[k] < 0) f.tau[k] = static_cast<std::int64_t>(n);
    if (n >= 1 && f.tau_plus[k] < 0) f.tau_plus[k] = static_cast<std::int64_t>(n);
    if (!hit_zero && w.values[n] == 0) hit_zero = n;
  }
  if (hit_zero) {
    std::int64_t s = 0;
    for (std::size_t n = 0; n <= *hit_zero; ++n) {
      f.sigma[static_cast<std::size_t>(w.values[n])] = static_cast<std::int64_t>(n);
      s = std::max(s, w.values[n]);
    }
    f.max_before_zero = s;
  }
  return f;
}

/// max over 1 <= k <= N of max over tau_k <= n < tau_{k+1} of log_N k - log_N w(n),
/// for a path started at 1 that reaches N. Within that window the running
/// maximum of the path is exactly k, which gives a one-pass evaluation.
inline double log_drawdown_up(const LatticePath& w, std::int64_t n_pop) {
  require(n_pop >= 2, "N must be >= 2");
  require(!w.values.empty() && w.values.front() >= 1, "up drawdown needs a path started at >= 1");
  require(std::find(w.values.begin(), w.values.end(), n_pop) != w.values.end(), "path never reaches N");
  const double log_n = std::log(static_cast<double>(n_pop));
  std::int64_t running = w.values.front();
  double worst = 0.0;
  for (auto v : w.values) {
    running = std::max(running, v);
    if (running > n_pop) break;
    require(v >= 1, "up drawdown needs a path that stays >= 1");
    worst = std::max(worst, std::log(static_cast<double>(running)) - std::log(static_cast<double>(v)));
  }
  return worst / log_n;
}

/// The two fluctuation maxima of a path that starts at some k and hits 0:
///   max over 0 <= n < sigma_S of log_N S - log_N w(n), S the maximum before 0,
///   max over S >= k > 0 of max over sigma_k <= n < sigma_{k-1} of log_N k - log_N w(n),
/// returned as their maximum.
inline double log_drawdown_down(const LatticePath& w, std::int64_t n_pop) {
  require(n_pop >= 2, "N must be >= 2");
  const auto f = path_functionals(w);
  require(f.max_before_zero.has_value(), "down drawdown needs a path that hits 0");
  const double log_n = std::log(static_cast<double>(n_pop));
  const std::int64_t s = *f.max_before_zero;
  if (s == 0) return 0.0;
  const auto log_of = [](std::int64_t v) { return std::log(static_cast<double>(v)); };
  double worst = 0.0;
  const auto sigma_s = *f.sigma_of(s);
  for (std::int64_t n = 0; n < sigma_s; ++n) {
    worst = std::max(worst, log_of(s) - log_of(w.values[static_cast<std::size_t>(n)]));
  }
  for (std::int64_t k = s; k >= 1; --k) {
    const auto lo = *f.sigma_of(k);
    const auto hi = *f.sigma_of(k - 1);
    for (std::int64_t n = lo; n < hi; ++n) {
      worst = std::max(worst, log_of(k) - log_of(w.values[static_cast<std::size_t>(n)]));
    }
  }
  return worst / log_n;
}

/// sup over 1 <= n <= n_max of |log_N W*(n) - log_N sqrt n| for the Bessel-like
/// walk from 0. Tracks the extremes of W(n)^2 / n, so no logarithm per step.
inline double lil_fluctuation_stat(std::uint64_t n_max, std::int64_t n_pop, Rng& rng) {
  require(n_max >= 1, "n_max must be >= 1");
  require(n_pop >= 2, "N must be >= 2");
  std::int64_t k = 0;
  double lo = kInfinity;
  double hi = 0.0;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const double up = k == 0 ? 1.0 : 0.5 + 0.5 / static_cast<double>(k);
    k += rng.uniform() < up ? 1 : -1;
    const double ratio = static_cast<double>(k) * static_cast<double>(k) / static_cast<double>(n);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  const double log_n = std::log(static_cast<double>(n_pop));
  return std::max(std::fabs(std::log(lo)), std::fabs(std::log(hi))) / (2.0 * log_n);
}

}  // namespace logsweep
