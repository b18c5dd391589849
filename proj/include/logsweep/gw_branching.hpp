#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "logsweep/core/errors.hpp"
#include "logsweep/core/numeric.hpp"
#include "logsweep/core/rng.hpp"
#include "logsweep/model_params.hpp"
#include "logsweep/walk_probs.hpp"

namespace logsweep {

inline constexpr std::uint64_t kDefaultEventCap = 1'000'000'000ULL;

/// Per-individual birth and death rates of a binary continuous-time
/// Galton-Watson process.
struct GwParams {
  double birth = 1.0;
  double death = 1.0;

  GwParams(double lambda, double mu) : birth(lambda), death(mu) {
    require(lambda >= 0.0 && mu >= 0.0, "GW rates must be >= 0");
    require(lambda + mu > 0.0, "GW rates must not both be zero");
  }

  /// Mutant process Z1: birth 1 + a phi, death 1.
  static GwParams mutant(const ModelParams& p) { return {1.0 + p.selection(), 1.0}; }
  /// Resident process Z0: birth 1, death 1 + a phi.
  static GwParams resident(const ModelParams& p) { return {1.0, 1.0 + p.selection()}; }

  double net_rate() const noexcept { return birth - death; }
  double total_rate() const noexcept { return birth + death; }
  double up_prob() const noexcept { return birth / (birth + death); }
};

struct GwPoint {
  double time;
  std::int64_t size;
};

/// Recorded trajectory. points[0] is (0, start); every later point is a jump
/// of +-1. end_time is where observation stopped: the absorption time, the
/// hitting time of the stop level, or the horizon.
struct GwPath {
  std::int64_t start = 0;
  std::vector<GwPoint> points;
  bool absorbed = false;
  bool hit_level = false;
  double end_time = 0.0;

  std::int64_t final_size() const { return points.back().size; }

  std::int64_t size_at(double t) const {
    require(t >= 0.0, "GwPath::size_at needs t >= 0");
    auto it = std::upper_bound(points.begin(), points.end(), t,
                               [](double x, const GwPoint& p) { return x < p.time; });
    return std::prev(it)->size;
  }

  /// First time the size equals k; +infinity if the recorded path never does.
  double hitting_time(std::int64_t k) const {
    for (const auto& p : points) {
      if (p.size == k) return p.time;
    }
    return kInfinity;
  }
};

/// When to stop a simulation. Absorption at 0 always stops it.
struct StopRule {
  std::optional<std::int64_t> hit_level;
  std::optional<double> horizon;
  std::uint64_t cap = kDefaultEventCap;

  static StopRule absorb() { return {}; }
  static StopRule level(std::int64_t k) { return {k, std::nullopt}; }
  static StopRule until(double t) { return {std::nullopt, t}; }
};

struct GwOutcome {
  double end_time = 0.0;
  std::int64_t final_size = 0;
  bool absorbed = false;
  bool hit_level = false;
  std::uint64_t events = 0;
};

namespace detail {

/// Exact jump-chain simulation. `up(k)` is the probability of a +1 step from
/// state k; the holding rate at k is total_rate * k. `visit(t, k)` is called
/// for the initial state and after every accepted jump.
template <class UpProb, class Visit>
GwOutcome run_birth_death(double total_rate, std::int64_t start, const StopRule& stop, Rng& rng,
                          UpProb&& up, Visit&& visit) {
  GwOutcome out;
  std::int64_t k = start;
  CompensatedSum clock;
  visit(0.0, k);
  const double horizon = stop.horizon.value_or(kInfinity);
  while (true) {
    if (k == 0) {
      out.absorbed = true;
      out.end_time = clock.value();
      break;
    }
    if (stop.hit_level && k == *stop.hit_level) {
      out.hit_level = true;
      out.end_time = clock.value();
      break;
    }
    if (out.events >= stop.cap) throw CapExceeded(stop.cap);
    const double dt = rng.exponential(total_rate * static_cast<double>(k));
    const double next = clock.value() + dt;
    if (next > horizon) {
      out.end_time = horizon;
      break;
    }
    clock.add(dt);
    k += rng.bernoulli(up(k)) ? 1 : -1;
    ++out.events;
    visit(clock.value(), k);
  }
  out.final_size = k;
  return out;
}

inline void check_stop(const GwParams& params, std::int64_t start, const StopRule& stop) {
  require(start >= 0, "GW start must be >= 0");
  require(!stop.horizon || *stop.horizon >= 0.0, "stop horizon must be >= 0");
  require(!stop.hit_level || *stop.hit_level >= 0, "stop level must be >= 0");
  require(stop.hit_level || stop.horizon || params.birth <= params.death,
          "absorption alone is not an a.s. finite stop rule for a supercritical process");
}

inline GwPath record(std::int64_t start, const GwOutcome& out, std::vector<GwPoint> points) {
  GwPath path;
  path.start = start;
  path.points = std::move(points);
  path.absorbed = out.absorbed;
  path.hit_level = out.hit_level;
  path.end_time = out.end_time;
  return path;
}

}  // namespace detail

inline GwPath simulate_gw(const GwParams& params, std::int64_t start, const StopRule& stop, Rng& rng) {
  detail::check_stop(params, start, stop);
  std::vector<GwPoint> points;
  const double p = params.up_prob();
  const auto out = detail::run_birth_death(
      params.total_rate(), start, stop, rng, [p](std::int64_t) { return p; },
      [&points](double t, std::int64_t k) { points.push_back({t, k}); });
  return detail::record(start, out, std::move(points));
}

/// Path of the process conditioned never to die out. The embedded jump chain
/// is h-transformed with h(k) = 1 - (mu/lambda)^k; holding rates are those of
/// the original process because survival is decided by the jump chain alone.
/// The conditioned process lives forever, so `stop` needs a level or horizon.
inline GwPath simulate_gw_conditioned_survival(const GwParams& params, Rng& rng, const StopRule& stop,
                                               std::int64_t start = 1) {
  require(params.birth > params.death, "conditioning on survival needs lambda > mu");
  require(start >= 1, "conditioned process must start at >= 1");
  require(stop.hit_level || stop.horizon, "conditioned process needs a level or horizon stop");
  detail::check_stop(params, start, stop);
  std::vector<GwPoint> points;
  const auto out = detail::run_birth_death(
      params.total_rate(), start, stop, rng,
      [&params](std::int64_t k) { return survival_up_prob(k, params.birth, params.death); },
      [&points](double t, std::int64_t k) { points.push_back({t, k}); });
  return detail::record(start, out, std::move(points));
}

/// P(Z(t) >= j) for Z(0) = 1 and lambda != mu.
inline double gw_tail_prob(const GwParams& params, double t, std::int64_t j) {
  require(params.birth != params.death, "critical case unsupported");
  require(params.birth > 0.0 && params.death > 0.0, "gw_tail_prob needs lambda, mu > 0");
  require(t >= 0.0, "gw_tail_prob needs t >= 0");
  require(j >= 1, "gw_tail_prob needs j >= 1");
  const double l = params.birth;
  const double m = params.death;
  const double r = l - m;
  const double first = r / (l - m * std::exp(-r * t));
  // 1 - r / (l e^{rt} - m) = l (e^{rt} - 1) / (l e^{rt} - m)
  const double ratio = l * std::expm1(r * t) / (l * std::exp(r * t) - m);
  const double value = first * std::pow(ratio, static_cast<double>(j - 1));
  return std::clamp(value, 0.0, 1.0);
}

struct SurvivalProb {
  double prob;
  bool subcritical;
};

/// P_1(survival) = (lambda - mu) / lambda; zero with the subcritical flag when
/// lambda <= mu.
inline SurvivalProb gw_survival_prob(const GwParams& params) {
  if (params.birth <= params.death) return {0.0, true};
  return {(params.birth - params.death) / params.birth, false};
}

struct MeanVar {
  double mean;
  double variance;
};

/// Exact mean and variance of Z(t) given Z(0) = start.
inline MeanVar gw_mean_var(const GwParams& params, std::int64_t start, double t) {
  require(params.birth != params.death, "critical case unsupported");
  require(start >= 0, "gw_mean_var needs start >= 0");
  const double r = params.net_rate();
  const double n = static_cast<double>(start);
  const double growth = std::exp(r * t);
  // (e^{2rt} - e^{rt}) = e^{rt} (e^{rt} - 1)
  const double variance = n * (params.total_rate() / r) * growth * std::expm1(r * t);
  return {n * growth, variance};
}

/// Running sup over t in [0, horizon] of |log_N^+(Z(t * scale)) - (intercept + slope * t)|
/// for a piecewise-constant Z fed point by point. Exact: on each constant
/// piece the deviation is extremal at the piece's ends.
class LogDeviation {
 public:
  LogDeviation(double log_n, double scale, double intercept, double slope, double horizon)
      : log_n_(log_n), scale_(scale), intercept_(intercept), slope_(slope), horizon_(horizon) {}

  /// Record that the process takes value `size` from raw time `t` on.
  void observe(double t, std::int64_t size) {
    if (have_) close_piece(t);
    start_ = t / scale_;
    value_ = log_base_plus(static_cast<double>(size), log_n_);
    have_ = true;
  }

  /// Close the last piece at raw time `t` (the end of observation).
  double finish(double t) {
    if (have_) close_piece(t);
    have_ = false;
    return sup_;
  }

  double value() const noexcept { return sup_; }

 private:
  void close_piece(double t_end) {
    if (start_ > horizon_) return;
    const double u1 = std::min(t_end / scale_, horizon_);
    const double d0 = std::fabs(value_ - (intercept_ + slope_ * start_));
    const double d1 = std::fabs(value_ - (intercept_ + slope_ * u1));
    sup_ = std::max({sup_, d0, d1});
  }

  double log_n_, scale_, intercept_, slope_, horizon_;
  double start_ = 0.0;
  double value_ = 0.0;
  bool have_ = false;
  double sup_ = 0.0;
};

/// sup_{0 <= t <= horizon} |log_N^+(Z(t * scale)) - (intercept + slope t)| on a recorded path.
/// If the path stops before the horizon it is held at its final value, which
/// is the right continuation for absorbed paths.
inline double sup_log_deviation(const GwPath& path, double log_n, double scale, double intercept,
                                double slope, double horizon) {
  LogDeviation dev(log_n, scale, intercept, slope, horizon);
  for (const auto& p : path.points) dev.observe(p.time, p.size);
  return dev.finish(horizon * scale);
}

struct PhaseOptions {
  /// Rescaled horizon for the growth statistics; default (1 - b)/a.
  std::optional<double> horizon;
  /// eps_N of the decline statistics; default 1 / log log N.
  std::optional<double> eps;
  std::uint64_t cap = kDefaultEventCap;
};

inline double default_eps(const ModelParams& p) { return 1.0 / std::log(p.log_n()); }

namespace detail {

inline double deviation_run(const GwParams& gw, std::int64_t start, const ModelParams& p, double intercept,
                            double slope, double horizon, Rng& rng, std::uint64_t cap) {
  require(horizon > 0.0, "deviation horizon must be > 0");
  require(start >= 1, "deviation statistic start level must be >= 1");
  const double scale = p.time_scale();
  LogDeviation dev(p.log_n(), scale, intercept, slope, horizon);
  const double up = gw.up_prob();
  StopRule stop = StopRule::until(horizon * scale);
  stop.cap = cap;
  run_birth_death(gw.total_rate(), start, stop, rng, [up](std::int64_t) { return up; },
                  [&dev](double t, std::int64_t k) { dev.observe(t, k); });
  return dev.finish(horizon * scale);
}

inline std::int64_t power_level(const ModelParams& p, double beta) {
  return static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(p.n()), beta)));
}

}  // namespace detail

/// sup_{t <= T} |log_N Z1(t phi^{-1} log N) - (beta + a t)| for Z1 started at floor(N^beta).
inline double growth_deviation_statistic(const ModelParams& p, double beta, Rng& rng,
                                         const PhaseOptions& opt = {}) {
  require_selection(p);
  const double horizon = opt.horizon.value_or((1.0 - p.b()) / p.a());
  return detail::deviation_run(GwParams::mutant(p), detail::power_level(p, beta), p, beta, p.a(), horizon,
                               rng, opt.cap);
}

/// sup_{t <= T_N} |log_N Z0(t phi^{-1} log N) - (beta - a t)| for Z0 started at
/// floor(N^beta), T_N = (beta - b - eps_N)/a.
inline double decline_deviation_statistic(const ModelParams& p, double beta, Rng& rng,
                                          const PhaseOptions& opt = {}) {
  require_selection(p);
  const double eps = opt.eps.value_or(default_eps(p));
  const double horizon = (beta - p.b() - eps) / p.a();
  require(horizon > 0.0, "decline horizon (beta - b - eps)/a must be > 0; N is too small");
  return detail::deviation_run(GwParams::resident(p), detail::power_level(p, beta), p, beta, -p.a(), horizon,
                               rng, opt.cap);
}

/// One replicate of the statistic of sweep phase 1..5.
///   1: (phi/log N) T_j, Z1 from 1 conditioned on survival, j = floor(log N / phi)
///   2: growth deviation from j against (b + a t)
///   3: (phi/sqrt(log N)) T_L, Z1 from floor(N/sqrt log N), L = floor(N(1 - 1/sqrt log N))
///   4: decline deviation from floor(N/sqrt log N) against (b~ - a t), b~ its log_N
///   5: (phi/log N) times the extinction time of Z0 from j
inline double phase_statistic(int phase, const ModelParams& p, Rng& rng, const PhaseOptions& opt = {}) {
  require(phase >= 1 && phase <= 5, "phase must be in 1..5");
  require_selection(p);
  const double log_n = p.log_n();
  const std::int64_t j = drift_level(p);
  require(j >= 1, "floor(log N / phi) must be >= 1");
  switch (phase) {
    case 1: {
      const auto gw = GwParams::mutant(p);
      StopRule stop = StopRule::level(j);
      stop.cap = opt.cap;
      const auto out = detail::run_birth_death(
          gw.total_rate(), 1, stop, rng,
          [&gw](std::int64_t k) { return survival_up_prob(k, gw.birth, gw.death); },
          [](double, std::int64_t) {});
      return out.end_time / p.time_scale();
    }
    case 2:
      // log_N of the start floor(log N / phi) tends to b; the limit is b + a t.
      return detail::deviation_run(GwParams::mutant(p), j, p, p.b(), p.a(),
                                   opt.horizon.value_or((1.0 - p.b()) / p.a()), rng, opt.cap);
    case 3: {
      const auto gw = GwParams::mutant(p);
      const double up = gw.up_prob();
      StopRule stop = StopRule::level(handover_level(p));
      stop.cap = opt.cap;
      const auto out = detail::run_birth_death(gw.total_rate(), sqrt_log_level(p), stop, rng,
                                               [up](std::int64_t) { return up; },
                                               [](double, std::int64_t) {});
      if (!out.hit_level) return kInfinity;
      return out.end_time * p.phi() / std::sqrt(log_n);
    }
    case 4: {
      const double beta = std::log(static_cast<double>(sqrt_log_level(p))) / log_n;
      return decline_deviation_statistic(p, beta, rng, opt);
    }
    default: {
      const auto gw = GwParams::resident(p);
      const double up = gw.up_prob();
      StopRule stop = StopRule::absorb();
      stop.cap = opt.cap;
      const auto out = detail::run_birth_death(gw.total_rate(), j, stop, rng,
                                               [up](std::int64_t) { return up; },
                                               [](double, std::int64_t) {});
      return out.end_time / p.time_scale();
    }
  }
}

}  // namespace logsweep
