#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "logsweep/cadlag_path.hpp"
#include "logsweep/core/errors.hpp"
#include "logsweep/core/numeric.hpp"
#include "logsweep/core/rng.hpp"
#include "logsweep/gw_branching.hpp"
#include "logsweep/m1_metric.hpp"
#include "logsweep/model_params.hpp"
#include "logsweep/pit.hpp"
#include "logsweep/scaling_house.hpp"

namespace logsweep {

/// Law gamma of the fitness increments A (in units of phi).
class GammaSpec {
 public:
  enum class Kind : std::uint8_t { finite, uniform, exponential };

  /// Atoms with weights (normalized internally).
  static GammaSpec finite(std::vector<double> values, std::vector<double> weights) {
    require(!values.empty() && values.size() == weights.size(), "finite gamma needs matching values and weights");
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      require(values[i] > 0.0 && std::isfinite(values[i]), "gamma atoms must be positive");
      require(weights[i] >= 0.0, "gamma weights must be >= 0");
      total += weights[i];
    }
    require(total > 0.0, "gamma weights must not all vanish");
    GammaSpec g(Kind::finite);
    for (auto& w : weights) w /= total;
    g.values_ = std::move(values);
    g.weights_ = std::move(weights);
    return g;
  }
  static GammaSpec uniform(double lo, double hi) {
    require(lo >= 0.0 && lo < hi && std::isfinite(hi), "uniform gamma needs 0 <= lo < hi");
    GammaSpec g(Kind::uniform);
    g.lo_ = lo;
    g.hi_ = hi;
    return g;
  }
  static GammaSpec exponential(double mean) {
    require(mean > 0.0 && std::isfinite(mean), "exponential gamma needs mean > 0");
    GammaSpec g(Kind::exponential);
    g.lo_ = mean;
    return g;
  }

  Kind kind() const noexcept { return kind_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  /// Support bounds of the uniform law.
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

  double mean() const {
    switch (kind_) {
      case Kind::finite: {
        double m = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i) m += values_[i] * weights_[i];
        return m;
      }
      case Kind::uniform: return 0.5 * (lo_ + hi_);
      case Kind::exponential: return lo_;
    }
    return 0.0;
  }

  double sample(Rng& rng) const {
    switch (kind_) {
      case Kind::finite: return pick(weights_, rng);
      case Kind::uniform: return lo_ + (hi_ - lo_) * rng.uniform();
      case Kind::exponential: return rng.exponential(1.0 / lo_);
    }
    return 0.0;
  }

  /// Draw from x gamma(dx) / mean.
  double sample_size_biased(Rng& rng) const {
    switch (kind_) {
      case Kind::finite: {
        std::vector<double> w(values_.size());
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = values_[i] * weights_[i];
        return pick(w, rng);
      }
      case Kind::uniform:
        // Density x / mean on [lo, hi] is bounded by hi / mean.
        while (true) {
          const double x = lo_ + (hi_ - lo_) * rng.uniform();
          if (rng.uniform() * hi_ < x) return x;
        }
      case Kind::exponential: return rng.exponential(1.0 / lo_) + rng.exponential(1.0 / lo_);
    }
    return 0.0;
  }

 private:
  explicit GammaSpec(Kind k) : kind_(k) {}

  double pick(const std::vector<double>& w, Rng& rng) const {
    double total = 0.0;
    for (double x : w) total += x;
    double u = rng.uniform() * total;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (u < w[i]) return values_[i];
      u -= w[i];
    }
    return values_.back();
  }

  Kind kind_;
  std::vector<double> values_;
  std::vector<double> weights_;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

struct FamilyPoint {
  double time;
  std::int64_t count;
};

/// One fitness class founded by a single mutation (family 0 is the initial
/// resident population).
struct Family {
  std::size_t id = 0;
  std::size_t parent = 0;
  /// Fitness level M, a sum of increments times phi.
  double fitness = 0.0;
  /// Increment A of the founding mutation, in units of phi.
  double increment = 0.0;
  double birth_time = 0.0;
  std::int64_t count = 0;
  std::int64_t max_count = 0;
  bool contender = false;
  double extinction_time = kInfinity;
  std::vector<FamilyPoint> points;
};

struct MultiMoranOptions {
  double lambda = 1.0;
  GammaSpec gamma = GammaSpec::finite({1.0}, {1.0});
  /// Horizon in rescaled time (units of phi^{-1} log N).
  double horizon = 1.0;
  /// Counts are recorded when floor(log(count) / log(1 + record_delta)) changes,
  /// and on every change when record_delta is 0.
  double record_delta = 0.0;
  /// Extra mutation at this Moran time with this increment, carried by a
  /// resident (family 0) individual.
  std::optional<PitArrival> forced;
  std::uint64_t cap = kDefaultEventCap;
};

struct MultiMoranTrace {
  std::int64_t n = 0;
  double end_time = 0.0;
  double contender_level = 0.0;
  std::vector<Family> families;
  std::uint64_t events = 0;

  /// Ids of contender families in order of appearance.
  std::vector<std::size_t> contenders() const {
    std::vector<std::size_t> out;
    for (const auto& f : families) {
      if (f.id != 0 && f.contender) out.push_back(f.id);
    }
    return out;
  }

  std::int64_t count_at(std::size_t id, double t) const {
    const auto& pts = families.at(id).points;
    if (t < pts.front().time) return 0;
    auto it = std::upper_bound(pts.begin(), pts.end(), t, [](double x, const FamilyPoint& p) { return x < p.time; });
    return (it - 1)->count;
  }
};

namespace detail {

class FamilyRecorder {
 public:
  explicit FamilyRecorder(double delta) : inv_log_(delta > 0.0 ? 1.0 / std::log1p(delta) : 0.0) {}

  void record(Family& f, double t) const {
    if (inv_log_ == 0.0 || f.points.empty() || f.count == 0 || f.points.back().count == 0 ||
        bucket(f.count) != bucket(f.points.back().count)) {
      f.points.push_back({t, f.count});
    }
  }

 private:
  std::int64_t bucket(std::int64_t c) const {
    return static_cast<std::int64_t>(std::floor(std::log(static_cast<double>(c)) * inv_log_));
  }
  double inv_log_;
};

}  // namespace detail

/// Multi-type Moran model with recurrent beneficial mutation. Individuals of
/// fitness M replace individuals of fitness M' at total rate
/// (1 + (M - M')^+) X(M) X(M') / N; mutations arrive at rate lambda / log N,
/// hit a uniformly chosen individual and raise its fitness by A phi with
/// A ~ gamma. Runs in Moran time until horizon * phi^{-1} log N.
inline MultiMoranTrace simulate_multi_moran(const ModelParams& p, const MultiMoranOptions& opt, Rng& rng) {
  require(opt.lambda >= 0.0 && std::isfinite(opt.lambda), "lambda must be finite and >= 0");
  require(opt.horizon >= 0.0 && std::isfinite(opt.horizon), "horizon must be finite and >= 0");
  require(opt.record_delta >= 0.0, "record_delta must be >= 0");
  const std::int64_t n = p.n();
  const double nd = static_cast<double>(n);
  const double t_end = opt.horizon * p.time_scale();
  const double mut_rate = opt.lambda / p.log_n();
  if (opt.forced) require(opt.forced->time >= 0.0 && opt.forced->slope > 0.0, "forced arrival needs time >= 0, A > 0");

  MultiMoranTrace tr;
  tr.n = n;
  tr.contender_level = std::pow(nd, p.b()) * p.log_n();
  const detail::FamilyRecorder rec(opt.record_delta);
  Family root;
  root.count = n;
  root.max_count = n;
  root.contender = true;
  root.points.push_back({0.0, n});
  tr.families.push_back(std::move(root));
  std::vector<std::size_t> alive{0};
  std::vector<double> row;
  bool forced_pending = opt.forced.has_value();
  double now = 0.0;

  auto bump = [&](std::size_t id, std::int64_t d) {
    Family& f = tr.families[id];
    f.count += d;
    if (f.count > f.max_count) {
      f.max_count = f.count;
      if (static_cast<double>(f.count) >= tr.contender_level) f.contender = true;
    }
    rec.record(f, now);
    if (f.count == 0) f.extinction_time = now;
  };
  auto found = [&](std::size_t parent, double a) {
    Family f;
    f.id = tr.families.size();
    f.parent = parent;
    f.increment = a;
    f.fitness = tr.families[parent].fitness + a * p.phi();
    f.birth_time = now;
    tr.families.push_back(std::move(f));
    alive.push_back(tr.families.back().id);
    bump(parent, -1);
    bump(tr.families.back().id, +1);
  };

  while (true) {
    // Row r_F = X_F sum_{G != F} (1 + (M_F - M_G)^+) X_G.
    row.assign(alive.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < alive.size(); ++i) {
      const Family& f = tr.families[alive[i]];
      double s = 0.0;
      for (std::size_t j = 0; j < alive.size(); ++j) {
        if (j == i) continue;
        const Family& g = tr.families[alive[j]];
        s += (1.0 + std::max(0.0, f.fitness - g.fitness)) * static_cast<double>(g.count);
      }
      row[i] = static_cast<double>(f.count) * s / nd;
      total += row[i];
    }
    const double rate = total + mut_rate;
    const double dt = rate > 0.0 ? rng.exponential(rate) : kInfinity;
    if (forced_pending && opt.forced->time <= t_end && now + dt >= opt.forced->time) {
      // Memorylessness lets the clock restart after the forced mutation.
      now = opt.forced->time;
      forced_pending = false;
      require(tr.families[0].count > 0, "forced arrival needs a resident individual");
      found(0, opt.forced->slope);
      continue;
    }
    if (now + dt > t_end) break;
    if (++tr.events > opt.cap) throw CapExceeded(opt.cap);
    now += dt;
    double u = rng.uniform() * rate;
    if (u < mut_rate) {
      std::int64_t k = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n)));
      std::size_t parent = alive.back();
      for (std::size_t id : alive) {
        if (k < tr.families[id].count) {
          parent = id;
          break;
        }
        k -= tr.families[id].count;
      }
      found(parent, opt.gamma.sample(rng));
    } else {
      u -= mut_rate;
      std::size_t i = alive.size() - 1;
      for (std::size_t c = 0; c < alive.size(); ++c) {
        if (u < row[c]) {
          i = c;
          break;
        }
        u -= row[c];
      }
      const Family& f = tr.families[alive[i]];
      double w_total = 0.0;
      for (std::size_t j = 0; j < alive.size(); ++j) {
        if (j == i) continue;
        const Family& g = tr.families[alive[j]];
        w_total += (1.0 + std::max(0.0, f.fitness - g.fitness)) * static_cast<double>(g.count);
      }
      double v = rng.uniform() * w_total;
      std::size_t j = i == alive.size() - 1 ? alive.size() - 2 : alive.size() - 1;
      for (std::size_t c = 0; c < alive.size(); ++c) {
        if (c == i) continue;
        const Family& g = tr.families[alive[c]];
        const double w = (1.0 + std::max(0.0, f.fitness - g.fitness)) * static_cast<double>(g.count);
        if (v < w) {
          j = c;
          break;
        }
        v -= w;
      }
      const std::size_t winner = alive[i];
      const std::size_t loser = alive[j];
      bump(winner, +1);
      bump(loser, -1);
    }
    alive.erase(std::remove_if(alive.begin(), alive.end(), [&](std::size_t id) { return tr.families[id].count == 0; }),
                alive.end());
  }
  tr.end_time = t_end;
  for (auto& f : tr.families) {
    if (f.points.back().time < t_end && f.points.back().count != f.count) f.points.push_back({t_end, f.count});
  }
  return tr;
}

/// H_i^N(t) = log_N^+ X_i(t phi^{-1} log N) on [alpha, beta], 0 before the
/// family appears (1 for the initial resident).
inline CadlagPath family_path(const MultiMoranTrace& tr, const ModelParams& p, std::size_t id, double alpha,
                              double beta) {
  const Family& f = tr.families.at(id);
  return detail::log_step_path(f.points, [](const FamilyPoint& pt) { return pt.count; }, p.log_n(), p.time_scale(),
                               id == 0 ? 1.0 : 0.0, alpha, beta);
}

/// Contender marks (T_i phi / log N, A_i) in order of appearance.
inline std::vector<PitArrival> contender_marks(const MultiMoranTrace& tr, const ModelParams& p) {
  std::vector<PitArrival> out;
  for (std::size_t id : tr.contenders()) {
    const Family& f = tr.families[id];
    out.push_back({f.birth_time / p.time_scale(), f.increment});
  }
  return out;
}

/// Contender marks drawn directly from the limit: Poisson arrivals of the
/// given rate on [0, horizon] with size-biased slopes.
inline std::vector<PitArrival> sample_pit_arrivals(double rate, const GammaSpec& gamma, double horizon, Rng& rng) {
  require(rate >= 0.0 && horizon >= 0.0, "rate and horizon must be >= 0");
  std::vector<PitArrival> out;
  if (rate == 0.0) return out;
  double t = rng.exponential(rate);
  while (t <= horizon) {
    out.push_back({t, gamma.sample_size_biased(rng)});
    t += rng.exponential(rate);
  }
  return out;
}

struct FamilyDistance {
  std::size_t family;
  M1Bracket bracket;
};

struct PitComparison {
  MultiMoranTrace trace;
  PitTrace pit;
  /// Entry k compares family contenders()[k - 1] (entry 0: the resident) with
  /// PIT trajectory k.
  std::vector<FamilyDistance> distances;

  double max_upper() const {
    double m = 0.0;
    for (const auto& d : distances) m = std::max(m, d.bracket.upper);
    return m;
  }
};

/// Simulate the multi-type Moran model, feed its contender marks to
/// pit_evolve with b = b_N, and bracket the M1 distance between each H_i^N and
/// PIT trajectory H_i on [0, horizon].
inline PitComparison pit_vs_moran_distance(const ModelParams& p, const MultiMoranOptions& opt, Rng& rng,
                                           double tol = 1e-3) {
  require(opt.horizon > 0.0, "horizon must be > 0");
  PitComparison out;
  out.trace = simulate_multi_moran(p, opt, rng);
  const auto marks = contender_marks(out.trace, p);
  out.pit = pit_evolve(marks, p.b(), opt.horizon);
  std::vector<std::size_t> ids{0};
  for (std::size_t id : out.trace.contenders()) ids.push_back(id);
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const CadlagPath emp = family_path(out.trace, p, ids[k], 0.0, opt.horizon);
    const CadlagPath lim = out.pit.path(k, 0.0, opt.horizon);
    out.distances.push_back({ids[k], m1_distance(emp, lim, tol)});
  }
  return out;
}

}  // namespace logsweep
