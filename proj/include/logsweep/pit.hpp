#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "logsweep/cadlag_path.hpp"
#include "logsweep/core/errors.hpp"
#include "logsweep/core/numeric.hpp"
#include "logsweep/sweep_io.hpp"

namespace logsweep {

/// Arrival mark (T_i, A_i) of the interacting trajectory system.
struct PitArrival {
  double time;
  double slope;
};

enum class PitStatus : std::uint8_t { latent, active, top, dead };

inline const char* to_string(PitStatus s) {
  switch (s) {
    case PitStatus::latent: return "latent";
    case PitStatus::active: return "active";
    case PitStatus::top: return "top";
    case PitStatus::dead: return "dead";
  }
  return "?";
}

/// From time t on the trajectory runs as height + slope (s - t).
struct PitAnchor {
  double t;
  double height;
  double slope;
};

struct PitTrajectory {
  std::size_t id = 0;
  double start_time = 0.0;
  double start_height = 0.0;
  PitStatus status = PitStatus::latent;
  std::vector<PitAnchor> anchors;
  double death_time = kInfinity;

  double height(double t) const {
    if (t < start_time) return id == 0 ? 1.0 : 0.0;
    const PitAnchor& a = anchor_at(t, false);
    return a.height + a.slope * (t - a.t);
  }

  double left_limit(double t) const {
    if (t <= start_time) return id == 0 ? 1.0 : 0.0;
    const PitAnchor& a = anchor_at(t, true);
    return a.height + a.slope * (t - a.t);
  }

 private:
  // Last anchor with a.t <= t (or a.t < t when strict).
  const PitAnchor& anchor_at(double t, bool strict) const {
    auto it = strict ? std::lower_bound(anchors.begin(), anchors.end(), t,
                                        [](const PitAnchor& a, double x) { return a.t < x; })
                     : std::upper_bound(anchors.begin(), anchors.end(), t,
                                        [](double x, const PitAnchor& a) { return x < a.t; });
    return *(it - 1);
  }
};

/// Events at equal times are applied in the order top, death, arrival, each
/// kind by trajectory id.
enum class PitEventKind : std::uint8_t { top = 0, death = 1, arrival = 2 };

inline const char* to_string(PitEventKind k) {
  switch (k) {
    case PitEventKind::top: return "top";
    case PitEventKind::death: return "death";
    case PitEventKind::arrival: return "arrival";
  }
  return "?";
}

struct PitEvent {
  double time;
  PitEventKind kind;
  std::size_t id;
  /// Slope carried into the top for top events, the start slope for arrivals.
  double slope;
};

struct PitTrace {
  double b = 0.0;
  double horizon = 0.0;
  std::vector<PitTrajectory> trajectories;
  std::vector<PitEvent> events;

  /// Trajectory id on [alpha, beta] as an exact CadlagPath. The resident is 1
  /// before time 0, trajectory i is 0 before T_i.
  CadlagPath path(std::size_t id, double alpha, double beta) const {
    require(id < trajectories.size(), "no such trajectory");
    require(alpha < beta && beta <= horizon, "window must end inside the horizon");
    const PitTrajectory& tr = trajectories[id];
    std::vector<double> cuts;
    if (tr.status != PitStatus::latent) {
      for (const auto& a : tr.anchors) cuts.push_back(a.t);
    }
    std::vector<Knot> k;
    k.push_back({alpha, tr.left_limit(alpha), tr.height(alpha)});
    for (double t : cuts) {
      if (t > alpha && t < beta && t > k.back().t) k.push_back({t, tr.left_limit(t), tr.height(t)});
    }
    k.push_back({beta, tr.left_limit(beta), tr.height(beta)});
    return CadlagPath(std::move(k));
  }
};

namespace detail {

inline double pit_top_time(const PitAnchor& a) {
  if (a.slope <= 0.0 || a.height >= 1.0) return kInfinity;
  return a.t + (1.0 - a.height) / a.slope;
}

inline double pit_death_time(const PitAnchor& a, double b) {
  if (a.slope >= 0.0 || a.height <= b) return kInfinity;
  return a.t + (a.height - b) / -a.slope;
}

}  // namespace detail

/// Deterministic evolution of the interacting trajectory system on [0, horizon].
/// Trajectory 0 is the initial resident, trajectory i >= 1 belongs to
/// arrivals[i - 1]. Arrivals must have distinct times, which need not be
/// sorted, and positive slopes.
inline PitTrace pit_evolve(const std::vector<PitArrival>& arrivals, double b, double horizon) {
  require(b >= 0.0 && b < 1.0, "b must lie in [0, 1)");
  require(horizon >= 0.0 && std::isfinite(horizon), "horizon must be finite and >= 0");
  for (std::size_t i = 0; i < arrivals.size(); ++i) {
    require(arrivals[i].time >= 0.0 && std::isfinite(arrivals[i].time), "arrival times must be finite and >= 0");
    require(arrivals[i].slope > 0.0 && std::isfinite(arrivals[i].slope), "arrival slopes must be > 0");
    for (std::size_t j = 0; j < i; ++j) require(arrivals[j].time != arrivals[i].time, "arrival times must be distinct");
  }
  PitTrace tr;
  tr.b = b;
  tr.horizon = horizon;
  tr.trajectories.resize(arrivals.size() + 1);
  auto& res = tr.trajectories[0];
  res.status = PitStatus::top;
  res.start_height = 1.0;
  res.anchors.push_back({0.0, 1.0, 0.0});
  for (std::size_t i = 1; i < tr.trajectories.size(); ++i) {
    auto& t = tr.trajectories[i];
    t.id = i;
    t.start_time = arrivals[i - 1].time;
    t.start_height = b;
  }
  tr.events.push_back({0.0, PitEventKind::arrival, 0, 0.0});

  auto alive = [](const PitTrajectory& t) { return t.status == PitStatus::active || t.status == PitStatus::top; };
  auto height_now = [](const PitTrajectory& t, double now) {
    const PitAnchor& a = t.anchors.back();
    return std::clamp(a.height + a.slope * (now - a.t), 0.0, 1.0);
  };

  while (true) {
    // Earliest pending time over all three kinds.
    double next = kInfinity;
    for (const auto& t : tr.trajectories) {
      if (t.status == PitStatus::latent) {
        next = std::min(next, t.start_time);
      } else if (alive(t)) {
        next = std::min({next, detail::pit_top_time(t.anchors.back()), detail::pit_death_time(t.anchors.back(), b)});
      }
    }
    if (!(next <= horizon)) break;

    for (auto& t : tr.trajectories) {
      if (!alive(t) || detail::pit_top_time(t.anchors.back()) != next) continue;
      const double v = t.anchors.back().slope;
      if (v <= 0.0) continue;  // lost its slope to an earlier top at this instant
      t.anchors.push_back({next, 1.0, 0.0});
      t.status = PitStatus::top;
      tr.events.push_back({next, PitEventKind::top, t.id, v});
      for (auto& o : tr.trajectories) {
        if (&o == &t || !alive(o)) continue;
        const double h = height_now(o, next);
        if (h > b) {
          o.anchors.push_back({next, h, o.anchors.back().slope - v});
          if (o.status == PitStatus::top && o.anchors.back().slope != 0.0) o.status = PitStatus::active;
        }
      }
    }
    for (auto& t : tr.trajectories) {
      if (!alive(t) || detail::pit_death_time(t.anchors.back(), b) != next) continue;
      t.anchors.push_back({next, 0.0, 0.0});
      t.status = PitStatus::dead;
      t.death_time = next;
      tr.events.push_back({next, PitEventKind::death, t.id, 0.0});
    }
    for (auto& t : tr.trajectories) {
      if (t.status != PitStatus::latent || t.start_time != next) continue;
      t.anchors.push_back({next, b, arrivals[t.id - 1].slope});
      t.status = PitStatus::active;
      tr.events.push_back({next, PitEventKind::arrival, t.id, arrivals[t.id - 1].slope});
    }
  }
  return tr;
}

/// Anchor table: trajectory,t,height,slope,status.
inline void write_pit_csv(std::ostream& out, const PitTrace& tr) {
  out << "# logsweep-pit-trace v1\n";
  out << "# b=" << format_double(tr.b) << " horizon=" << format_double(tr.horizon) << '\n';
  out << "trajectory,t,height,slope\n";
  for (const auto& t : tr.trajectories) {
    for (const auto& a : t.anchors) {
      out << t.id << ',' << format_double(a.t) << ',' << format_double(a.height) << ',' << format_double(a.slope)
          << '\n';
    }
  }
}

inline nlohmann::json arrivals_to_json(const std::vector<PitArrival>& arrivals) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& a : arrivals) j.push_back({{"T", a.time}, {"A", a.slope}});
  return j;
}

inline std::vector<PitArrival> arrivals_from_json(const nlohmann::json& j) {
  require(j.is_array(), "arrival marks must be a JSON array");
  std::vector<PitArrival> out;
  for (const auto& e : j) out.push_back({e.at("T").get<double>(), e.at("A").get<double>()});
  return out;
}

}  // namespace logsweep
