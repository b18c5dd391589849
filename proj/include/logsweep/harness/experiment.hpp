#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "logsweep/core/errors.hpp"
#include "logsweep/core/rng.hpp"
#include "logsweep/gw_branching.hpp"
#include "logsweep/harness/config.hpp"
#include "logsweep/harness/parallel.hpp"
#include "logsweep/harness/stats.hpp"
#include "logsweep/m1_metric.hpp"
#include "logsweep/model_params.hpp"
#include "logsweep/moran.hpp"
#include "logsweep/multi_moran.hpp"
#include "logsweep/scaling_house.hpp"
#include "logsweep/sweep_io.hpp"
#include "logsweep/walk_lab.hpp"

namespace logsweep {

/// Per-replicate statistics of one experiment at one grid point. A replicate
/// that exceeds its event cap is recorded as a failure in every column.
struct ExperimentDef {
  std::string command;
  std::string id;
  std::vector<std::string> statistics;
  std::function<std::vector<double>(const ExperimentConfig&, const ModelParams&, Rng&)> replicate;
};

namespace experiments {

inline std::vector<double> sweep(const ExperimentConfig& c, const ModelParams& p, Rng& rng) {
  RecordSpec spec = RecordSpec::full();
  spec.cap = c.cap;
  const SweepPath path = simulate_moran_conditioned_fixation(p, rng, spec);
  const House h(p);
  const Window w = default_window(h, c.eps);
  const CadlagPath H1 = rescale(path, p, 1, w.alpha, w.beta);
  const CadlagPath H0 = rescale(path, p, 0, w.alpha, w.beta);
  const CadlagPath h1 = house_path(h, 1, w.alpha, w.beta);
  const CadlagPath h0 = house_path(h, 0, w.alpha, w.beta);
  return {fixation_time_rescaled(path, p), sup_distance_restricted(H1, h1, 1, c.eps, h),
          sup_distance_restricted(H0, h0, 0, c.eps, h), m1_distance(H1, h1, c.tol).upper,
          m1_distance(H0, h0, c.tol).upper};
}

inline ExperimentDef phase(int k) {
  return {"phases", "phase" + std::to_string(k), {"phase" + std::to_string(k)},
          [k](const ExperimentConfig& c, const ModelParams& p, Rng& rng) {
            PhaseOptions opt;
            opt.horizon = c.horizon;
            opt.cap = c.cap;
            return std::vector<double>{phase_statistic(k, p, rng, opt)};
          }};
}

/// Y1 from one conditioned mutant on [-eps, (1-b)/a] against (b + a t) 1{t >= 0};
/// Y0 from floor(N / sqrt log N) on [0, (1-b)/a + eps] against (1 - a t) 1{t < (1-b)/a}.
inline std::vector<double> embedded_m1(const ExperimentConfig& c, const ModelParams& p, Rng& rng) {
  require_selection(p);
  const double t_ab = (1.0 - p.b()) / p.a();
  const double scale = p.time_scale();
  StopRule s1 = StopRule::until(t_ab * scale);
  s1.cap = c.cap;
  const GwPath z1 = simulate_gw_conditioned_survival(GwParams::mutant(p), rng, s1);
  const CadlagPath Y1 = rescale_gw(z1, p, 0.0, -c.eps, t_ab);
  const CadlagPath y1({{-c.eps, 0.0, 0.0}, {0.0, 0.0, p.b()}, {t_ab, 1.0, 1.0}});
  StopRule s0 = StopRule::until((t_ab + c.eps) * scale);
  s0.cap = c.cap;
  const std::int64_t start = sqrt_log_level(p);
  const GwPath z0 = simulate_gw(GwParams::resident(p), start, s0, rng);
  const double y_start = log_base_plus(static_cast<double>(start), p.log_n());
  const CadlagPath Y0 = rescale_gw(z0, p, y_start, 0.0, t_ab + c.eps);
  const CadlagPath y0({{0.0, 1.0, 1.0}, {t_ab, p.b(), 0.0}, {t_ab + c.eps, 0.0, 0.0}});
  return {m1_distance(Y1, y1, c.tol).upper, m1_distance(Y0, y0, c.tol).upper};
}

inline CadlagPath random_step(Rng& rng, std::size_t breaks) {
  std::vector<double> ts;
  for (std::size_t i = 0; i < breaks; ++i) ts.push_back(rng.uniform());
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::vector<std::pair<double, double>> steps;
  for (double t : ts) {
    if (t > 0.0) steps.push_back({t, rng.uniform()});
  }
  return CadlagPath::step(0.0, 1.0, rng.uniform(), steps);
}

/// Metric axioms on random step functions with min(N, 5) breakpoints:
/// d(f, f), the gap between the brackets of d(f, g) and d(g, f), and the
/// excess of d(f, h) over d(f, g) + d(g, h). All three are 0 up to tol.
inline std::vector<double> axioms(const ExperimentConfig& c, const ModelParams& p, Rng& rng) {
  const auto breaks = static_cast<std::size_t>(std::min<std::int64_t>(p.n(), 5));
  const CadlagPath f = random_step(rng, breaks);
  const CadlagPath g = random_step(rng, breaks);
  const CadlagPath h = random_step(rng, breaks);
  const M1Bracket ff = m1_distance(f, f, c.tol);
  const M1Bracket fg = m1_distance(f, g, c.tol);
  const M1Bracket gf = m1_distance(g, f, c.tol);
  const M1Bracket gh = m1_distance(g, h, c.tol);
  const M1Bracket fh = m1_distance(f, h, c.tol);
  return {ff.upper, std::max({0.0, fg.lower - gf.upper, gf.lower - fg.upper}),
          std::max(0.0, fh.lower - fg.upper - gh.upper)};
}

inline std::vector<double> drawdown_up(const ExperimentConfig& c, const ModelParams& p, Rng& rng) {
  require_selection(p);
  const double s = p.selection();
  const LatticePath w = simulate_conditioned_walk((1.0 + s) / (2.0 + s), 1, p.n(), rng, c.cap);
  return {log_drawdown_up(w, p.n())};
}

inline std::vector<double> drawdown_down(const ExperimentConfig& c, const ModelParams& p, Rng& rng) {
  require_selection(p);
  const double s = p.selection();
  while (true) {
    const LatticePath w = simulate_walk(1.0 / (2.0 + s), sqrt_log_level(p), 2 * p.n(), rng, c.cap);
    if (w.values.back() == 0) return {log_drawdown_down(w, p.n())};
  }
}

/// n_max = N^1.2 Bessel-like steps.
inline std::vector<double> fluctuation(const ExperimentConfig&, const ModelParams& p, Rng& rng) {
  const auto n_max = static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(p.n()), 1.2)));
  return {lil_fluctuation_stat(n_max, p.n(), rng)};
}

inline std::vector<double> clonal(const ExperimentConfig& c, const ModelParams& p, Rng& rng) {
  MultiMoranOptions opt;
  opt.lambda = c.lambda;
  opt.gamma = c.gamma;
  opt.horizon = c.horizon.value_or(4.0);
  opt.record_delta = c.record_delta;
  opt.cap = c.cap;
  const PitComparison cmp = pit_vs_moran_distance(p, opt, rng, c.tol);
  return {cmp.max_upper(), cmp.distances.front().bracket.upper, static_cast<double>(cmp.distances.size() - 1)};
}

}  // namespace experiments

inline const std::vector<ExperimentDef>& experiment_registry() {
  static const std::vector<ExperimentDef> reg = [] {
    const std::vector<std::string> sweep_stats{"sigma_fix", "sup_d1", "sup_d0", "m1_h1", "m1_h0"};
    std::vector<ExperimentDef> r;
    for (const char* id : {"house", "tent", "strong"}) r.push_back({"sweep", id, sweep_stats, experiments::sweep});
    for (int k = 1; k <= 5; ++k) r.push_back(experiments::phase(k));
    r.push_back({"phases", "growth-from-power", {"growth_dev"},
                 [](const ExperimentConfig& c, const ModelParams& p, Rng& rng) {
                   PhaseOptions opt;
                   opt.horizon = c.horizon;
                   opt.cap = c.cap;
                   return std::vector<double>{growth_deviation_statistic(p, c.beta, rng, opt)};
                 }});
    r.push_back({"phases", "decline-from-power", {"decline_dev"},
                 [](const ExperimentConfig& c, const ModelParams& p, Rng& rng) {
                   PhaseOptions opt;
                   opt.cap = c.cap;
                   return std::vector<double>{decline_deviation_statistic(p, c.beta, rng, opt)};
                 }});
    r.push_back({"m1", "embedded-m1", {"m1_y1", "m1_y0"}, experiments::embedded_m1});
    r.push_back({"m1", "axioms", {"self", "asymmetry", "triangle_excess"}, experiments::axioms});
    r.push_back({"walks", "drawdown-up", {"drawdown_up"}, experiments::drawdown_up});
    r.push_back({"walks", "drawdown-down", {"drawdown_down"}, experiments::drawdown_down});
    r.push_back({"walks", "fluctuation", {"lil_fluctuation"}, experiments::fluctuation});
    for (const char* id : {"clonal", "clonal-strong"}) {
      r.push_back({"clonal", id, {"m1_max", "m1_resident", "contenders"}, experiments::clonal});
    }
    return r;
  }();
  return reg;
}

inline const ExperimentDef& find_experiment(const std::string& id) {
  for (const auto& d : experiment_registry()) {
    if (d.id == id) return d;
  }
  throw PreconditionError("unknown experiment '" + id + "'");
}

struct ResultRow {
  std::string experiment;
  std::int64_t n;
  double a;
  double b;
  double phi;
  std::string statistic;
  Summary summary;
};

struct ResultTable {
  std::string experiment;
  std::vector<ResultRow> rows;
  std::vector<std::string> warnings;
  /// True when some replicate hit its event cap.
  bool partial = false;

  const ResultRow* find(const std::string& statistic, std::int64_t n) const {
    for (const auto& r : rows) {
      if (r.statistic == statistic && r.n == n) return &r;
    }
    return nullptr;
  }
};

/// Runs every grid point and replicate of the configured experiment on
/// `threads` workers. Replicate r at grid point N draws from the stream
/// derive_seed(seed, N, r), so results do not depend on the schedule.
inline ResultTable run_experiment(const ExperimentConfig& c, unsigned threads = 1) {
  const ExperimentDef& def = find_experiment(c.experiment);
  require(c.command.empty() || c.command == def.command,
          "experiment '" + c.experiment + "' belongs to command '" + def.command + "'");
  require(!c.grid.empty(), "the grid must list at least one N");
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    require(c.grid[i] >= 2, "grid values must be >= 2");
    for (std::size_t j = 0; j < i; ++j) require(c.grid[i] != c.grid[j], "grid values must be distinct");
  }
  std::vector<std::int64_t> grid = c.grid;
  std::sort(grid.begin(), grid.end());
  std::vector<ModelParams> params;
  for (auto n : grid) params.push_back(make_params(c, n));

  ResultTable table;
  table.experiment = def.id;
  if (c.replicates == 0) table.warnings.push_back("replicates = 0: the table is empty");
  const std::size_t stats = def.statistics.size();
  const std::size_t reps = c.replicates;
  std::vector<std::vector<double>> values(grid.size() * reps);
  parallel_for(values.size(), threads, [&](std::size_t idx) {
    const std::size_t cell = idx / reps;
    const std::size_t r = idx % reps;
    Rng rng(derive_seed(c.seed, static_cast<std::uint64_t>(grid[cell]), r));
    try {
      auto v = def.replicate(c, params[cell], rng);
      require(v.size() == stats, "experiment returned the wrong number of statistics");
      values[idx] = std::move(v);
    } catch (const CapExceeded&) {
      values[idx].assign(stats, NAN);
    }
  });
  if (reps == 0) return table;
  for (std::size_t cell = 0; cell < grid.size(); ++cell) {
    const ModelParams& p = params[cell];
    for (std::size_t s = 0; s < stats; ++s) {
      std::vector<double> col;
      col.reserve(reps);
      for (std::size_t r = 0; r < reps; ++r) col.push_back(values[cell * reps + r][s]);
      ResultRow row{def.id, grid[cell], p.a(), p.b(), p.phi(), def.statistics[s], summarize(std::move(col))};
      if (row.summary.failures > 0) {
        table.partial = true;
        table.warnings.push_back("N=" + std::to_string(grid[cell]) + " " + def.statistics[s] + ": " +
                                 std::to_string(row.summary.failures) + " replicates hit the event cap");
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

inline constexpr const char* kTableHeader = "# logsweep-table v1";

inline void write_table_csv(std::ostream& out, const ResultTable& t) {
  out << kTableHeader << '\n';
  out << "experiment,N,a,b,phi,statistic,replicates,failures,median,mean,se,q10,q25,q75,q90,min,max\n";
  for (const auto& r : t.rows) {
    const Summary& s = r.summary;
    out << r.experiment << ',' << r.n << ',' << format_double(r.a) << ',' << format_double(r.b) << ','
        << format_double(r.phi) << ',' << r.statistic << ',' << s.replicates << ',' << s.failures;
    for (double v : {s.median, s.mean, s.se, s.q10, s.q25, s.q75, s.q90, s.min, s.max}) {
      out << ',' << (std::isfinite(v) ? format_double(v) : std::string("nan"));
    }
    out << '\n';
  }
}

struct Verdict {
  std::string statistic;
  double target = 0.0;
  double threshold = 0.0;
  bool pass = false;
  bool monotone = false;
  double final_gap = NAN;
  std::string reason;
};

/// PASS iff |median - target| never grows by more than one standard error
/// between consecutive grid points and ends at most `threshold`.
inline Verdict convergence_verdict(const ResultTable& t, const Check& check) {
  std::vector<const ResultRow*> rows;
  for (const auto& r : t.rows) {
    if (r.statistic == check.statistic) rows.push_back(&r);
  }
  require(rows.size() >= 3, "convergence needs at least 3 grid points for '" + check.statistic + "'");
  std::sort(rows.begin(), rows.end(), [](const ResultRow* x, const ResultRow* y) { return x->n < y->n; });
  Verdict v;
  v.statistic = check.statistic;
  v.target = check.target;
  v.threshold = check.threshold;
  v.monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i]->summary.replicates == 0) {
      v.monotone = false;
      v.reason = "no successful replicates at N=" + std::to_string(rows[i]->n);
      return v;
    }
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const Summary& a = rows[i - 1]->summary;
    const Summary& b = rows[i]->summary;
    const double slack = std::max(std::isfinite(a.se) ? a.se : 0.0, std::isfinite(b.se) ? b.se : 0.0);
    if (std::fabs(b.median - check.target) > std::fabs(a.median - check.target) + slack) {
      v.monotone = false;
      v.reason = "gap grows from N=" + std::to_string(rows[i - 1]->n) + " to N=" + std::to_string(rows[i]->n);
    }
  }
  v.final_gap = std::fabs(rows.back()->summary.median - check.target);
  const bool close = v.final_gap <= check.threshold;
  if (!close && v.reason.empty()) v.reason = "final gap above threshold";
  v.pass = v.monotone && close;
  return v;
}

inline std::vector<Verdict> convergence_report(const ResultTable& t, const std::vector<Check>& checks) {
  std::vector<Verdict> out;
  for (const auto& c : checks) out.push_back(convergence_verdict(t, c));
  return out;
}

inline nlohmann::json summary_json(const ExperimentConfig& c, const ResultTable& t, const std::vector<Verdict>& v) {
  nlohmann::json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["experiment"] = t.experiment;
  j["statement"] = c.statement;
  j["config"] = to_json(c);
  j["partial"] = t.partial;
  j["warnings"] = t.warnings;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : t.rows) {
    const Summary& s = r.summary;
    auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
    j["rows"].push_back({{"N", r.n}, {"statistic", r.statistic}, {"replicates", s.replicates},
                         {"failures", s.failures}, {"median", num(s.median)}, {"mean", num(s.mean)},
                         {"se", num(s.se)}, {"q90", num(s.q90)}});
  }
  j["verdicts"] = nlohmann::json::array();
  for (const auto& x : v) {
    j["verdicts"].push_back({{"statistic", x.statistic}, {"target", x.target}, {"threshold", x.threshold},
                             {"pass", x.pass}, {"final_gap", std::isfinite(x.final_gap) ? nlohmann::json(x.final_gap)
                                                                                       : nlohmann::json(nullptr)},
                             {"reason", x.reason}});
  }
  return j;
}

/// Writes <out>/<experiment>.csv and <out>/<experiment>.json.
inline void persist(const ExperimentConfig& c, const ResultTable& t, const std::vector<Verdict>& v) {
  std::filesystem::create_directories(c.out);
  const std::filesystem::path base = std::filesystem::path(c.out) / t.experiment;
  std::ofstream csv(base.string() + ".csv", std::ios::binary);
  if (!csv) throw Error("cannot write " + base.string() + ".csv");
  write_table_csv(csv, t);
  std::ofstream js(base.string() + ".json", std::ios::binary);
  if (!js) throw Error("cannot write " + base.string() + ".json");
  js << summary_json(c, t, v).dump(2) << '\n';
}

}  // namespace logsweep
