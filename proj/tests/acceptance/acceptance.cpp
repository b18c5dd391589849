// Acceptance run: one PASS/FAIL line per criterion, detail lines indented.
// Exit status is 0 only when every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "logsweep/logsweep.hpp"
#include "logsweep/harness/presets.hpp"
#include "support/oracles.hpp"

using namespace logsweep;

namespace {

template <class... Args>
void note(const char* fmt, Args... args) {
  std::printf("  ");
  std::printf(fmt, args...);
  std::printf("\n");
  std::fflush(stdout);
}

double binomial_se(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

unsigned worker_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string csv_of(const ResultTable& t) {
  std::ostringstream out;
  write_table_csv(out, t);
  return out.str();
}

std::vector<double> medians(const ResultTable& t, const std::string& stat) {
  std::vector<const ResultRow*> rows;
  for (const auto& r : t.rows) {
    if (r.statistic == stat) rows.push_back(&r);
  }
  std::sort(rows.begin(), rows.end(), [](const ResultRow* x, const ResultRow* y) { return x->n < y->n; });
  std::vector<double> out;
  for (const auto* r : rows) out.push_back(r->summary.median);
  return out;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return v.size() >= 2;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.4f", s.empty() ? "" : " ", x);
    s += buf;
  }
  return s;
}

// C1
bool fixation_frequency() {
  bool ok = true;
  const struct {
    std::int64_t n;
    double s;
    std::uint64_t seed;
  } cases[] = {{100, 0.2, 101}, {10000, 0.05, 102}};
  const int reps = 100000;
  for (const auto& c : cases) {
    const ModelParams p(c.n, 1.0, c.s);
    Rng rng(c.seed);
    int fixed = 0;
    for (int i = 0; i < reps; ++i) fixed += moran_outcome(p, 1, rng) == Terminal::fixation;
    const double exact = fixation_prob_exact(p, 1);
    const double freq = static_cast<double>(fixed) / reps;
    const double z = (freq - exact) / binomial_se(exact, reps);
    const bool pass = std::fabs(z) <= 3.0;
    note("N=%lld s=%.2f frequency=%.5f exact=%.5f z=%.2f %s", static_cast<long long>(c.n), c.s, freq, exact, z,
           pass ? "ok" : "off");
    ok = ok && pass;
    if (c.n == 10000) {
      const double branching = c.s / (1.0 + c.s);
      const double rel = std::fabs(exact - branching) / branching;
      note("N=10000 exact=%.6f s/(1+s)=%.6f relative gap=%.2e", exact, branching, rel);
      ok = ok && rel <= 0.02;
    }
  }
  return ok;
}

// C2
template <class Sim, class Oracle>
double max_prefix_tv(int reps, Sim&& sim, Oracle&& oracle_run) {
  const int jumps = 10;
  std::vector<std::map<std::int64_t, double>> direct(jumps + 1), oracle_law(jumps + 1);
  for (int i = 0; i < reps; ++i) {
    const auto states = sim();
    for (int j = 1; j <= jumps; ++j) direct[j][states[j]] += 1.0 / reps;
  }
  int kept = 0;
  while (kept < reps) {
    std::vector<std::int64_t> states;
    if (!oracle_run(states)) continue;
    for (int j = 1; j <= jumps; ++j) oracle_law[j][states[j]] += 1.0 / reps;
    ++kept;
  }
  double worst = 0.0;
  for (int j = 1; j <= jumps; ++j) worst = std::max(worst, tv_distance(direct[j], oracle_law[j]));
  return worst;
}

bool conditioning() {
  const int reps = 100000;
  const ModelParams p(50, 1.0, 0.5);
  Rng a(201), b(202);
  const double moran_tv = max_prefix_tv(
      reps,
      [&] {
        const SweepPath path = simulate_moran_conditioned_fixation(p, a);
        std::vector<std::int64_t> m;
        for (const auto& pt : path.points) m.push_back(p.n() - pt.residents);
        return m;
      },
      [&](std::vector<std::int64_t>& states) {
        const double up = (1.0 + p.selection()) / (2.0 + p.selection());
        std::int64_t m = 1;
        states.assign(1, m);
        while (m > 0 && m < p.n()) {
          m += b.bernoulli(up) ? 1 : -1;
          states.push_back(m);
        }
        return m == p.n();
      });
  note("Moran N=50 s=0.5: max TV over jumps 1..10 = %.4f", moran_tv);

  const GwParams g(1.5, 1.0);
  const std::int64_t proxy = 60;
  Rng c(203), d(204);
  const double gw_tv = max_prefix_tv(
      reps,
      [&] {
        const GwPath path = simulate_gw_conditioned_survival(g, c, StopRule::level(proxy));
        std::vector<std::int64_t> k;
        for (const auto& pt : path.points) k.push_back(pt.size);
        return k;
      },
      [&](std::vector<std::int64_t>& states) {
        const double up = g.birth / (g.birth + g.death);
        std::int64_t k = 1;
        states.assign(1, k);
        while (k > 0 && k < proxy) {
          k += d.bernoulli(up) ? 1 : -1;
          states.push_back(k);
        }
        return k == proxy;
      });
  note("GW lambda=1.5 mu=1 (survival proxy: reach 60): max TV over jumps 1..10 = %.4f", gw_tv);
  return moran_tv <= 0.01 && gw_tv <= 0.01;
}

// C3
bool time_change() {
  const ModelParams p(30, 1.0, 0.3);
  Rng a(301), b(302);
  const int reps = 100000;
  std::vector<double> x, y;
  x.reserve(reps);
  y.reserve(reps);
  for (int i = 0; i < reps; ++i) {
    x.push_back(sample_time_changed_pair(p, a).path.fixation_time());
    y.push_back(simulate_moran_conditioned_fixation(p, b, RecordSpec::level_hits({})).fixation_time());
  }
  const double ks = ks_two_sample(x, y);
  note("N=30 s=0.3: KS = %.4f (mean %.3f vs %.3f)", ks, summarize(x).mean, summarize(y).mean);
  return ks <= 0.02;
}

// C4 and C5 share one run of the house preset.
ResultTable house_table() {
  static const ResultTable t = [] {
    const auto start = std::chrono::steady_clock::now();
    ResultTable r = run_experiment(preset("house"), worker_threads());
    const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    note("house preset: N in {1e3, 1e4, 1e5}, 200 replicates, %.0f s", secs);
    return r;
  }();
  return t;
}

bool house_fixation_time() {
  const ResultTable t = house_table();
  const ExperimentConfig c = preset("house");
  const Verdict v = convergence_verdict(t, c.checks.front());
  for (const auto& r : t.rows) {
    if (r.statistic == "sigma_fix") {
      note("N=%lld sigma_fix median=%.4f se=%.4f", static_cast<long long>(r.n), r.summary.median, r.summary.se);
    }
  }
  note("gap to 1.6 monotone within 1 SE: %s; final gap %.4f (limit %.2f)", v.monotone ? "yes" : "no", v.final_gap,
         v.threshold);
  return v.pass;
}

bool house_distances() {
  const ResultTable t = house_table();
  bool ok = true;
  for (const char* stat : {"sup_d1", "sup_d0", "m1_h1", "m1_h0"}) {
    const auto m = medians(t, stat);
    const bool dec = strictly_decreasing(m);
    note("%s medians %s %s", stat, join(m).c_str(), dec ? "decreasing" : "NOT decreasing");
    ok = ok && dec;
    if (stat[0] == 'm') {
      note("%s at N=1e5: %.4f (limit 0.15)", stat, m.back());
      ok = ok && m.back() < 0.15;
    }
  }
  return ok;
}

// C6
bool branching_moments() {
  const struct {
    double lambda, mu, t;
    std::int64_t j;
  } grid[] = {{2.0, 1.0, 1.0, 3}, {1.5, 1.0, 2.0, 5}, {1.2, 1.0, 3.0, 2},
              {3.0, 1.0, 0.5, 4}, {1.0, 2.0, 1.0, 2}, {0.5, 1.5, 0.7, 1}};
  const int reps = 100000;
  bool ok = true;
  std::uint64_t seed = 600;
  for (const auto& c : grid) {
    const GwParams g(c.lambda, c.mu);
    Rng rng(++seed);
    std::vector<double> x;
    x.reserve(reps);
    for (int i = 0; i < reps; ++i) x.push_back(static_cast<double>(simulate_gw(g, 1, StopRule::until(c.t), rng).final_size()));
    double hits = 0.0;
    for (double v : x) hits += v >= static_cast<double>(c.j);
    const double tail = gw_tail_prob(g, c.t, c.j);
    const double z_tail = (hits / reps - tail) / binomial_se(tail, reps);

    const auto mv = gw_mean_var(g, 1, c.t);
    const Summary s = summarize(x);
    const double z_mean = (s.mean - mv.mean) / s.se;
    double m2 = 0.0, m4 = 0.0;
    for (double v : x) {
      m2 += (v - s.mean) * (v - s.mean);
      m4 += std::pow(v - s.mean, 4);
    }
    m2 /= reps - 1;
    m4 /= reps;
    const double z_var = (m2 - mv.variance) / std::sqrt((m4 - m2 * m2) / reps);
    const bool pass = std::fabs(z_tail) <= 3.0 && std::fabs(z_mean) <= 3.0 && std::fabs(z_var) <= 3.0;
    note("lambda=%.1f mu=%.1f t=%.1f j=%lld: z(tail)=%.2f z(mean)=%.2f z(var)=%.2f %s", c.lambda, c.mu, c.t,
           static_cast<long long>(c.j), z_tail, z_mean, z_var, pass ? "ok" : "off");
    ok = ok && pass;
  }
  return ok;
}

// C7
bool walk_identities() {
  bool ok = true;
  {
    const double p = 0.7;
    const std::int64_t n = 6;
    const double norm = oracle::ruin_up(p, 1, n);
    oracle::LawComparison cmp;
    oracle::enumerate_paths(
        1, n, 1, n - 1, 29, [p](std::int64_t, int dir) { return dir > 0 ? p : 1.0 - p; },
        [p](std::int64_t k, int dir) {
          const double up = h_transform_up_prob(k, p);
          return dir > 0 ? up : 1.0 - up;
        },
        [&](const std::vector<std::int64_t>&, double wp, double wq) { cmp.add(wp / norm, wq); });
    note("(a) N=6 p=0.7: %zu paths, TV=%.2e, unenumerated mass %.1e", cmp.paths(), cmp.tv(), cmp.tail_q());
    ok = ok && cmp.tv() < 1e-10;
  }
  for (std::int64_t n : {3, 4, 5}) {
    for (double p : {0.2, 0.3, 0.45}) {
      const double q = 1.0 - p;
      const double norm = q * (1.0 - oracle::ruin_up(p, n - 1, n));
      oracle::LawComparison cmp;
      oracle::enumerate_paths(
          n, 0, 1, n - 1, 31, [p, q](std::int64_t, int dir) { return dir > 0 ? p : q; },
          [](std::int64_t, int) { return 1.0; },
          [&](const std::vector<std::int64_t>& path, double wp, double) {
            const LatticePath v = reverse_path({path});
            double wq = 1.0;
            for (std::size_t i = 1; i < v.values.size(); ++i) {
              const double up = wstar_up_prob(v.values[i - 1], q);
              wq *= v.values[i] > v.values[i - 1] ? up : 1.0 - up;
            }
            cmp.add(wp / norm, wq);
          });
      const bool pass = cmp.tv() < 1e-10;
      note("(b) N=%lld p=%.2f: %zu paths, TV=%.2e, unenumerated mass %.1e", static_cast<long long>(n), p,
             cmp.paths(), cmp.tv(), cmp.tail_p());
      ok = ok && pass;
    }
  }
  int grid_points = 0;
  bool drift_ok = true;
  for (double p = 0.505; p < 1.0; p += 0.015) {
    const DriftCheck c = drift_dominates(p, 10000);
    ++grid_points;
    if (!c.holds || !c.equal_at_one) {
      drift_ok = false;
      note("(c) p=%.3f fails", p);
    }
  }
  note("(c) drift comparison for 2 <= k <= 1e4 on %d values of p in [0.505, 0.995]: %s", grid_points,
         drift_ok ? "holds" : "fails");
  return ok && drift_ok;
}

// C8
bool walk_trends() {
  bool ok = true;
  const std::map<std::string, std::string> stats{
      {"drawdown-up", "drawdown_up"}, {"drawdown-down", "drawdown_down"}, {"fluctuation", "lil_fluctuation"}};
  for (const auto& [id, stat] : stats) {
    const ExperimentConfig c = preset(id);
    const ResultTable t = run_experiment(c, worker_threads());
    const auto m = medians(t, stat);
    const bool dec = strictly_decreasing(m);
    note("%s (%zu replicates) medians %s %s", stat.c_str(), c.replicates, join(m).c_str(),
           dec ? "decreasing" : "NOT decreasing");
    ok = ok && dec;
  }
  return ok;
}

// C9
bool m1_metric() {
  constexpr double tol = 1e-3;
  Rng rng(901);
  int contained = 0;
  double widest = 0.0;
  for (int i = 0; i < 100; ++i) {
    const CadlagPath f = experiments::random_step(rng, 1 + rng.below(5));
    const CadlagPath g = experiments::random_step(rng, 1 + rng.below(5));
    const M1Bracket b = m1_distance(f, g, tol);
    const auto dense = oracle::dense_frechet(f, g, 2000);
    widest = std::max(widest, b.upper - b.lower);
    // The grid value overestimates the distance by at most its spacing.
    if (b.lower <= dense.value + 1e-12 && b.upper >= dense.value - dense.spacing - 1e-12 &&
        b.upper - b.lower <= tol + 1e-15) {
      ++contained;
    }
  }
  note("random pairs: %d/100 brackets consistent with the dense oracle, widest bracket %.1e", contained, widest);

  const CadlagPath zero = CadlagPath::step(0.0, 1.0, 0.0, {});
  const CadlagPath offset = CadlagPath::step(0.0, 1.0, 0.4, {});
  const M1Bracket b = m1_distance(zero, offset, tol);
  const bool offset_ok = b.lower <= 0.4 + 1e-12 && b.upper >= 0.4 - 1e-12 && b.upper - b.lower <= tol;
  note("constant offset 0.4: bracket [%.6f, %.6f]", b.lower, b.upper);

  const ExperimentConfig c = preset("axioms");
  const ResultTable t = run_experiment(c, worker_threads());
  bool axioms_ok = true;
  for (const auto& chk : c.checks) {
    double worst = 0.0;
    for (const auto& r : t.rows) {
      if (r.statistic == chk.statistic) worst = std::max(worst, r.summary.max);
    }
    note("axiom %s: worst %.2e over %zu triples per grid point (limit %.0e)", chk.statistic.c_str(), worst,
           c.replicates, chk.threshold);
    axioms_ok = axioms_ok && worst <= chk.threshold;
  }
  return contained == 100 && offset_ok && axioms_ok;
}

// C10
const PitEvent* find_event(const PitTrace& tr, PitEventKind kind, std::size_t id) {
  for (const auto& e : tr.events) {
    if (e.kind == kind && e.id == id) return &e;
  }
  return nullptr;
}

double event_time(const PitTrace& tr, PitEventKind kind, std::size_t id) {
  const PitEvent* e = find_event(tr, kind, id);
  return e ? e->time : kInfinity;
}

bool pit() {
  bool ok = true;
  {
    const House h(1.0, 0.2);
    const PitTrace tr = pit_evolve({{0.0, 1.0}}, 0.2, 3.0);
    const bool exact = event_time(tr, PitEventKind::top, 1) == h.ridge() &&
                       event_time(tr, PitEventKind::death, 0) == h.t0();
    double worst = 0.0;
    const CadlagPath h1 = tr.path(1, -0.5, 3.0);
    const CadlagPath h0 = tr.path(0, -0.5, 3.0);
    for (int i = 0; i <= 3500; ++i) {
      const double t = -0.5 + 0.001 * i;
      worst = std::max({worst, std::fabs(h1.value(t) - house_eval(h, 1, t)), std::fabs(h0.value(t) - house_eval(h, 0, t))});
    }
    note("single arrival: top %.17g, resident death %.17g, bitwise equal to the house: %s; max path gap %.1e",
           event_time(tr, PitEventKind::top, 1), event_time(tr, PitEventKind::death, 0), exact ? "yes" : "no", worst);
    ok = ok && exact && worst <= 1e-12;
  }
  struct Expect {
    PitEventKind kind;
    std::size_t id;
    double time;
  };
  const struct {
    const char* name;
    std::vector<PitArrival> arrivals;
    double horizon;
    std::vector<Expect> events;
  } scenarios[] = {
      {"overtaking (T2=0.3, A2=2)",
       {{0.0, 1.0}, {0.3, 2.0}},
       3.0,
       {{PitEventKind::top, 2, 0.7}, {PitEventKind::death, 0, 1.1}, {PitEventKind::death, 1, 1.4}}},
      {"kinked follower (T2=0.5, A2=2)",
       {{0.0, 1.0}, {0.5, 2.0}},
       3.0,
       {{PitEventKind::top, 1, 0.8},
        {PitEventKind::top, 2, 1.0},
        {PitEventKind::death, 0, 1.3},
        {PitEventKind::death, 1, 1.8}}},
      {"disjoint houses (T2=2)",
       {{0.0, 1.0}, {2.0, 1.0}},
       4.0,
       {{PitEventKind::death, 0, 1.6}, {PitEventKind::top, 2, 2.8}, {PitEventKind::death, 1, 3.6}}},
  };
  for (const auto& s : scenarios) {
    const PitTrace tr = pit_evolve(s.arrivals, 0.2, s.horizon);
    double worst = 0.0;
    for (const auto& e : s.events) worst = std::max(worst, std::fabs(event_time(tr, e.kind, e.id) - e.time));
    note("%s: max event-time error %.1e", s.name, worst);
    ok = ok && worst <= 1e-12;
  }

  // Reported only.
  const ExperimentConfig c = preset("clonal");
  const ResultTable t = run_experiment(c, worker_threads());
  const auto m = medians(t, "m1_max");
  note("INFO clonal b=0.3 grid {1000, 3162, 10000}, %zu replicates: median M1 upper bound %s (%s)", c.replicates,
         join(m).c_str(), strictly_decreasing(m) ? "decreasing" : "not decreasing");
  return ok;
}

// C11
bool determinism() {
  bool ok = true;
  std::size_t checked = 0;
  for (const auto& id : preset_ids()) {
    ExperimentConfig c = preset(id);
    if (c.grid.front() >= 1000) c.grid = {1000, 2000, 4000};
    c.replicates = 4;
    const std::string one = csv_of(run_experiment(c, 1));
    const bool same = one == csv_of(run_experiment(c, 1)) && one == csv_of(run_experiment(c, 2)) &&
                      one == csv_of(run_experiment(c, 4));
    if (!same) note("%s: CSV differs between runs", id.c_str());
    ok = ok && same;
    ++checked;
  }
  note("%zu presets at reduced size (4 replicates), 1, 2 and 4 threads: %s", checked,
         ok ? "byte-identical" : "differences found");
  return ok;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<bool()>>> criteria = {
      {"fixation probability", fixation_frequency},
      {"conditioned simulators vs rejection", conditioning},
      {"time-change identity", time_change},
      {"house fixation time", house_fixation_time},
      {"house sup and M1 distances", house_distances},
      {"branching tail and moments", branching_moments},
      {"walk identities", walk_identities},
      {"walk drawdowns and fluctuation", walk_trends},
      {"M1 metric", m1_metric},
      {"trajectory system", pit},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    bool pass = false;
    try {
      pass = criteria[i].second();
    } catch (const std::exception& e) {
      note("error: %s", e.what());
    }
    const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %zu %s (%.0f s)\n", pass ? "PASS" : "FAIL", i + 1, criteria[i].first, secs);
    std::fflush(stdout);
    failed += !pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
