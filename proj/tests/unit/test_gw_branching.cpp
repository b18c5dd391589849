#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "logsweep/gw_branching.hpp"
#include "logsweep/harness/stats.hpp"
#include "support/oracles.hpp"

using namespace logsweep;

namespace {

double binomial_se(double p, int n) { return std::sqrt(p * (1.0 - p) / n); }

}  // namespace

TEST(SimulateGw, PureBirthNeverDecreases) {
  Rng rng(1);
  const GwPath path = simulate_gw({1.0, 0.0}, 1, StopRule::level(50), rng);
  EXPECT_FALSE(path.absorbed);
  EXPECT_TRUE(path.hit_level);
  for (std::size_t i = 1; i < path.points.size(); ++i) {
    EXPECT_EQ(path.points[i].size, path.points[i - 1].size + 1);
    EXPECT_GT(path.points[i].time, path.points[i - 1].time);
  }
}

TEST(SimulateGw, ZeroStartIsAbsorbedAtOnce) {
  Rng rng(1);
  const GwPath path = simulate_gw({2.0, 1.0}, 0, StopRule::until(5.0), rng);
  EXPECT_TRUE(path.absorbed);
  EXPECT_EQ(path.end_time, 0.0);
  ASSERT_EQ(path.points.size(), 1u);
  EXPECT_EQ(path.points[0].size, 0);
}

TEST(SimulateGw, UnitSteps) {
  Rng rng(2);
  const GwPath path = simulate_gw({1.2, 1.0}, 5, StopRule::until(10.0), rng);
  for (std::size_t i = 1; i < path.points.size(); ++i) {
    EXPECT_EQ(std::llabs(path.points[i].size - path.points[i - 1].size), 1);
  }
  if (path.absorbed) {
    EXPECT_EQ(path.final_size(), 0);
  }
}

TEST(SimulateGw, ExtinctionFrequencyIsMuOverLambda) {
  // Reaching 100 before 0 from 1 differs from survival by (1/2)^100.
  Rng rng(1);
  const int n = 100000;
  int absorbed = 0;
  for (int i = 0; i < n; ++i) absorbed += simulate_gw({2.0, 1.0}, 1, StopRule::level(100), rng).absorbed;
  EXPECT_NEAR(static_cast<double>(absorbed) / n, 0.5, 3.0 * binomial_se(0.5, n));
}

TEST(SimulateGw, CapIsAnError) {
  Rng rng(4);
  StopRule stop = StopRule::level(1000000);
  stop.cap = 10;
  EXPECT_THROW(simulate_gw({1.0, 0.0}, 1, stop, rng), CapExceeded);
}

TEST(SimulateGw, SupercriticalAbsorbOnlyIsRejected) {
  Rng rng(4);
  EXPECT_THROW(simulate_gw({2.0, 1.0}, 1, StopRule::absorb(), rng), PreconditionError);
  EXPECT_NO_THROW(simulate_gw({1.0, 2.0}, 1, StopRule::absorb(), rng));
}

TEST(GwTailProb, Boundaries) {
  const GwParams g(2.0, 1.0);
  EXPECT_DOUBLE_EQ(gw_tail_prob(g, 0.0, 1), 1.0);
  EXPECT_NEAR(gw_tail_prob(g, 60.0, 1), 0.5, 1e-12);
  EXPECT_THROW(gw_tail_prob({1.0, 1.0}, 1.0, 1), PreconditionError);
}

TEST(GwTailProb, NonincreasingInJAndInUnitInterval) {
  for (const GwParams g : {GwParams(2.0, 1.0), GwParams(1.0, 1.5), GwParams(1.1, 1.0)}) {
    for (double t : {0.0, 0.3, 1.0, 4.0}) {
      double prev = 1.0;
      for (std::int64_t j = 1; j <= 40; ++j) {
        const double v = gw_tail_prob(g, t, j);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, prev);
        prev = v;
      }
    }
  }
}

TEST(GwTailProb, MatchesMonteCarlo) {
  const GwParams g(2.0, 1.0);
  Rng rng(5);
  const int n = 100000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += simulate_gw(g, 1, StopRule::until(1.0), rng).final_size() >= 3;
  const double exact = gw_tail_prob(g, 1.0, 3);
  EXPECT_NEAR(static_cast<double>(hits) / n, exact, 3.0 * binomial_se(exact, n));
}

TEST(GwSurvivalProb, Values) {
  EXPECT_DOUBLE_EQ(gw_survival_prob({2.0, 1.0}).prob, 0.5);
  EXPECT_NEAR(gw_survival_prob({1.1, 1.0}).prob, 1.0 / 11.0, 1e-15);
  EXPECT_DOUBLE_EQ(gw_survival_prob({1.0, 0.0}).prob, 1.0);
  const auto sub = gw_survival_prob({1.0, 2.0});
  EXPECT_TRUE(sub.subcritical);
  EXPECT_EQ(sub.prob, 0.0);
}

TEST(GwMeanVar, ClosedForm) {
  const auto at0 = gw_mean_var({1.5, 1.0}, 7, 0.0);
  EXPECT_DOUBLE_EQ(at0.mean, 7.0);
  EXPECT_DOUBLE_EQ(at0.variance, 0.0);
  const GwParams g(3.0, 1.0);
  EXPECT_NEAR(gw_mean_var(g, 1, std::log(2.0) / 2.0).mean, 2.0, 1e-14);
  EXPECT_THROW(gw_mean_var({1.0, 1.0}, 1, 1.0), PreconditionError);
}

TEST(GwMeanVar, MatchesMonteCarlo) {
  const GwParams g(1.1, 1.0);
  const auto exact = gw_mean_var(g, 100, 5.0);
  Rng rng(6);
  const int n = 20000;
  std::vector<double> x;
  for (int i = 0; i < n; ++i) x.push_back(static_cast<double>(simulate_gw(g, 100, StopRule::until(5.0), rng).final_size()));
  const Summary s = summarize(x);
  EXPECT_NEAR(s.mean, exact.mean, 3.0 * s.se);
  double m2 = 0.0, m4 = 0.0;
  for (double v : x) {
    m2 += (v - s.mean) * (v - s.mean);
    m4 += std::pow(v - s.mean, 4);
  }
  m2 /= n - 1;
  m4 /= n;
  const double var_se = std::sqrt((m4 - m2 * m2) / n);
  EXPECT_NEAR(m2, exact.variance, 3.0 * var_se);
}

TEST(ConditionedSurvival, FirstStepUpAndNeverAbsorbed) {
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    const GwPath path = simulate_gw_conditioned_survival({1.5, 1.0}, rng, StopRule::level(30));
    ASSERT_GE(path.points.size(), 2u);
    EXPECT_EQ(path.points[1].size, 2);
    EXPECT_FALSE(path.absorbed);
    EXPECT_TRUE(path.hit_level);
  }
}

TEST(ConditionedSurvival, RejectsNullConditioning) {
  Rng rng(7);
  EXPECT_THROW(simulate_gw_conditioned_survival({1.0, 1.0}, rng, StopRule::level(10)), PreconditionError);
  EXPECT_THROW(simulate_gw_conditioned_survival({2.0, 1.0}, rng, StopRule::absorb()), PreconditionError);
}

TEST(ConditionedSurvival, ThirdJumpMatchesRejectionOracle) {
  Rng rng(8);
  const int n = 100000;
  std::map<std::int64_t, double> direct, oracle_law;
  for (int i = 0; i < n; ++i) {
    const GwPath path = simulate_gw_conditioned_survival({1.5, 1.0}, rng, StopRule::level(60));
    direct[path.points[3].size] += 1.0 / n;
  }
  for (auto k : oracle::gw_rejection(1.5, 1.0, 60, 3, n, rng)) oracle_law[k] += 1.0 / n;
  EXPECT_LE(tv_distance(direct, oracle_law), 0.01);
}

TEST(LogDeviation, HandPath) {
  // Z = N^{0.5} on [0, 1) then N on [1, 2], against 0.5 + 0.25 t with N = 100.
  GwPath path;
  path.points = {{0.0, 10}, {1.0, 100}};
  const double d = sup_log_deviation(path, std::log(100.0), 1.0, 0.5, 0.25, 2.0);
  // Worst point: t = 1 on the first piece (0.25) or t = 1 on the second (0.25).
  EXPECT_NEAR(d, 0.25, 1e-12);
}

TEST(PhaseStatistic, RequiresSelection) {
  Rng rng(9);
  EXPECT_THROW(phase_statistic(2, ModelParams(1000, 0.0, 0.5), rng), PreconditionError);
  EXPECT_THROW(phase_statistic(6, ModelParams::power_law(1000, 1.0, 0.2), rng), PreconditionError);
}

TEST(PhaseStatistic, PhaseFiveMedianDecreases) {
  auto median_at = [](std::int64_t n) {
    Rng rng(derive_seed(10, static_cast<std::uint64_t>(n), 0));
    std::vector<double> x;
    for (int i = 0; i < 200; ++i) x.push_back(phase_statistic(5, ModelParams::power_law(n, 1.0, 0.2), rng));
    return median(x);
  };
  EXPECT_LT(median_at(10000), median_at(1000));
}

TEST(PhaseStatistic, AllPhasesFiniteAndNonnegative) {
  Rng rng(11);
  const auto p = ModelParams::power_law(10000, 1.0, 0.2);
  for (int k = 1; k <= 5; ++k) {
    const double v = phase_statistic(k, p, rng);
    EXPECT_TRUE(std::isfinite(v)) << k;
    EXPECT_GE(v, 0.0) << k;
  }
}
