#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "logsweep/core/errors.hpp"
#include "logsweep/core/numeric.hpp"
#include "logsweep/core/rng.hpp"
#include "logsweep/model_params.hpp"

using namespace logsweep;

TEST(Rng, SameSeedSameStream) {
  Rng a(derive_seed(7, 3, 11));
  Rng b(derive_seed(7, 3, 11));
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.uniform(), b.uniform());
}

TEST(Rng, DerivedSeedsDiffer) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t cell = 0; cell < 20; ++cell) {
    for (std::uint64_t rep = 0; rep < 50; ++rep) seen.insert(derive_seed(1, cell, rep));
  }
  EXPECT_EQ(seen.size(), 1000u);
}

TEST(Rng, BelowStaysInRangeAndIsRoughlyUniform) {
  Rng rng(5);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto x = rng.below(7);
    ASSERT_LT(x, 7u);
    ++hist[x];
  }
  for (int h : hist) EXPECT_NEAR(h, 10000, 400);
}

TEST(Rng, ExponentialMean) {
  Rng rng(9);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += rng.exponential(4.0);
  EXPECT_NEAR(sum / n, 0.25, 3.0 * 0.25 / std::sqrt(n));
}

TEST(CompensatedSum, RecoversSmallIncrements) {
  CompensatedSum s(1e8);
  for (int i = 0; i < 1000000; ++i) s.add(1e-8);
  EXPECT_NEAR(s.value(), 1e8 + 1e-2, 1e-7);
}

TEST(LogBasePlus, PositivePartConvention) {
  EXPECT_EQ(log_base_plus(0.0, std::log(100.0)), 0.0);
  EXPECT_EQ(log_base_plus(1.0, std::log(100.0)), 0.0);
  EXPECT_NEAR(log_base_plus(10.0, std::log(100.0)), 0.5, 1e-15);
}

TEST(ModelParams, DerivedExponent) {
  const auto p = ModelParams::power_law(100000, 1.0, 0.2);
  EXPECT_NEAR(p.b(), 0.2, 1e-12);
  EXPECT_NEAR(p.selection(), std::pow(1e5, -0.2), 1e-15);
  EXPECT_EQ(p.regime(), SelectionRegime::moderate);
  EXPECT_EQ(ModelParams::strong(1000, 1.0).regime(), SelectionRegime::strong);
  EXPECT_EQ(ModelParams::inverse_log(1000, 1.0).regime(), SelectionRegime::quasi_strong);
}

TEST(ModelParams, RejectsInvalidInput) {
  EXPECT_THROW(ModelParams(1, 1.0, 0.5), PreconditionError);
  EXPECT_THROW(ModelParams(100, 1.0, 0.0), PreconditionError);
  EXPECT_THROW(ModelParams(100, 1.0, 1.5), PreconditionError);
  EXPECT_THROW(ModelParams(100, -1.0, 0.5), PreconditionError);
  EXPECT_THROW(ModelParams::power_law(100, 1.0, 1.0), PreconditionError);
  EXPECT_THROW(require_selection(ModelParams(100, 0.0, 0.5)), PreconditionError);
}

TEST(ModelParams, Levels) {
  const auto p = ModelParams::power_law(10000, 1.0, 0.2);
  EXPECT_EQ(drift_level(p), static_cast<std::int64_t>(std::floor(std::log(1e4) * std::pow(1e4, 0.2))));
  EXPECT_EQ(log_level(p), static_cast<std::int64_t>(std::floor(1e4 / std::log(1e4))));
  EXPECT_EQ(sqrt_log_level(p), static_cast<std::int64_t>(std::floor(1e4 / std::sqrt(std::log(1e4)))));
  EXPECT_EQ(handover_level(p), static_cast<std::int64_t>(std::floor(1e4 * (1.0 - 1.0 / std::sqrt(std::log(1e4))))));
}
