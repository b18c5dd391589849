#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <vector>

#include "logsweep/core/errors.hpp"

namespace logsweep {

/// Order statistics and moments of one statistic over independent replicates.
struct Summary {
  std::size_t replicates = 0;
  std::size_t failures = 0;
  double median = NAN;
  double mean = NAN;
  double se = NAN;
  double q10 = NAN;
  double q25 = NAN;
  double q75 = NAN;
  double q90 = NAN;
  double min = NAN;
  double max = NAN;
};

/// Linear-interpolation quantile (type 7) of sorted data.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  require(!sorted.empty(), "quantile of an empty sample");
  require(q >= 0.0 && q <= 1.0, "quantile level must lie in [0, 1]");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return quantile_sorted(v, 0.5);
}

/// Summary of the finite values; non-finite entries count as failures. The
/// input order does not matter.
inline Summary summarize(std::vector<double> values, std::size_t failures = 0) {
  Summary s;
  std::vector<double> ok;
  ok.reserve(values.size());
  for (double v : values) {
    if (std::isfinite(v)) ok.push_back(v);
    else ++failures;
  }
  s.replicates = ok.size();
  s.failures = failures;
  if (ok.empty()) return s;
  std::sort(ok.begin(), ok.end());
  // Summing the sorted sample keeps the result independent of input order.
  long double sum = 0.0L;
  for (double v : ok) sum += v;
  const long double mean = sum / static_cast<long double>(ok.size());
  long double ss = 0.0L;
  for (double v : ok) ss += (v - mean) * (v - mean);
  s.mean = static_cast<double>(mean);
  s.se = ok.size() > 1 ? std::sqrt(static_cast<double>(ss / static_cast<long double>(ok.size() - 1)) /
                                   static_cast<double>(ok.size()))
                       : NAN;
  s.median = quantile_sorted(ok, 0.5);
  s.q10 = quantile_sorted(ok, 0.10);
  s.q25 = quantile_sorted(ok, 0.25);
  s.q75 = quantile_sorted(ok, 0.75);
  s.q90 = quantile_sorted(ok, 0.90);
  s.min = ok.front();
  s.max = ok.back();
  return s;
}

/// Standard error of the sample median from the normal approximation to the
/// order statistic ranks n/2 -+ sqrt(n)/2.
inline double median_se(std::vector<double> v) {
  require(v.size() >= 2, "median_se needs at least two values");
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  const double half = std::sqrt(n) / 2.0;
  const double lo = quantile_sorted(v, std::clamp((n / 2.0 - half) / (n - 1.0), 0.0, 1.0));
  const double hi = quantile_sorted(v, std::clamp((n / 2.0 + half) / (n - 1.0), 0.0, 1.0));
  return (hi - lo) / 2.0;
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_x - F_y|.
inline double ks_two_sample(std::vector<double> x, std::vector<double> y) {
  require(!x.empty() && !y.empty(), "KS needs two nonempty samples");
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == t) ++i;
    while (j < y.size() && y[j] == t) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

/// Total variation distance between two laws on a discrete set.
template <class Key>
double tv_distance(const std::map<Key, double>& p, const std::map<Key, double>& q) {
  double d = 0.0;
  for (const auto& [k, v] : p) {
    auto it = q.find(k);
    d += std::fabs(v - (it == q.end() ? 0.0 : it->second));
  }
  for (const auto& [k, v] : q) {
    if (p.find(k) == p.end()) d += std::fabs(v);
  }
  return d / 2.0;
}

/// Empirical law of a sample of keys.
template <class Key>
std::map<Key, double> empirical_law(const std::vector<Key>& sample) {
  std::map<Key, double> law;
  for (const auto& k : sample) law[k] += 1.0;
  for (auto& [k, v] : law) v /= static_cast<double>(sample.size());
  return law;
}

}  // namespace logsweep
