#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace logsweep {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Neumaier-compensated running sum. Sojourn times are accumulated with this
/// so that fixation times stay accurate over 10^8 and more events.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double start) : sum_(start) {}

  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// log_N^+(x) = max(log x / log N, 0), with log_N^+(0) := 0.
inline double log_base_plus(double x, double log_n) noexcept {
  if (x <= 1.0) return 0.0;
  return std::log(x) / log_n;
}

/// 1 - r^k for r = exp(log_r), accurate when r^k is close to 1 or tiny.
inline double one_minus_pow(double log_r, double k) noexcept { return -std::expm1(k * log_r); }

}  // namespace logsweep
