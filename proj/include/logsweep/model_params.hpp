#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "logsweep/core/errors.hpp"

namespace logsweep {

/// How the scaling factor phi_N is tied to N.
enum class PhiRule {
  power,        ///< phi_N = N^{-b}
  inverse_log,  ///< phi_N = 1 / log N
  constant,     ///< phi_N = c, independent of N
};

enum class SelectionRegime { moderate, quasi_strong, strong };

inline const char* to_string(SelectionRegime r) {
  switch (r) {
    case SelectionRegime::moderate: return "moderate";
    case SelectionRegime::quasi_strong: return "quasi-strong";
    case SelectionRegime::strong: return "strong";
  }
  return "?";
}

/// Population size N, selective strength a and scaling factor phi. The
/// exponent b = -log_N(phi) is derived, never stored.
///
/// a = 0 is representable so the neutral Moran model can serve as a test
/// oracle; every operation other than simulate_moran rejects it through
/// require_selection().
class ModelParams {
 public:
  ModelParams(std::int64_t n, double a, double phi, PhiRule rule = PhiRule::constant)
      : n_(n), a_(a), phi_(phi), rule_(rule) {
    require(n >= 2, "population size N must be at least 2");
    require(a >= 0.0 && std::isfinite(a), "selective strength a must be finite and >= 0");
    require(phi > 0.0 && phi <= 1.0, "scaling factor phi must lie in (0, 1]");
    require(b() < 1.0, "exponent b = -log_N(phi) must be < 1");
  }

  static ModelParams power_law(std::int64_t n, double a, double b) {
    require(b >= 0.0 && b < 1.0, "exponent b must lie in [0, 1)");
    return ModelParams(n, a, std::pow(static_cast<double>(n), -b), PhiRule::power);
  }
  static ModelParams inverse_log(std::int64_t n, double a) {
    return ModelParams(n, a, 1.0 / std::log(static_cast<double>(n)), PhiRule::inverse_log);
  }
  static ModelParams strong(std::int64_t n, double a) { return ModelParams(n, a, 1.0, PhiRule::constant); }

  std::int64_t n() const noexcept { return n_; }
  double a() const noexcept { return a_; }
  double phi() const noexcept { return phi_; }
  PhiRule rule() const noexcept { return rule_; }

  double log_n() const noexcept { return std::log(static_cast<double>(n_)); }
  /// b_N = -log_N(phi_N).
  double b() const noexcept { return phi_ >= 1.0 ? 0.0 : -std::log(phi_) / log_n(); }
  /// s = a * phi_N, the per-generation selective advantage.
  double selection() const noexcept { return a_ * phi_; }
  /// phi_N^{-1} log N, one unit of rescaled sweep time in Moran time.
  double time_scale() const noexcept { return log_n() / phi_; }

  SelectionRegime regime() const noexcept {
    if (phi_ >= 1.0) return SelectionRegime::strong;
    if (rule_ == PhiRule::inverse_log) return SelectionRegime::quasi_strong;
    if (rule_ == PhiRule::constant) return SelectionRegime::strong;
    return b() > 0.0 ? SelectionRegime::moderate : SelectionRegime::strong;
  }

 private:
  std::int64_t n_;
  double a_;
  double phi_;
  PhiRule rule_;
};

inline void require_selection(const ModelParams& params) {
  require(params.a() > 0.0, "selective strength a must be > 0");
}

/// floor(log N / phi_N): the end of the initial phase and start of the last.
inline std::int64_t drift_level(const ModelParams& p) {
  return static_cast<std::int64_t>(std::floor(p.time_scale()));
}
/// floor(N / sqrt(log N)).
inline std::int64_t sqrt_log_level(const ModelParams& p) {
  return static_cast<std::int64_t>(std::floor(static_cast<double>(p.n()) / std::sqrt(p.log_n())));
}
/// floor(N (1 - 1/sqrt(log N))): the hand-over level of the time-change construction.
inline std::int64_t handover_level(const ModelParams& p) {
  return static_cast<std::int64_t>(
      std::floor(static_cast<double>(p.n()) * (1.0 - 1.0 / std::sqrt(p.log_n()))));
}
/// floor(N / log N).
inline std::int64_t log_level(const ModelParams& p) {
  return static_cast<std::int64_t>(std::floor(static_cast<double>(p.n()) / p.log_n()));
}

}  // namespace logsweep
