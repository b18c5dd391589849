#pragma once

#include <cmath>
#include <cstdint>

#include "logsweep/core/errors.hpp"

namespace logsweep {

/// Up-step probability at state k >= 1 of the +-1 walk with up-probability
/// p > 1/2 conditioned never to hit 0:
///   (1 - r^{k+1}) / ((1 + r)(1 - r^k)),  r = (1 - p) / p.
/// Powers of r are formed in log space so large k cannot underflow into a
/// wrong comparison. p = 1 (r = 0) gives 1.
inline double h_transform_up_prob(std::int64_t k, double p) {
  require(k >= 1, "h_transform_up_prob needs k >= 1");
  require(p > 0.5 && p <= 1.0, "h_transform_up_prob needs p in (1/2, 1]");
  // (1 - r^2) / ((1 + r)(1 - r)) is exactly 1; rounding would lose that.
  if (p == 1.0 || k == 1) return 1.0;
  const double log_r = std::log1p(-p) - std::log(p);
  const double r = std::exp(log_r);
  const double num = -std::expm1(static_cast<double>(k + 1) * log_r);
  const double den = -std::expm1(static_cast<double>(k) * log_r);
  return num / ((1.0 + r) * den);
}

/// Same probability written in terms of the GW rates: up-step of a birth-death
/// jump chain with birth rate lambda > death rate mu, conditioned on survival.
inline double survival_up_prob(std::int64_t k, double lambda, double mu) {
  if (mu == 0.0) return 1.0;
  return h_transform_up_prob(k, lambda / (lambda + mu));
}

/// Up-step probability (k + 1) / (2k) of the Bessel-like walk; 1 at k = 0.
inline double bessel_up_prob(std::int64_t k) {
  require(k >= 0, "bessel_up_prob needs k >= 0");
  if (k == 0) return 1.0;
  return static_cast<double>(k + 1) / (2.0 * static_cast<double>(k));
}

}  // namespace logsweep
