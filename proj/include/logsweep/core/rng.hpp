#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace logsweep {

/// SplitMix64 output function. Used to turn structured (seed, cell, replicate)
/// tuples into well-mixed engine seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the independent stream for replicate `replicate` of grid cell
/// `cell` under `master`. Depends on nothing else, so schedules cannot leak
/// into results.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell,
                                    std::uint64_t replicate) noexcept {
  return splitmix64(splitmix64(splitmix64(master) ^ cell) ^ (replicate * 0xd1b54a32d192ed03ULL));
}

/// Random stream used by every simulator. mt19937_64 output is fixed by the
/// standard, and the conversions below avoid the implementation-defined
/// <random> distributions, so streams are reproducible across toolchains.
class Rng {
 public:
  using engine_type = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Exponential holding time with the given total rate.
  double exponential(double rate) noexcept { return -std::log1p(-uniform()) / rate; }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Uniform integer in [0, n), n > 0 (Lemire's multiply-shift with rejection).
  std::uint64_t below(std::uint64_t n) noexcept {
    std::uint64_t x = engine_();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        x = engine_();
        m = static_cast<__uint128_t>(x) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  engine_type& engine() noexcept { return engine_; }

 private:
  engine_type engine_;
};

}  // namespace logsweep
