// Simulates one sweep conditioned on fixation and prints the rescaled
// frequency paths next to the limit shape as CSV.
#include <cstdlib>
#include <iostream>

#include "logsweep/logsweep.hpp"

int main(int argc, char** argv) {
  const std::int64_t n = argc > 1 ? std::atoll(argv[1]) : 10000;
  const double a = argc > 2 ? std::atof(argv[2]) : 1.0;
  const double b = argc > 3 ? std::atof(argv[3]) : 0.2;
  const std::uint64_t seed = argc > 4 ? std::strtoull(argv[4], nullptr, 10) : 1;
  try {
    const auto p = logsweep::ModelParams::power_law(n, a, b);
    logsweep::Rng rng(seed);
    const auto path = logsweep::simulate_moran_conditioned_fixation(p, rng);
    const logsweep::House h(p);
    const auto w = logsweep::default_window(h);
    const auto H0 = logsweep::rescale(path, p, 0, w.alpha, w.beta);
    const auto H1 = logsweep::rescale(path, p, 1, w.alpha, w.beta);
    std::cerr << "rescaled fixation time " << logsweep::fixation_time_rescaled(path, p) << " (limit " << h.t0()
              << ")\n";
    logsweep::write_house_csv(std::cout, H0, H1, h, 2000);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
