// Draws contender marks from the limit and prints the trajectory system as
// CSV, with the marks as JSON on stderr for replay.
#include <cstdlib>
#include <iostream>

#include "logsweep/logsweep.hpp"

int main(int argc, char** argv) {
  const double b = argc > 1 ? std::atof(argv[1]) : 0.3;
  const double lambda = argc > 2 ? std::atof(argv[2]) : 1.0;
  const double horizon = argc > 3 ? std::atof(argv[3]) : 6.0;
  const std::uint64_t seed = argc > 4 ? std::strtoull(argv[4], nullptr, 10) : 7;
  try {
    const auto gamma = logsweep::GammaSpec::finite({1.0, 2.0}, {1.0, 1.0});
    logsweep::Rng rng(seed);
    const auto marks = logsweep::sample_pit_arrivals(lambda * gamma.mean(), gamma, horizon, rng);
    const auto trace = logsweep::pit_evolve(marks, b, horizon);
    std::cerr << logsweep::arrivals_to_json(marks).dump() << '\n';
    logsweep::write_pit_csv(std::cout, trace);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
