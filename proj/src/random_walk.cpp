#include "mrn/random_walk.hpp"

#include <stdexcept>

#include "mrn/random.hpp"

namespace mrn {

std::pair<double, double> free_walk(const FreeWalkConfig& config, std::uint64_t seed, std::uint64_t stream) {
  RandomStream rng(seed, stream);
  long long i = 0, j = 0;
  double now = 0.0;
  while (true) {
    now += rng.exponential(config.r);
    if (now > config.t) break;
    switch (rng.below(4)) {
      case 0: --i; break;
      case 1: ++i; break;
      case 2: --j; break;
      default: ++j; break;
    }
  }
  return {static_cast<double>(i) / config.k, static_cast<double>(j) / config.k};
}

MsdResult msd(const FreeWalkConfig& config, std::uint64_t seed) {
  if (config.k < 1) throw std::invalid_argument("k must be a positive integer");
  if (!(config.r > 0.0)) throw std::invalid_argument("jump rate must be positive");
  if (!(config.t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
  if (config.replicas < 1) throw std::invalid_argument("replicas must be >= 1");
  MsdResult res;
  res.theory = config.r / (static_cast<double>(config.k) * config.k) * config.t;
  for (std::uint64_t n = 0; n < config.replicas; ++n) {
    const auto [x, y] = free_walk(config, seed, n);
    res.squared_distance.add(x * x + y * y);
    res.x.add(x);
    res.y.add(y);
  }
  return res;
}

}  // namespace mrn
