#pragma once

#include <cstdint>
#include <utility>

#include "mrn/estimate.hpp"

namespace mrn {

/// Free continuous-time walk on (1/k)Z^2 started at the origin: jumps at total
/// rate r, each of the four directions equally likely.
struct FreeWalkConfig {
  int k = 1;
  double r = 1.0;
  double t = 1.0;
  std::size_t replicas = 10000;
};

struct MsdResult {
  ReplicaEstimate squared_distance;
  ReplicaEstimate x;  // displacement per coordinate
  ReplicaEstimate y;
  double theory = 0.0;  // r t / k^2

  double estimate() const { return squared_distance.mean(); }
  double ci_halfwidth() const { return squared_distance.ci_halfwidth(); }
};

/// Displacement (x, y) of replica `stream` at time t.
std::pair<double, double> free_walk(const FreeWalkConfig& config, std::uint64_t seed, std::uint64_t stream);

/// Monte Carlo estimate of E[d(t)^2] from replicas 0..replicas-1.
MsdResult msd(const FreeWalkConfig& config, std::uint64_t seed);

}  // namespace mrn
