#pragma once

#include <cstdint>
#include <functional>

#include "mrn/ctmc.hpp"
#include "mrn/estimate.hpp"

namespace mrn {

/// Stopping rule for independent replications: keep going until at least
/// `min_replicas` ran and the 95% CI half-width is within
/// `rel_ci_target * |mean|`, or `replica_cap` is reached.
struct ReplicaPolicy {
  std::size_t min_replicas = 10;
  double rel_ci_target = 0.05;
  std::size_t replica_cap = 100000;
  unsigned jobs = 1;
};

struct ReplicaResult {
  ReplicaEstimate estimate;
  bool converged = false;  // false: cap reached first
};

/// Drives `replica(i)` for i = 0, 1, ... under the policy. Results are
/// folded in index order, so the estimate does not depend on `jobs`.
ReplicaResult run_replicas(const std::function<double(std::uint64_t)>& replica, const ReplicaPolicy& policy);

/// Metric of one CTMC replica, from its initial and horizon states.
using ReplicaMetric = std::function<double(const PopulationState& initial, const PopulationState& final)>;

/// Fraction of the initial population found in state l at the horizon.
ReplicaMetric off_fraction_metric(std::size_t l);

/// Replica i runs the CTMC with RandomStream(seed, i) up to T.
ReplicaResult run_replicas(const NetworkSpec& spec, const LatticeGrid& grid, int N, double T,
                           const ReplicaMetric& metric, std::uint64_t seed, const ReplicaPolicy& policy);

}  // namespace mrn
