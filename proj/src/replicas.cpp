#include "mrn/replicas.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

namespace mrn {

namespace {

bool done(const ReplicaEstimate& e, const ReplicaPolicy& p) {
  return e.n() >= p.min_replicas && e.ci_halfwidth() <= p.rel_ci_target * std::abs(e.mean());
}

}  // namespace

ReplicaResult run_replicas(const std::function<double(std::uint64_t)>& replica, const ReplicaPolicy& policy) {
  if (policy.min_replicas < 2) throw std::invalid_argument("min_replicas must be >= 2");
  if (policy.replica_cap < policy.min_replicas) throw std::invalid_argument("replica_cap must be >= min_replicas");
  const unsigned jobs = std::max(1u, policy.jobs);

  ReplicaResult result;
  std::uint64_t next = 0;
  std::vector<double> batch;
  while (next < policy.replica_cap) {
    const std::size_t size = std::min<std::uint64_t>(jobs, policy.replica_cap - next);
    batch.assign(size, 0.0);
    if (size == 1) {
      batch[0] = replica(next);
    } else {
      std::vector<std::exception_ptr> errors(size);
      {
        std::vector<std::jthread> pool;
        for (std::size_t k = 0; k < size; ++k) {
          pool.emplace_back([&, k] {
            try {
              batch[k] = replica(next + k);
            } catch (...) {
              errors[k] = std::current_exception();
            }
          });
        }
      }
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
    for (double x : batch) {
      result.estimate.add(x);
      ++next;
      if (done(result.estimate, policy)) {
        result.converged = true;
        return result;
      }
    }
  }
  return result;
}

ReplicaMetric off_fraction_metric(std::size_t l) {
  return [l](const PopulationState& initial, const PopulationState& final) { return off_fraction(initial, final, l); };
}

ReplicaResult run_replicas(const NetworkSpec& spec, const LatticeGrid& grid, int N, double T,
                           const ReplicaMetric& metric, std::uint64_t seed, const ReplicaPolicy& policy) {
  if (!(T > 0.0)) throw std::invalid_argument("replica horizon must be positive");
  const PopulationState initial = build_initial_state(spec, grid, N);
  const double times[] = {T};
  return run_replicas(
      [&](std::uint64_t i) {
        Simulator sim(spec, grid, N, seed, i);
        double value = 0.0;
        sim.run(T, times, [&](double, const PopulationState& s) { value = metric(initial, s); });
        return value;
      },
      policy);
}

}  // namespace mrn
