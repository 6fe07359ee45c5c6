#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mrn/estimate.hpp"
#include "mrn/lattice.hpp"
#include "mrn/network.hpp"
#include "mrn/replicas.hpp"

namespace mrn {

struct CompareOptions {
  std::vector<int> N_list{1};
  std::vector<int> K_list{7, 15};
  int pde_K = 256;  // reference grid for the PDE metric
  Absorption absorption = Absorption::Edge;  // CTMC lattice only
  ReplicaPolicy policy;
  std::uint64_t seed = 0;
  double V = 0.0;   // reported in the table only
  double mu = 0.0;  // reported in the table only
};

struct SweepRow {
  int N = 0;
  int K = 0;
  double V = 0.0;
  double mu = 0.0;
  std::int64_t nodes = 0;
  ReplicaEstimate ctmc;
  double pde_metric = 0.0;
  double abs_error = 0.0;  // |ctmc mean - pde_metric|
};

/// Seed for the replicas of sweep row `row`, derived from the user seed.
std::uint64_t row_seed(std::uint64_t seed, std::uint64_t row);

/// For each (N, K): CTMC replica estimate of the fraction of nodes in
/// `metric_state` at the horizon, against the PDE grid-sum fraction.
std::vector<SweepRow> run_compare(const NetworkSpec& spec, std::size_t metric_state, const CompareOptions& options);

/// `N,K,V,mu,nodes,ctmc_mean,ctmc_ci,pde_metric,abs_error`.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace mrn
