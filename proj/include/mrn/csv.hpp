#pragma once

#include <string>
#include <vector>

#include "mrn/ctmc.hpp"
#include "mrn/density.hpp"
#include "mrn/estimate.hpp"
#include "mrn/lattice.hpp"
#include "mrn/pde.hpp"

namespace mrn {

/// Shortest round-tripping decimal form.
std::string format_number(double v);

/// Writes through a temporary file in the same directory and renames it over
/// `path`. Throws IoError.
void write_file_atomic(const std::string& path, const std::string& content);

/// `t,region_x,region_y,state,count`, one row per region and state.
std::string trajectory_csv(const LatticeGrid& grid, const std::vector<std::string>& states,
                           const std::vector<PopulationState>& samples);

/// `t,region_x,region_y,state,density`.
std::string field_csv(const LatticeGrid& grid, const std::vector<std::string>& states,
                      const std::vector<DensityField>& samples);

struct EstimateRow {
  std::string metric;
  ReplicaEstimate estimate;
};

/// `metric,mean,ci_low,ci_high,replicas`.
std::string estimate_csv(const std::vector<EstimateRow>& rows);

/// `ds_coarse,ds_fine,sup_norm_diff,metric_rel_diff`.
std::string convergence_csv(const std::vector<RefinementRow>& rows);

struct RwRow {
  int k;
  double r;
  double t;
  ReplicaEstimate msd;
  double theory;
};

/// `k,r,t,msd,ci_low,ci_high,theory`.
std::string rwcheck_csv(const std::vector<RwRow>& rows);

}  // namespace mrn
