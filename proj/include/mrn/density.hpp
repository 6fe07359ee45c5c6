#pragma once

#include <cstddef>
#include <vector>

#include "mrn/lattice.hpp"
#include "mrn/network.hpp"

namespace mrn {

/// Real-valued concentrations indexed by (region, local state). Boundary
/// regions are stored and hold 0.
struct DensityField {
  std::size_t num_states = 0;
  std::vector<double> values;  // region * num_states + l
  double time = 0.0;

  DensityField() = default;
  DensityField(std::size_t regions, std::size_t L) : num_states(L), values(regions * L, 0.0) {}

  double& at(RegionId r, std::size_t l) { return values[r * num_states + l]; }
  double at(RegionId r, std::size_t l) const { return values[r * num_states + l]; }
  std::size_t regions() const { return num_states ? values.size() / num_states : 0; }

  /// Sum of state l over all regions.
  double total(std::size_t l) const;
  /// Sum over all regions and states.
  double total() const;
};

/// alpha_l^0 sampled at every region; boundary regions forced to 0.
DensityField initial_density(const NetworkSpec& spec, const LatticeGrid& grid);

/// max |a - b| over all entries; sizes must agree.
double sup_distance(const DensityField& a, const DensityField& b);

/// Ratio sum_r a_l(r) / sum_r sum_l' initial_l'(r): the grid-sum (Riemann)
/// form of the fraction of the initial population found in state l.
double state_fraction(const DensityField& initial, const DensityField& current, std::size_t l);

}  // namespace mrn
