#include "mrn/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mrn {

double DensityField::total(std::size_t l) const {
  double s = 0.0;
  for (std::size_t i = l; i < values.size(); i += num_states) s += values[i];
  return s;
}

double DensityField::total() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

DensityField initial_density(const NetworkSpec& spec, const LatticeGrid& grid) {
  const std::size_t L = spec.num_states();
  DensityField f(grid.size(), L);
  for (RegionId r : grid.interior()) {
    for (std::size_t l = 0; l < L; ++l) f.at(r, l) = spec.initial[l](grid.x(r), grid.y(r));
  }
  return f;
}

double sup_distance(const DensityField& a, const DensityField& b) {
  if (a.values.size() != b.values.size()) throw std::invalid_argument("sup_distance: field sizes differ");
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

double state_fraction(const DensityField& initial, const DensityField& current, std::size_t l) {
  const double denom = initial.total();
  if (denom == 0.0) throw std::domain_error("state fraction undefined: initial population is zero");
  return current.total(l) / denom;
}

}  // namespace mrn
