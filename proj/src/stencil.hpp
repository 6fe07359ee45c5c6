#pragma once

#include <cstddef>

namespace mrn::detail {

// Neighbour differences at an interior region in the lattice's -x, +x, -y, +y
// order. Shared by every solver path so their arithmetic agrees bit for bit.
inline double stencil_sum(const double* v, std::size_t L, std::size_t r, std::size_t side, std::size_t l) {
  const double c = v[r * L + l];
  double acc = v[(r - side) * L + l] - c;
  acc += v[(r + side) * L + l] - c;
  acc += v[(r - 1) * L + l] - c;
  acc += v[(r + 1) * L + l] - c;
  return acc;
}

}  // namespace mrn::detail
