#include "mrn/lattice.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mrn {

LatticeGrid::LatticeGrid(int K, Absorption absorption) : K_(K), absorption_(absorption) {
  if (K < 1) throw std::invalid_argument("lattice refinement K must be >= 1, got " + std::to_string(K));
  const std::size_t n = size();
  boundary_.assign(n, 0);
  neighbors_.resize(n);
  for (int i = 0; i <= K; ++i) {
    for (int j = 0; j <= K; ++j) {
      const RegionId r = id(i, j);
      const bool edge = absorption == Absorption::Edge && (i == 0 || j == 0 || i == K || j == K);
      boundary_[r] = edge ? 1 : 0;
      (edge ? boundary_ids_ : interior_ids_).push_back(r);
      auto& nb = neighbors_[r];
      if (i > 0) nb.push_back(id(i - 1, j));
      if (i < K) nb.push_back(id(i + 1, j));
      if (j > 0) nb.push_back(id(i, j - 1));
      if (j < K) nb.push_back(id(i, j + 1));
    }
  }
  exits_.assign(n, 0);
  for (RegionId r = 0; r < n; ++r) {
    if (absorption == Absorption::Outside) {
      exits_[r] = 4 - static_cast<int>(neighbors_[r].size());
    } else {
      for (RegionId q : neighbors_[r]) exits_[r] += boundary_[q];
    }
  }
}

RegionId LatticeGrid::at(double x, double y) const {
  const double fi = x * K_;
  const double fj = y * K_;
  const double ri = std::round(fi);
  const double rj = std::round(fj);
  if (std::abs(fi - ri) > 1e-9 || std::abs(fj - rj) > 1e-9 || ri < 0 || rj < 0 || ri > K_ || rj > K_) {
    throw std::out_of_range("(" + std::to_string(x) + ", " + std::to_string(y) + ") is not a region of the K=" +
                            std::to_string(K_) + " lattice");
  }
  return id(static_cast<int>(ri), static_cast<int>(rj));
}

}  // namespace mrn
