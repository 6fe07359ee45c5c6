#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace mrn {

/// Region index into a LatticeGrid: i * (K+1) + j for the point (i/K, j/K).
using RegionId = std::size_t;

/// Where nodes are absorbed. `Edge`: the regions with a coordinate in {0, 1}
/// absorb. `Outside`: every region is live and only a step off the square
/// absorbs (the layout behind the published validation tables).
enum class Absorption { Edge, Outside };

/// The (K+1)^2 regions {(i/K, j/K)} of the unit square.
class LatticeGrid {
 public:
  explicit LatticeGrid(int K, Absorption absorption = Absorption::Edge);

  Absorption absorption() const { return absorption_; }

  int K() const { return K_; }
  double delta_s() const { return 1.0 / K_; }
  /// 1 / delta_s^2, exact.
  double inv_delta_s2() const { return static_cast<double>(K_) * K_; }

  std::size_t size() const { return static_cast<std::size_t>(K_ + 1) * (K_ + 1); }
  std::size_t side() const { return static_cast<std::size_t>(K_ + 1); }

  RegionId id(int i, int j) const { return static_cast<RegionId>(i) * side() + static_cast<RegionId>(j); }
  int i_of(RegionId r) const { return static_cast<int>(r / side()); }
  int j_of(RegionId r) const { return static_cast<int>(r % side()); }
  double x(RegionId r) const { return static_cast<double>(i_of(r)) / K_; }
  double y(RegionId r) const { return static_cast<double>(j_of(r)) / K_; }

  /// Region at coordinates (x, y); throws std::out_of_range if not a lattice point.
  RegionId at(double x, double y) const;

  bool is_boundary(RegionId r) const { return boundary_[r] != 0; }
  bool is_interior(RegionId r) const { return boundary_[r] == 0; }

  /// Axis-aligned neighbours inside the square, ordered -x, +x, -y, +y.
  const std::vector<RegionId>& neighbors(RegionId r) const { return neighbors_[r]; }
  std::vector<RegionId> neighbors_of(double x, double y) const { return neighbors(at(x, y)); }

  /// Number of moves out of r that end in absorption: neighbours on the
  /// boundary for Edge, steps off the square for Outside.
  int boundary_neighbor_count(RegionId r) const { return exits_[r]; }

  const std::vector<RegionId>& boundary() const { return boundary_ids_; }
  const std::vector<RegionId>& interior() const { return interior_ids_; }

 private:
  int K_;
  Absorption absorption_;
  std::vector<char> boundary_;
  std::vector<int> exits_;
  std::vector<std::vector<RegionId>> neighbors_;
  std::vector<RegionId> boundary_ids_;
  std::vector<RegionId> interior_ids_;
};

}  // namespace mrn
