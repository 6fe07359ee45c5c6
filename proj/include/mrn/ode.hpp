#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mrn/density.hpp"
#include "mrn/lattice.hpp"
#include "mrn/network.hpp"

namespace mrn {

/// The spatial fluid-limit system of a network on one lattice, with the
/// parameter fields sampled once per region.
///
/// Diffusion uses mu_l * lap(a_l) with lap the five-point stencil scaled by
/// K^2; under mu_l^K = mu_l K^2 this is the same vector field as
/// mu_l^K * sum_neighbours (a_n - a).
class SpatialModel {
 public:
  SpatialModel(const NetworkSpec& spec, const LatticeGrid& grid);

  const NetworkSpec& spec() const { return spec_; }
  const LatticeGrid& grid() const { return grid_; }
  std::size_t num_states() const { return L_; }
  std::size_t num_params() const { return P_; }
  std::span<const double> params_at(RegionId r) const { return {params_.data() + r * P_, P_}; }
  double mu(std::size_t l) const { return spec_.mu[l]; }

  /// Reactive term sum_j (d_jl - c_jl) f_j(a, beta) for every l. With a
  /// clamp radius, rate arguments (a, beta) outside that Euclidean ball are
  /// projected radially onto it first.
  void reaction_terms(std::span<const double> a, std::span<const double> beta, std::span<double> out,
                      std::optional<double> clamp_radius = std::nullopt) const;

  /// Derivative at every region (0 on the boundary) into `out`.
  void rhs(const DensityField& field, DensityField& out, std::optional<double> clamp_radius = std::nullopt) const;

 private:
  NetworkSpec spec_;
  LatticeGrid grid_;
  std::size_t L_;
  std::size_t P_;
  std::vector<double> params_;  // region * P + p
  std::vector<double> net_;     // reaction * L + l
};

/// Five-point discrete Laplacian sum_n (a_n - a) / ds^2 at an interior region.
/// Throws std::invalid_argument for boundary regions.
double discrete_laplacian(const DensityField& field, const LatticeGrid& grid, RegionId r, std::size_t l);

/// Spatial ODE vector field; exactly 0 at boundary regions.
DensityField spatial_rhs(const NetworkSpec& spec, const LatticeGrid& grid, const DensityField& field);

/// Vector field of the non-spatial ODE limit at one point.
std::vector<double> stationary_rhs(const NetworkSpec& spec, std::span<const double> densities,
                                   std::span<const double> params);

/// Called with the step index m and the field a(m), starting at m = 0.
using FieldObserver = std::function<void(std::size_t, const DensityField&)>;

/// Number of steps M = T/dt; throws std::invalid_argument unless T/dt is a
/// positive integer (to 1e-9 relative).
std::size_t step_count(double T, double dt);

/// Fixed-step explicit Euler a(m+1) = a(m) + 1_interior * dt * rhs(a(m)).
/// Throws NumericError naming the step and region of the first non-finite value.
DensityField integrate_euler(const SpatialModel& model, const DensityField& initial, double T, double dt,
                             const FieldObserver& observer = {});

/// Every iterate a(0), ..., a(M).
std::vector<DensityField> euler_trajectory(const SpatialModel& model, const DensityField& initial, double T,
                                           double dt);

/// Classical fourth-order Runge-Kutta; for reference solutions only.
DensityField integrate_rk4(const SpatialModel& model, const DensityField& initial, double T, double dt,
                           const FieldObserver& observer = {});

/// Explicit Euler for the non-spatial ODE at one point.
std::vector<double> integrate_stationary(const NetworkSpec& spec, std::vector<double> densities,
                                         std::span<const double> params, double T, double dt);

/// Gershgorin bound max_r max_l sum_k |d L_l / d a_k| of the reactive
/// Jacobian at `field`, by central differences.
double reaction_rate_bound(const SpatialModel& model, const DensityField& field);

/// dt = T/M with the smallest M keeping mu_l dt / ds^2 <= safety/4 for all l
/// on the K lattice and dt <= 0.01 / max(1, reaction_rate_bound(initial)).
double auto_dt(const NetworkSpec& spec, int K, double T, double safety = 0.9);

}  // namespace mrn
