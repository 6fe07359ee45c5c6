#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrn/density.hpp"
#include "mrn/lattice.hpp"
#include "mrn/network.hpp"
#include "mrn/ode.hpp"

namespace mrn {

/// Explicit finite-difference scheme settings. The grid spacing is 1/K.
struct FDConfig {
  int K = 256;
  double delta_t = 0.0;  // 0: auto_dt
  double T = 10.0;
  std::optional<double> clamp_radius;  // default: default_clamp_radius
  bool clamp_enabled = false;
  double safety = 0.9;

  double delta_s() const { return 1.0 / K; }
};

/// T/M for the smallest integer M with mu_max dt / ds^2 <= safety / 4 and,
/// when reaction_rate > 0 or mu_max = 0, dt <= 0.01 / max(reaction_rate, 1).
double step_size_for(double mu_max, double delta_s, double T, double safety = 0.9, double reaction_rate = 0.0);

/// sqrt(L + P) * max(max |alpha^0|, max |beta|) + 1 over the lattice.
double default_clamp_radius(const NetworkSpec& spec, const LatticeGrid& grid);

/// f(point) inside the ball of radius c_prime, f(c_prime * point / |point|) outside.
double lipschitz_clamp(const std::function<double(std::span<const double>)>& f, double c_prime,
                       std::span<const double> point);

/// Largest mu_l dt / ds^2 over the states.
double stability_ratio(const NetworkSpec& spec, int K, double dt);

/// One step a(m+1) = a(m) + 1_interior dt (mu_l lap a_l + L_l(a)) into `next`.
/// Throws NumericError when the stability ratio exceeds 1/4 or a value is
/// not finite.
void fd_step(const SpatialModel& model, const DensityField& field, DensityField& next, double dt,
             std::optional<double> clamp_radius = std::nullopt);

struct PdeResult {
  DensityField initial;
  DensityField final;
  std::vector<DensityField> samples;  // one per requested time
  double delta_t = 0.0;
  std::size_t steps = 0;
  double clamp_radius = 0.0;  // 0 when the clamp is off

  /// state_fraction(initial, final, l).
  double fraction(std::size_t l) const { return state_fraction(initial, final, l); }
};

/// Runs the scheme to config.T. Sample times are rounded to the nearest step.
PdeResult solve_pde(const NetworkSpec& spec, const FDConfig& config, std::span<const double> sample_times = {});

struct RefinementRow {
  double ds_coarse = 0.0;
  double ds_fine = 0.0;
  double sup_norm_diff = 0.0;  // over coincident lattice points; NaN if none is interior
  double metric_coarse = 0.0;
  double metric_fine = 0.0;
  double metric_rel_diff = 0.0;
};

/// Solves at each K and compares every pair (coarse = smaller K). The metric
/// is the grid-sum fraction of `metric_state` at T.
std::vector<RefinementRow> refine_and_compare(const NetworkSpec& spec, double T, std::span<const int> Ks,
                                              std::size_t metric_state, double safety = 0.9);

/// Grid spacing written as "1/256" or a decimal; returns K. Throws ParseError
/// unless 1/ds is an integer >= 2.
int parse_delta_s(const std::string& text);

}  // namespace mrn
