#include "mrn/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mrn/errors.hpp"
#include "mrn/pde.hpp"
#include "stencil.hpp"

namespace mrn {

SpatialModel::SpatialModel(const NetworkSpec& spec, const LatticeGrid& grid)
    : spec_(spec), grid_(grid), L_(spec.num_states()), P_(spec.num_params()) {
  if (grid_.absorption() != Absorption::Edge)
    throw std::invalid_argument("the fluid limit needs a lattice whose edge regions absorb");
  params_.assign(grid_.size() * P_, 0.0);
  for (RegionId r = 0; r < grid_.size(); ++r) {
    const auto p = param_values(spec_, grid_.x(r), grid_.y(r));
    std::copy(p.begin(), p.end(), params_.begin() + static_cast<std::ptrdiff_t>(r * P_));
  }
  net_.assign(spec_.reactions.size() * L_, 0.0);
  for (std::size_t j = 0; j < spec_.reactions.size(); ++j) {
    for (std::size_t l = 0; l < L_; ++l) net_[j * L_ + l] = spec_.reactions[j].net(l);
  }
}

void SpatialModel::reaction_terms(std::span<const double> a, std::span<const double> beta, std::span<double> out,
                                  std::optional<double> clamp_radius) const {
  std::fill(out.begin(), out.end(), 0.0);
  std::span<const double> da = a;
  std::span<const double> db = beta;
  std::array<double, 64> scratch;
  std::vector<double> heap;
  if (clamp_radius) {
    double norm2 = 0.0;
    for (double v : a) norm2 += v * v;
    for (double v : beta) norm2 += v * v;
    const double norm = std::sqrt(norm2);
    if (norm > *clamp_radius) {
      const double s = *clamp_radius / norm;
      double* buf = scratch.data();
      if (a.size() + beta.size() > scratch.size()) {
        heap.resize(a.size() + beta.size());
        buf = heap.data();
      }
      for (std::size_t i = 0; i < a.size(); ++i) buf[i] = a[i] * s;
      for (std::size_t i = 0; i < beta.size(); ++i) buf[a.size() + i] = beta[i] * s;
      da = {buf, a.size()};
      db = {buf + a.size(), beta.size()};
    }
  }
  for (std::size_t j = 0; j < spec_.reactions.size(); ++j) {
    const double f = spec_.reactions[j].rate.eval(da, db);
    const double* net = net_.data() + j * L_;
    for (std::size_t l = 0; l < L_; ++l) {
      if (net[l] != 0.0) out[l] += net[l] * f;
    }
  }
}

void SpatialModel::rhs(const DensityField& field, DensityField& out, std::optional<double> clamp_radius) const {
  if (out.values.size() != field.values.size()) out = DensityField(grid_.size(), L_);
  out.time = field.time;
  const std::size_t side = grid_.side();
  const double k2 = grid_.inv_delta_s2();
  const double* v = field.values.data();
  for (RegionId r : grid_.boundary()) {
    for (std::size_t l = 0; l < L_; ++l) out.at(r, l) = 0.0;
  }
  for (RegionId r : grid_.interior()) {
    std::span<double> o(out.values.data() + r * L_, L_);
    reaction_terms({v + r * L_, L_}, params_at(r), o, clamp_radius);
    for (std::size_t l = 0; l < L_; ++l) {
      o[l] = mu(l) * (detail::stencil_sum(v, L_, r, side, l) * k2) + o[l];
    }
  }
}

double discrete_laplacian(const DensityField& field, const LatticeGrid& grid, RegionId r, std::size_t l) {
  if (r >= grid.size() || field.regions() != grid.size()) throw std::invalid_argument("field does not match lattice");
  if (grid.absorption() != Absorption::Edge) throw std::invalid_argument("lattice edge regions must absorb");
  if (grid.is_boundary(r)) throw std::invalid_argument("discrete Laplacian is only defined at interior regions");
  return detail::stencil_sum(field.values.data(), field.num_states, r, grid.side(), l) * grid.inv_delta_s2();
}

DensityField spatial_rhs(const NetworkSpec& spec, const LatticeGrid& grid, const DensityField& field) {
  SpatialModel model(spec, grid);
  DensityField out(grid.size(), spec.num_states());
  model.rhs(field, out);
  return out;
}

std::vector<double> stationary_rhs(const NetworkSpec& spec, std::span<const double> densities,
                                   std::span<const double> params) {
  std::vector<double> out(spec.num_states(), 0.0);
  for (const auto& rx : spec.reactions) {
    const double f = rx.rate.eval(densities, params);
    for (std::size_t l = 0; l < out.size(); ++l) {
      const int n = rx.net(l);
      if (n != 0) out[l] += n * f;
    }
  }
  return out;
}

std::size_t step_count(double T, double dt) {
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("horizon must be positive and finite");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("time step must be positive and finite");
  const double ratio = T / dt;
  const double m = std::round(ratio);
  if (m < 1.0 || std::abs(ratio - m) > 1e-9 * m) {
    std::ostringstream os;
    os << "T/dt = " << ratio << " is not a positive integer";
    throw std::invalid_argument(os.str());
  }
  return static_cast<std::size_t>(m);
}

namespace {

void check_finite(const DensityField& a, const LatticeGrid& grid, std::size_t step) {
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    if (!std::isfinite(a.values[k])) {
      const RegionId r = k / a.num_states;
      std::ostringstream os;
      os << "non-finite density at step " << step << ", region (" << grid.x(r) << ", " << grid.y(r) << "), state "
         << k % a.num_states;
      throw NumericError(os.str());
    }
  }
}

void check_initial(const SpatialModel& model, const DensityField& initial) {
  if (initial.num_states != model.num_states() || initial.regions() != model.grid().size())
    throw std::invalid_argument("initial field does not match the model");
}

}  // namespace

DensityField integrate_euler(const SpatialModel& model, const DensityField& initial, double T, double dt,
                             const FieldObserver& observer) {
  check_initial(model, initial);
  const std::size_t M = step_count(T, dt);
  DensityField a = initial;
  a.time = 0.0;
  DensityField d(model.grid().size(), model.num_states());
  if (observer) observer(0, a);
  for (std::size_t m = 0; m < M; ++m) {
    model.rhs(a, d);
    for (std::size_t k = 0; k < a.values.size(); ++k) a.values[k] = a.values[k] + dt * d.values[k];
    a.time = static_cast<double>(m + 1) * dt;
    check_finite(a, model.grid(), m + 1);
    if (observer) observer(m + 1, a);
  }
  return a;
}

std::vector<DensityField> euler_trajectory(const SpatialModel& model, const DensityField& initial, double T,
                                           double dt) {
  std::vector<DensityField> out;
  integrate_euler(model, initial, T, dt, [&](std::size_t, const DensityField& a) { out.push_back(a); });
  return out;
}

DensityField integrate_rk4(const SpatialModel& model, const DensityField& initial, double T, double dt,
                           const FieldObserver& observer) {
  check_initial(model, initial);
  const std::size_t M = step_count(T, dt);
  const std::size_t n = initial.values.size();
  DensityField a = initial;
  a.time = 0.0;
  DensityField k1(model.grid().size(), model.num_states()), k2 = k1, k3 = k1, k4 = k1, tmp = k1;
  auto shifted = [&](const DensityField& k, double h) {
    for (std::size_t i = 0; i < n; ++i) tmp.values[i] = a.values[i] + h * k.values[i];
    return std::cref(tmp);
  };
  if (observer) observer(0, a);
  for (std::size_t m = 0; m < M; ++m) {
    model.rhs(a, k1);
    model.rhs(shifted(k1, 0.5 * dt), k2);
    model.rhs(shifted(k2, 0.5 * dt), k3);
    model.rhs(shifted(k3, dt), k4);
    for (std::size_t i = 0; i < n; ++i)
      a.values[i] += dt / 6.0 * (k1.values[i] + 2.0 * k2.values[i] + 2.0 * k3.values[i] + k4.values[i]);
    a.time = static_cast<double>(m + 1) * dt;
    check_finite(a, model.grid(), m + 1);
    if (observer) observer(m + 1, a);
  }
  return a;
}

std::vector<double> integrate_stationary(const NetworkSpec& spec, std::vector<double> densities,
                                         std::span<const double> params, double T, double dt) {
  const std::size_t M = step_count(T, dt);
  for (std::size_t m = 0; m < M; ++m) {
    const auto d = stationary_rhs(spec, densities, params);
    for (std::size_t l = 0; l < densities.size(); ++l) densities[l] = densities[l] + dt * d[l];
  }
  return densities;
}

double reaction_rate_bound(const SpatialModel& model, const DensityField& field) {
  const std::size_t L = model.num_states();
  std::vector<double> a(L), up(L), down(L);
  double bound = 0.0;
  for (RegionId r : model.grid().interior()) {
    for (std::size_t l = 0; l < L; ++l) a[l] = field.at(r, l);
    std::vector<double> row(L, 0.0);
    for (std::size_t k = 0; k < L; ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(a[k]));
      const double keep = a[k];
      a[k] = keep + h;
      model.reaction_terms(a, model.params_at(r), up);
      a[k] = keep - h;
      model.reaction_terms(a, model.params_at(r), down);
      a[k] = keep;
      for (std::size_t l = 0; l < L; ++l) row[l] += std::abs((up[l] - down[l]) / (2 * h));
    }
    for (double v : row) {
      if (std::isfinite(v)) bound = std::max(bound, v);
    }
  }
  return bound;
}

double auto_dt(const NetworkSpec& spec, int K, double T, double safety) {
  const LatticeGrid grid(K);
  const SpatialModel model(spec, grid);
  const double mu_max = spec.mu.empty() ? 0.0 : *std::max_element(spec.mu.begin(), spec.mu.end());
  return step_size_for(mu_max, 1.0 / K, T, safety, reaction_rate_bound(model, initial_density(spec, grid)));
}

}  // namespace mrn
