#include "mrn/pde.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mrn/errors.hpp"
#include "stencil.hpp"

namespace mrn {

double step_size_for(double mu_max, double delta_s, double T, double safety, double reaction_rate) {
  if (!(mu_max >= 0.0) || !(delta_s > 0.0) || !(T > 0.0) || !(safety > 0.0 && safety <= 1.0))
    throw std::invalid_argument("step_size_for: need mu_max >= 0, delta_s > 0, T > 0, 0 < safety <= 1");
  double M = 1.0;
  if (mu_max == 0.0 || reaction_rate > 0.0) M = std::ceil(T / (0.01 / std::max(reaction_rate, 1.0)));
  if (mu_max > 0.0) {
    const double bound = safety / 4.0;
    double Md = std::max(1.0, std::ceil(mu_max * T / (delta_s * delta_s * bound)));
    while (mu_max * (T / Md) / (delta_s * delta_s) > bound) Md += 1.0;
    M = std::max(M, Md);
  }
  return T / M;
}

double default_clamp_radius(const NetworkSpec& spec, const LatticeGrid& grid) {
  double c = 0.0;
  for (RegionId r = 0; r < grid.size(); ++r) {
    const double x = grid.x(r), y = grid.y(r);
    for (const auto& f : spec.initial) c = std::max(c, std::abs(f(x, y)));
    for (const auto& p : spec.params) c = std::max(c, std::abs(p.field(x, y)));
  }
  return std::sqrt(static_cast<double>(spec.num_states() + spec.num_params())) * (c + 1.0);
}

double lipschitz_clamp(const std::function<double(std::span<const double>)>& f, double c_prime,
                       std::span<const double> point) {
  if (!(c_prime > 0.0)) throw std::invalid_argument("clamp radius must be positive");
  double n2 = 0.0;
  for (double v : point) n2 += v * v;
  const double n = std::sqrt(n2);
  if (n <= c_prime) return f(point);
  std::vector<double> z(point.begin(), point.end());
  for (double& v : z) v = c_prime * v / n;
  return f(z);
}

double stability_ratio(const NetworkSpec& spec, int K, double dt) {
  double r = 0.0;
  const double k2 = static_cast<double>(K) * K;
  for (double mu : spec.mu) r = std::max(r, mu * dt * k2);
  return r;
}

void fd_step(const SpatialModel& model, const DensityField& field, DensityField& next, double dt,
             std::optional<double> clamp_radius) {
  const LatticeGrid& grid = model.grid();
  const std::size_t L = model.num_states();
  if (field.num_states != L || field.regions() != grid.size())
    throw std::invalid_argument("field does not match the model");
  const double r = stability_ratio(model.spec(), grid.K(), dt);
  if (r > 0.25) {
    std::ostringstream os;
    os << "stability ratio mu dt / ds^2 = " << r << " exceeds 1/4";
    throw NumericError(os.str());
  }
  if (&next == &field) throw std::invalid_argument("fd_step needs distinct input and output fields");
  if (next.num_states != L || next.values.size() != field.values.size()) {
    next = field;
  } else {
    for (RegionId p : grid.boundary()) {
      for (std::size_t l = 0; l < L; ++l) next.at(p, l) = field.at(p, l);
    }
  }
  const std::size_t side = grid.side();
  const double k2 = grid.inv_delta_s2();
  const double* a = field.values.data();
  double* out = next.values.data();
  double react[64];
  std::vector<double> heap;
  double* rx = react;
  if (L > 64) {
    heap.resize(L);
    rx = heap.data();
  }
  for (RegionId p : grid.interior()) {
    model.reaction_terms({a + p * L, L}, model.params_at(p), {rx, L}, clamp_radius);
    for (std::size_t l = 0; l < L; ++l) {
      const double d = model.mu(l) * (detail::stencil_sum(a, L, p, side, l) * k2) + rx[l];
      const double v = a[p * L + l] + dt * d;
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "non-finite density at region (" << grid.x(p) << ", " << grid.y(p) << "), state " << l;
        throw NumericError(os.str());
      }
      out[p * L + l] = v;
    }
  }
  next.time = field.time + dt;
}

PdeResult solve_pde(const NetworkSpec& spec, const FDConfig& config, std::span<const double> sample_times) {
  if (config.K < 2) throw std::invalid_argument("K must be at least 2");
  validate(spec);
  const LatticeGrid grid(config.K);
  const SpatialModel model(spec, grid);
  PdeResult res;
  double dt = config.delta_t;
  if (dt == 0.0) dt = auto_dt(spec, config.K, config.T, config.safety);
  const std::size_t M = step_count(config.T, dt);
  res.delta_t = dt;
  res.steps = M;
  std::optional<double> clamp;
  if (config.clamp_enabled) {
    clamp = config.clamp_radius ? *config.clamp_radius : default_clamp_radius(spec, grid);
    res.clamp_radius = *clamp;
  }

  std::vector<std::pair<std::size_t, std::size_t>> wanted;  // (step, sample index)
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    const double t = sample_times[i];
    if (!(t >= 0.0) || t > config.T * (1 + 1e-12)) throw std::invalid_argument("sample time outside [0, T]");
    wanted.emplace_back(static_cast<std::size_t>(std::llround(t / dt)), i);
  }
  std::sort(wanted.begin(), wanted.end());
  res.samples.resize(sample_times.size());

  res.initial = initial_density(spec, grid);
  DensityField a = res.initial, b = res.initial;
  auto it = wanted.begin();
  auto emit = [&](std::size_t m, const DensityField& f) {
    for (; it != wanted.end() && it->first == m; ++it) res.samples[it->second] = f;
  };
  emit(0, a);
  for (std::size_t m = 0; m < M; ++m) {
    try {
      fd_step(model, a, b, dt, clamp);
    } catch (const NumericError& e) {
      throw NumericError("step " + std::to_string(m + 1) + ": " + e.what());
    }
    b.time = static_cast<double>(m + 1) * dt;
    std::swap(a, b);
    emit(m + 1, a);
  }
  res.final = std::move(a);
  return res;
}

std::vector<RefinementRow> refine_and_compare(const NetworkSpec& spec, double T, std::span<const int> Ks,
                                              std::size_t metric_state, double safety) {
  if (Ks.size() < 2) throw std::invalid_argument("refinement needs at least two grid spacings");
  if (metric_state >= spec.num_states()) throw std::invalid_argument("metric state out of range");
  std::map<int, PdeResult> solved;
  for (int K : Ks) {
    if (solved.count(K)) continue;
    FDConfig cfg;
    cfg.K = K;
    cfg.T = T;
    cfg.safety = safety;
    solved.emplace(K, solve_pde(spec, cfg));
  }
  std::vector<RefinementRow> rows;
  for (std::size_t i = 0; i < Ks.size(); ++i) {
    for (std::size_t j = i + 1; j < Ks.size(); ++j) {
      const int kc = std::min(Ks[i], Ks[j]), kf = std::max(Ks[i], Ks[j]);
      const PdeResult& c = solved.at(kc);
      const PdeResult& f = solved.at(kf);
      RefinementRow row;
      row.ds_coarse = 1.0 / kc;
      row.ds_fine = 1.0 / kf;
      const int g = std::gcd(kc, kf);
      if (g < 2) {
        row.sup_norm_diff = std::numeric_limits<double>::quiet_NaN();
      } else {
        const LatticeGrid gc(kc), gf(kf);
        const int sc = kc / g, sf = kf / g;
        const std::size_t L = spec.num_states();
        double sup = 0.0;
        for (int p = 0; p <= g; ++p) {
          for (int q = 0; q <= g; ++q) {
            const RegionId rc = gc.id(p * sc, q * sc), rf = gf.id(p * sf, q * sf);
            for (std::size_t l = 0; l < L; ++l)
              sup = std::max(sup, std::abs(c.final.at(rc, l) - f.final.at(rf, l)));
          }
        }
        row.sup_norm_diff = sup;
      }
      row.metric_coarse = c.fraction(metric_state);
      row.metric_fine = f.fraction(metric_state);
      row.metric_rel_diff = std::abs(row.metric_fine - row.metric_coarse) / std::abs(row.metric_coarse);
      rows.push_back(row);
    }
  }
  return rows;
}

int parse_delta_s(const std::string& text) {
  const auto slash = text.find('/');
  auto num = [&](std::string_view s) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw ParseError("invalid grid spacing '" + text + "'");
    return v;
  };
  double k;
  if (slash == std::string::npos) {
    k = 1.0 / num(text);
  } else {
    const std::string_view sv(text);
    k = num(sv.substr(slash + 1)) / num(sv.substr(0, slash));
  }
  const double kr = std::round(k);
  if (!std::isfinite(k) || kr < 2.0 || std::abs(k - kr) > 1e-9 * kr || kr > 1e6)
    throw ParseError("grid spacing '" + text + "' must be 1/K for an integer K >= 2");
  return static_cast<int>(kr);
}

}  // namespace mrn
