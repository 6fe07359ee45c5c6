#include "mrn/ctmc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "mrn/errors.hpp"

namespace mrn {

std::int64_t PopulationState::total() const {
  std::int64_t s = 0;
  for (auto c : counts) s += c;
  return s;
}

std::int64_t PopulationState::total(std::size_t l) const {
  std::int64_t s = 0;
  for (std::size_t i = l; i < counts.size(); i += num_states) s += counts[i];
  return s;
}

PopulationState build_initial_state(const NetworkSpec& spec, const LatticeGrid& grid, int N) {
  if (N < 1) throw std::invalid_argument("population scale N must be >= 1");
  PopulationState s;
  s.num_states = spec.num_states();
  s.counts.assign(grid.size() * s.num_states, 0);
  for (RegionId r : grid.interior()) {
    for (std::size_t l = 0; l < s.num_states; ++l) {
      const double v = std::floor(static_cast<double>(N) * spec.initial[l](grid.x(r), grid.y(r)));
      s.at(r, l) = static_cast<std::int64_t>(std::max(0.0, v));
    }
  }
  return s;
}

DensityField to_density(const PopulationState& s, int N) {
  DensityField f;
  f.num_states = s.num_states;
  f.time = s.time;
  f.values.resize(s.counts.size());
  for (std::size_t i = 0; i < s.counts.size(); ++i) f.values[i] = static_cast<double>(s.counts[i]) / N;
  return f;
}

TransitionTable::TransitionTable(const NetworkSpec& spec, const LatticeGrid& grid, int N)
    : grid_(grid), reactions_(spec.reactions), L_(spec.num_states()), N_(N), P_(spec.num_params()) {
  if (N < 1) throw std::invalid_argument("population scale N must be >= 1");
  for (std::size_t j = 0; j < reactions_.size(); ++j) {
    std::vector<int> net(L_);
    for (std::size_t l = 0; l < L_; ++l) net[l] = reactions_[j].net(l);
    auto it = std::find_if(groups_.begin(), groups_.end(), [&](const ReactionGroup& g) { return g.net == net; });
    if (it == groups_.end()) {
      groups_.push_back({net, {j}});
    } else {
      it->reactions.push_back(j);
    }
  }
  for (std::size_t l = 0; l < L_; ++l) mig_.push_back(scaled_migration(spec, grid.K(), l));
  params_.assign(grid.size() * P_, 0.0);
  for (RegionId r = 0; r < grid.size(); ++r) {
    auto v = param_values(spec, grid.x(r), grid.y(r));
    std::copy(v.begin(), v.end(), params_.begin() + static_cast<std::ptrdiff_t>(r * P_));
  }
}

double TransitionTable::group_rate(const PopulationState& s, RegionId r, std::size_t g) const {
  const ReactionGroup& group = groups_[g];
  for (std::size_t l = 0; l < L_; ++l) {
    if (s.at(r, l) + group.net[l] < 0) return 0.0;
  }
  std::array<double, 16> inline_a;
  std::vector<double> heap_a;
  double* a = inline_a.data();
  if (L_ > inline_a.size()) {
    heap_a.resize(L_);
    a = heap_a.data();
  }
  for (std::size_t l = 0; l < L_; ++l) a[l] = static_cast<double>(s.at(r, l)) / N_;
  const std::span<const double> dens(a, L_);
  const std::span<const double> par(params_.data() + r * P_, P_);
  double rate = 0.0;
  for (std::size_t j : group.reactions) {
    const double F = N_ * reactions_[j].rate.eval(dens, par);
    if (!std::isfinite(F)) {
      throw NumericError("reaction " + std::to_string(j) + " has non-finite rate at region (" +
                         std::to_string(grid_.x(r)) + ", " + std::to_string(grid_.y(r)) + ")");
    }
    rate += std::max(0.0, F);
  }
  return rate;
}

double TransitionTable::region_rate(const PopulationState& s, RegionId r) const {
  if (grid_.is_boundary(r)) return 0.0;
  double total = 0.0;
  for (std::size_t g = 0; g < groups_.size(); ++g) total += group_rate(s, r, g);
  const auto& nb = grid_.neighbors(r);
  const int exits = grid_.boundary_neighbor_count(r);
  for (std::size_t l = 0; l < L_; ++l) {
    const double per = mig_[l] * static_cast<double>(s.at(r, l));
    for (RegionId q : nb) {
      if (grid_.is_interior(q)) total += per;
    }
    if (exits > 0) total += exits * per;
  }
  return total;
}

std::vector<Channel> TransitionTable::channels(const PopulationState& s, RegionId r) const {
  std::vector<Channel> out;
  if (grid_.is_boundary(r)) return out;
  for (std::size_t g = 0; g < groups_.size(); ++g) out.push_back({ChannelKind::Reaction, g, r, group_rate(s, r, g)});
  const int exits = grid_.boundary_neighbor_count(r);
  for (std::size_t l = 0; l < L_; ++l) {
    const double per = mig_[l] * static_cast<double>(s.at(r, l));
    for (RegionId q : grid_.neighbors(r)) {
      if (grid_.is_interior(q)) out.push_back({ChannelKind::Move, l, q, per});
    }
    if (exits > 0) out.push_back({ChannelKind::Exit, l, r, exits * per});
  }
  return out;
}

Channel TransitionTable::select(const PopulationState& s, RegionId r, double target) const {
  double acc = 0.0;
  Channel last{ChannelKind::Reaction, 0, r, 0.0};
  bool have_last = false;
  auto consider = [&](const Channel& c) {
    if (c.rate <= 0.0) return false;
    acc += c.rate;
    last = c;
    have_last = true;
    return target < acc;
  };
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    if (consider({ChannelKind::Reaction, g, r, group_rate(s, r, g)})) return last;
  }
  const int exits = grid_.boundary_neighbor_count(r);
  for (std::size_t l = 0; l < L_; ++l) {
    const double per = mig_[l] * static_cast<double>(s.at(r, l));
    if (per <= 0.0) continue;
    for (RegionId q : grid_.neighbors(r)) {
      if (grid_.is_interior(q) && consider({ChannelKind::Move, l, q, per})) return last;
    }
    if (exits > 0 && consider({ChannelKind::Exit, l, r, exits * per})) return last;
  }
  if (!have_last) throw NumericError("channel selection in a region with zero total rate");
  return last;  // rounding left target at the very top of the range
}

void TransitionTable::apply(PopulationState& s, RegionId source, const Channel& c) const {
  switch (c.kind) {
    case ChannelKind::Reaction:
      for (std::size_t l = 0; l < L_; ++l) s.at(source, l) += groups_[c.index].net[l];
      break;
    case ChannelKind::Move:
      s.at(source, c.index) -= 1;
      s.at(c.target, c.index) += 1;
      break;
    case ChannelKind::Exit:
      s.at(source, c.index) -= 1;
      break;
  }
}

namespace {

// Region choice by linear scan; falls back to the last region with positive
// rate when rounding leaves target >= the accumulated sum.
std::pair<RegionId, double> pick_region(const LatticeGrid& grid, const std::vector<double>& rates, double target) {
  double acc = 0.0;
  RegionId last = grid.interior().front();
  for (RegionId r : grid.interior()) {
    const double rate = rates[r];
    if (rate <= 0.0) continue;
    if (target < acc + rate) return {r, target - acc};
    last = r;
    acc += rate;
  }
  return {last, std::nextafter(rates[last], 0.0)};
}

double checked_total(const LatticeGrid& grid, const std::vector<double>& rates) {
  double total = 0.0;
  for (RegionId r : grid.interior()) total += rates[r];
  if (!std::isfinite(total)) throw NumericError("total transition rate is not finite");
  return total;
}

StepResult fire(PopulationState& state, const TransitionTable& table, RandomStream& rng,
                const std::vector<double>& rates, double total) {
  StepResult res;
  res.status = StepStatus::Fired;
  res.elapsed = rng.exponential(total);
  const double target = rng.uniform() * total;
  auto [region, local] = pick_region(table.grid(), rates, target);
  res.region = region;
  res.channel = table.select(state, region, local);
  table.apply(state, region, res.channel);
  state.time += res.elapsed;
  return res;
}

}  // namespace

StepResult step(PopulationState& state, const TransitionTable& table, RandomStream& rng) {
  const LatticeGrid& grid = table.grid();
  if (grid.interior().empty()) return {};
  std::vector<double> rates(grid.size(), 0.0);
  for (RegionId r : grid.interior()) rates[r] = table.region_rate(state, r);
  const double total = checked_total(grid, rates);
  if (total <= 0.0) return {};
  return fire(state, table, rng, rates, total);
}

Simulator::Simulator(const NetworkSpec& spec, const LatticeGrid& grid, int N, std::uint64_t seed,
                     std::uint64_t stream)
    : table_(spec, grid, N), state_(build_initial_state(spec, grid, N)), rng_(seed, stream) {
  region_rates_.assign(grid.size(), 0.0);
  for (RegionId r : grid.interior()) refresh(r);
}

void Simulator::refresh(RegionId r) { region_rates_[r] = table_.region_rate(state_, r); }

double Simulator::total_rate() const {
  if (table_.grid().interior().empty()) return 0.0;
  return checked_total(table_.grid(), region_rates_);
}

StepResult Simulator::step() {
  const double total = total_rate();
  if (total <= 0.0) return {};
  StepResult res = fire(state_, table_, rng_, region_rates_, total);
  refresh(res.region);
  if (res.channel.kind == ChannelKind::Move) refresh(res.channel.target);
  ++steps_;
  return res;
}

void Simulator::run(double horizon, std::span<const double> sample_times,
                    const std::function<void(double, const PopulationState&)>& on_sample) {
  std::size_t next = 0;
  auto emit_until = [&](double limit, bool inclusive) {
    while (next < sample_times.size() && sample_times[next] <= horizon &&
           (sample_times[next] < limit || (inclusive && sample_times[next] == limit))) {
      on_sample(sample_times[next], state_);
      ++next;
    }
  };
  for (;;) {
    const double total = total_rate();
    if (total <= 0.0) {
      emit_until(horizon, true);
      state_.time = std::max(state_.time, horizon);
      return;
    }
    const double t_before = state_.time;
    // Peek the holding time without firing so samples see the pre-jump state.
    RandomStream probe = rng_;
    const double t_next = t_before + probe.exponential(total);
    emit_until(t_next, false);
    if (t_next > horizon) {
      emit_until(horizon, true);
      rng_ = probe;
      state_.time = horizon;
      return;
    }
    step();
  }
}

std::vector<PopulationState> simulate(const NetworkSpec& spec, const LatticeGrid& grid, int N, double T,
                                      std::uint64_t seed, std::uint64_t stream, std::span<const double> sample_times) {
  if (!(T > 0.0)) throw std::invalid_argument("simulation horizon must be positive");
  Simulator sim(spec, grid, N, seed, stream);
  std::vector<PopulationState> out;
  sim.run(T, sample_times, [&](double t, const PopulationState& s) {
    out.push_back(s);
    out.back().time = t;
  });
  return out;
}

double off_fraction(const PopulationState& initial, const PopulationState& final, std::size_t l) {
  const auto n0 = initial.total();
  if (n0 == 0) throw std::domain_error("off fraction undefined: initial population is zero");
  return static_cast<double>(final.total(l)) / static_cast<double>(n0);
}

std::vector<DensityField> replica_mean_density(const NetworkSpec& spec, const LatticeGrid& grid, int N,
                                               std::span<const double> sample_times, std::uint64_t seed,
                                               std::size_t replicas, unsigned jobs) {
  if (sample_times.empty()) return {};
  const double horizon = sample_times.back();
  const std::size_t L = spec.num_states();
  const std::size_t width = grid.size() * L;
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(replicas, 1))));

  // Integer sums make the result independent of how replicas are split over workers.
  std::vector<std::vector<std::int64_t>> partial(jobs, std::vector<std::int64_t>(sample_times.size() * width, 0));
  auto worker = [&](unsigned w) {
    auto& acc = partial[w];
    for (std::size_t i = w; i < replicas; i += jobs) {
      Simulator sim(spec, grid, N, seed, i);
      std::size_t k = 0;
      sim.run(horizon, sample_times, [&](double, const PopulationState& s) {
        std::int64_t* dst = acc.data() + k * width;
        for (std::size_t c = 0; c < width; ++c) dst[c] += s.counts[c];
        ++k;
      });
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
  }

  std::vector<DensityField> out;
  const double denom = static_cast<double>(N) * static_cast<double>(replicas);
  for (std::size_t k = 0; k < sample_times.size(); ++k) {
    DensityField f(grid.size(), L);
    f.time = sample_times[k];
    for (std::size_t c = 0; c < width; ++c) {
      std::int64_t sum = 0;
      for (const auto& p : partial) sum += p[k * width + c];
      f.values[c] = static_cast<double>(sum) / denom;
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace mrn
