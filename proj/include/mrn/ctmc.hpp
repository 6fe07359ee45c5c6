#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mrn/density.hpp"
#include "mrn/lattice.hpp"
#include "mrn/network.hpp"
#include "mrn/random.hpp"

namespace mrn {

/// Integer node counts per (region, local state) at a point in time.
struct PopulationState {
  std::size_t num_states = 0;
  std::vector<std::int64_t> counts;  // region * num_states + l
  double time = 0.0;

  std::int64_t& at(RegionId r, std::size_t l) { return counts[r * num_states + l]; }
  std::int64_t at(RegionId r, std::size_t l) const { return counts[r * num_states + l]; }

  std::int64_t total() const;
  std::int64_t total(std::size_t l) const;

  bool operator==(const PopulationState&) const = default;
};

/// floor(N * alpha_l^0) at interior regions, 0 on the boundary, time 0.
PopulationState build_initial_state(const NetworkSpec& spec, const LatticeGrid& grid, int N);

/// counts / N as a density field.
DensityField to_density(const PopulationState& s, int N);

enum class ChannelKind { Reaction, Move, Exit };

struct Channel {
  ChannelKind kind;
  std::size_t index;  // reaction group for Reaction, local state for Move / Exit
  RegionId target;    // destination region for Move; source region otherwise
  double rate;
};

/// Transition structure of the N-th CTMC on a lattice.
///
/// Per interior region: one reaction channel per group of reactions with the
/// same net stoichiometry (rates of the group add up), and per local state one
/// movement channel per interior neighbour with rate mu_l^K A_l plus one
/// lumped exit channel with rate |N(x,y) ∩ boundary| mu_l^K A_l.
class TransitionTable {
 public:
  TransitionTable(const NetworkSpec& spec, const LatticeGrid& grid, int N);

  struct ReactionGroup {
    std::vector<int> net;                // per local state
    std::vector<std::size_t> reactions;  // indices into spec.reactions
  };

  const LatticeGrid& grid() const { return grid_; }
  std::size_t num_states() const { return L_; }
  int scale() const { return N_; }
  const std::vector<ReactionGroup>& groups() const { return groups_; }
  double migration(std::size_t l) const { return mig_[l]; }

  /// Count-form rate sum_{j in group} N f_j(A/N, beta(x,y)); 0 if firing
  /// would make any count negative.
  double group_rate(const PopulationState& s, RegionId r, std::size_t g) const;

  /// Sum of all channel rates at r (0 on the boundary).
  double region_rate(const PopulationState& s, RegionId r) const;

  /// Every channel at r in selection order. Empty for boundary regions.
  std::vector<Channel> channels(const PopulationState& s, RegionId r) const;

  /// Applies a channel's state change.
  void apply(PopulationState& s, RegionId source, const Channel& c) const;

  /// Picks the channel at r whose cumulative rate first exceeds `target`
  /// (0 <= target < region_rate).
  Channel select(const PopulationState& s, RegionId r, double target) const;

 private:
  LatticeGrid grid_;
  std::vector<Reaction> reactions_;
  std::size_t L_;
  int N_;
  std::vector<ReactionGroup> groups_;
  std::vector<double> mig_;
  std::vector<double> params_;  // region * P + p
  std::size_t P_;
};

enum class StepStatus { Fired, Absorbed };

struct StepResult {
  StepStatus status = StepStatus::Absorbed;
  double elapsed = 0.0;
  RegionId region = 0;
  Channel channel{ChannelKind::Reaction, 0, 0, 0.0};
};

/// One Gillespie direct-method step computed from scratch. Absorption
/// (total rate 0) leaves the state unchanged. Throws NumericError for
/// non-finite rates.
StepResult step(PopulationState& state, const TransitionTable& table, RandomStream& rng);

/// Exact simulation with cached per-region rates: a step only recomputes the
/// regions it touched. Produces the same trajectory as repeated step().
class Simulator {
 public:
  Simulator(const NetworkSpec& spec, const LatticeGrid& grid, int N, std::uint64_t seed, std::uint64_t stream);

  const PopulationState& state() const { return state_; }
  const TransitionTable& table() const { return table_; }
  double total_rate() const;

  StepResult step();

  /// Runs until `horizon`, calling `on_sample(t, state)` at each requested
  /// time (ascending, <= horizon) with the piecewise-constant state value.
  void run(double horizon, std::span<const double> sample_times,
           const std::function<void(double, const PopulationState&)>& on_sample);

  std::uint64_t steps() const { return steps_; }

 private:
  void refresh(RegionId r);

  TransitionTable table_;
  PopulationState state_;
  RandomStream rng_;
  std::vector<double> region_rates_;
  std::uint64_t steps_ = 0;
};

/// State snapshots of one replica at the requested times.
std::vector<PopulationState> simulate(const NetworkSpec& spec, const LatticeGrid& grid, int N, double T,
                                      std::uint64_t seed, std::uint64_t stream, std::span<const double> sample_times);

/// sum_r A_l(r) at `final` divided by the total initial population.
/// Throws std::domain_error if the initial population is zero.
double off_fraction(const PopulationState& initial, const PopulationState& final, std::size_t l);

/// Replica-averaged density counts/N at each sample time, over replicas
/// 0..replicas-1 of `seed`.
std::vector<DensityField> replica_mean_density(const NetworkSpec& spec, const LatticeGrid& grid, int N,
                                               std::span<const double> sample_times, std::uint64_t seed,
                                               std::size_t replicas, unsigned jobs = 1);

}  // namespace mrn
