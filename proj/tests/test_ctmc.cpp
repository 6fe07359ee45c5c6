#include <cmath>
#include <vector>

#include "doctest.h"
#include "mrn/ctmc.hpp"
#include "mrn/estimate.hpp"
#include "mrn/replicas.hpp"
#include "mrn/scenarios.hpp"

using namespace mrn;

namespace {

// 1 A -> 0 at rate beta * a1 on the K = 2 lattice (one interior region).
NetworkSpec death_spec(double A0) {
  NetworkSpec spec;
  spec.states = {"A"};
  spec.mu = {0.0};
  spec.initial = {Field::table({{0, 0, 0}, {0, A0, 0}, {0, 0, 0}})};
  spec.params = {{"beta", Field::constant(1.0)}};
  SymbolTable sym;
  sym.states = {"A"};
  sym.params = {"beta"};
  sym.num_states = 1;
  sym.num_params = 1;
  spec.reactions.push_back({{1}, {0}, parse_rate("beta * A", sym)});
  return spec;
}

void check_state(const PopulationState& s, const LatticeGrid& g) {
  for (auto c : s.counts) REQUIRE(c >= 0);
  for (RegionId r : g.boundary()) {
    for (std::size_t l = 0; l < s.num_states; ++l) REQUIRE(s.at(r, l) == 0);
  }
}

}  // namespace

TEST_CASE("initial population totals") {
  LatticeGrid g(7);
  CHECK(build_initial_state(onoff_spec(0.001, 10), g, 1).total() == 56);
  CHECK(build_initial_state(onoff_spec(0.001, 25), g, 1).total() == 156);
  CHECK(build_initial_state(onoff_spec(0.001, 50), g, 1).total() == 320);
  CHECK(build_initial_state(onoff_spec(0.001, 10), g, 2).total() == 124);
  CHECK(build_initial_state(onoff_spec(0.001, 0.5), g, 1).total() == 0);
  CHECK_THROWS_AS(build_initial_state(onoff_spec(), g, 0), std::invalid_argument);
}

TEST_CASE("pure death process matches A0 exp(-t)") {
  const auto spec = death_spec(100.0);
  LatticeGrid g(2);
  ReplicaEstimate est;
  const double t[] = {1.0};
  for (std::uint64_t i = 0; i < 2000; ++i) {
    const auto out = simulate(spec, g, 1, 1.0, 5, i, t);
    est.add(static_cast<double>(out.at(0).total()));
  }
  const double expected = 100.0 * std::exp(-1.0);
  CHECK(std::abs(est.mean() - expected) <= 1.5 * est.ci_halfwidth());
  CHECK(est.ci_halfwidth() < 0.5);
}

TEST_CASE("empty state is absorbed and left unchanged") {
  auto spec = onoff_spec(0.01, 0.5);
  LatticeGrid g(4);
  TransitionTable table(spec, g, 1);
  PopulationState s = build_initial_state(spec, g, 1);
  REQUIRE(s.total() == 0);
  RandomStream rng(1, 0);
  const auto before = s;
  const auto res = step(s, table, rng);
  CHECK(res.status == StepStatus::Absorbed);
  CHECK(s == before);
}

TEST_CASE("immobile states have zero movement rate") {
  const auto spec = onoff_spec(0.01, 10);
  LatticeGrid g(7);
  TransitionTable table(spec, g, 1);
  const auto s = build_initial_state(spec, g, 1);
  for (RegionId r : g.interior()) {
    for (const auto& c : table.channels(s, r)) {
      if (c.kind != ChannelKind::Reaction && c.index == 1) CHECK(c.rate == 0.0);
    }
  }
}

TEST_CASE("exit channels exist only next to the boundary") {
  const auto spec = onoff_spec(0.01, 10);
  LatticeGrid g(7);
  TransitionTable table(spec, g, 1);
  auto s = build_initial_state(spec, g, 1);
  for (RegionId r : g.interior()) s.at(r, 0) = 3;
  for (RegionId r : g.interior()) {
    bool exit = false;
    double sum = 0.0;
    for (const auto& c : table.channels(s, r)) {
      CHECK(c.rate >= 0.0);
      exit = exit || c.kind == ChannelKind::Exit;
      sum += c.rate;
    }
    CHECK(exit == (g.boundary_neighbor_count(r) > 0));
    CHECK(sum == doctest::Approx(table.region_rate(s, r)).epsilon(1e-12));
  }
}

TEST_CASE("reactions with equal net change aggregate") {
  NetworkSpec spec;
  spec.states = {"A", "B"};
  spec.mu = {0.0, 0.0};
  spec.initial = {Field::scaled_theta(20), Field::scaled_theta(5)};
  SymbolTable sym;
  sym.num_states = 2;
  spec.reactions.push_back({{1, 0}, {0, 1}, parse_rate("0.5 * a1", sym)});
  spec.reactions.push_back({{1, 0}, {0, 1}, parse_rate("a1 * a2", sym)});
  spec.reactions.push_back({{0, 1}, {1, 0}, parse_rate("0.1 * a2", sym)});
  validate(spec);
  LatticeGrid g(4);
  TransitionTable table(spec, g, 3);
  REQUIRE(table.groups().size() == 2);
  const auto s = build_initial_state(spec, g, 3);
  for (RegionId r : g.interior()) {
    const double a1 = s.at(r, 0) / 3.0, a2 = s.at(r, 1) / 3.0;
    CHECK(table.group_rate(s, r, 0) == doctest::Approx(3.0 * (0.5 * a1 + a1 * a2)));
    CHECK(table.region_rate(s, r) == doctest::Approx(3.0 * (0.5 * a1 + a1 * a2 + 0.1 * a2)));
  }
}

TEST_CASE("trajectory invariants") {
  for (const char* name : {"onoff", "p2p", "epidemic", "heat"}) {
    CAPTURE(name);
    auto spec = builtin_scenario(name);
    if (std::string(name) == "onoff" || std::string(name) == "epidemic") spec.mu[0] = 0.01;
    LatticeGrid g(5);
    Simulator sim(spec, g, 3, 17, 0);
    std::int64_t last_total = sim.state().total();
    for (int k = 0; k < 3000 && sim.state().time < 10; ++k) {
      if (sim.step().status == StepStatus::Absorbed) break;
      check_state(sim.state(), g);
      if (std::string(name) == "heat") {
        CHECK(sim.state().total() <= last_total);
        last_total = sim.state().total();
      }
    }
  }
}

TEST_CASE("heat scenario never reacts") {
  const auto spec = builtin_scenario("heat");
  LatticeGrid g(6);
  Simulator sim(spec, g, 20, 3, 0);
  for (int k = 0; k < 2000; ++k) {
    const auto res = sim.step();
    if (res.status == StepStatus::Absorbed) break;
    CHECK(res.channel.kind != ChannelKind::Reaction);
  }
}

TEST_CASE("conservation without migration") {
  auto spec = onoff_spec(0.0, 25);
  LatticeGrid g(2);
  for (int N : {1, 5}) {
    Simulator sim(spec, g, N, 23, 1);
    const auto total = sim.state().total();
    for (int k = 0; k < 5000; ++k) {
      sim.step();
      REQUIRE(sim.state().total() == total);
    }
  }
}

TEST_CASE("simulator matches the from-scratch step") {
  const auto spec = onoff_spec(0.01, 25);
  LatticeGrid g(7);
  Simulator sim(spec, g, 1, 99, 4);
  TransitionTable table(spec, g, 1);
  PopulationState s = build_initial_state(spec, g, 1);
  RandomStream rng(99, 4);
  for (int k = 0; k < 2000; ++k) {
    const auto a = sim.step();
    const auto b = step(s, table, rng);
    REQUIRE(a.status == b.status);
    REQUIRE(sim.state() == s);
  }
}

TEST_CASE("simulation is reproducible") {
  const auto spec = onoff_spec(0.01, 10);
  LatticeGrid g(7);
  const double t[] = {1, 5, 10};
  CHECK(simulate(spec, g, 2, 10, 5, 3, t) == simulate(spec, g, 2, 10, 5, 3, t));
  CHECK_FALSE(simulate(spec, g, 2, 10, 5, 3, t) == simulate(spec, g, 2, 10, 5, 4, t));
}

TEST_CASE("samples hold the piecewise-constant state") {
  const auto spec = onoff_spec(0.01, 10);
  LatticeGrid g(7);
  const double t[] = {0.0, 2.5, 10.0};
  const auto out = simulate(spec, g, 1, 10, 8, 0, t);
  REQUIRE(out.size() == 3);
  CHECK(out[0].counts == build_initial_state(spec, g, 1).counts);
  CHECK(out[2].time == 10.0);
}

TEST_CASE("off fraction") {
  PopulationState init{2, {0, 4, 0, 6}, 0.0};
  PopulationState none_switched{2, {0, 4, 0, 6}, 10.0};
  PopulationState all_off{2, {4, 0, 6, 0}, 10.0};
  CHECK(off_fraction(init, none_switched, 0) == 0.0);
  CHECK(off_fraction(init, all_off, 0) == 1.0);
  PopulationState empty{2, {0, 0, 0, 0}, 0.0};
  CHECK_THROWS_AS(off_fraction(empty, empty, 0), std::domain_error);
}

TEST_CASE("estimator") {
  ReplicaEstimate a, b, all;
  const std::vector<double> xs{1.0, 4.0, 2.5, 7.0, 3.0, 3.5, 9.0};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    (i < 3 ? a : b).add(xs[i]);
    all.add(xs[i]);
  }
  ReplicaEstimate ab = a;
  ab.merge(b);
  ReplicaEstimate ba = b;
  ba.merge(a);
  CHECK(ab.n() == all.n());
  CHECK(ab.mean() == doctest::Approx(all.mean()).epsilon(1e-14));
  CHECK(ab.variance() == doctest::Approx(all.variance()).epsilon(1e-13));
  CHECK(ba.mean() == doctest::Approx(ab.mean()).epsilon(1e-14));
  CHECK(student_t_975(1) == doctest::Approx(12.706204736).epsilon(1e-9));
  CHECK(student_t_975(1000000) == doctest::Approx(1.959966).epsilon(1e-5));
  ReplicaEstimate one;
  one.add(1.0);
  CHECK(std::isinf(one.ci_halfwidth()));
}

TEST_CASE("replica stopping rule") {
  ReplicaPolicy p;
  const auto constant = run_replicas([](std::uint64_t) { return 0.5; }, p);
  CHECK(constant.converged);
  CHECK(constant.estimate.n() == p.min_replicas);
  CHECK(constant.estimate.ci_halfwidth() == 0.0);

  ReplicaPolicy capped;
  capped.replica_cap = 20;
  const auto noisy = run_replicas([](std::uint64_t i) { return i % 2 ? 1.0 : -1.0; }, capped);
  CHECK_FALSE(noisy.converged);
  CHECK(noisy.estimate.n() == 20);

  ReplicaPolicy bad;
  bad.min_replicas = 1;
  CHECK_THROWS_AS(run_replicas([](std::uint64_t) { return 0.0; }, bad), std::invalid_argument);
}

TEST_CASE("replica estimates do not depend on the worker count") {
  const auto spec = onoff_spec(0.01, 10);
  LatticeGrid g(7);
  ReplicaPolicy p1, p3;
  p3.jobs = 3;
  const auto a = run_replicas(spec, g, 1, 10, off_fraction_metric(0), 42, p1);
  const auto b = run_replicas(spec, g, 1, 10, off_fraction_metric(0), 42, p3);
  CHECK(a.estimate.n() == b.estimate.n());
  CHECK(a.estimate.mean() == b.estimate.mean());
  CHECK(a.estimate.m2() == b.estimate.m2());

  const double t[] = {2.0, 10.0};
  const auto m1 = replica_mean_density(spec, g, 2, t, 7, 9, 1);
  const auto m2 = replica_mean_density(spec, g, 2, t, 7, 9, 4);
  CHECK(m1[1].values == m2[1].values);
}
