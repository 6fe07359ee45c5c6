#include <cmath>
#include <cstring>

#include "doctest.h"
#include "mrn/errors.hpp"
#include "mrn/ode.hpp"
#include "mrn/random.hpp"
#include "mrn/scenarios.hpp"

using namespace mrn;

namespace {

DensityField filled(const LatticeGrid& g, std::size_t L, double v) {
  DensityField f(g.size(), L);
  for (RegionId r : g.interior()) {
    for (std::size_t l = 0; l < L; ++l) f.at(r, l) = v;
  }
  return f;
}

}  // namespace

TEST_CASE("discrete Laplacian") {
  LatticeGrid g(4);
  DensityField c(g.size(), 1);
  for (auto& v : c.values) v = 3.7;
  for (RegionId r : g.interior()) CHECK(discrete_laplacian(c, g, r, 0) == 0.0);

  DensityField x(g.size(), 1);
  for (RegionId r = 0; r < g.size(); ++r) x.at(r, 0) = g.x(r);
  CHECK(discrete_laplacian(x, g, g.at(0.5, 0.5), 0) == 0.0);

  for (int K : {2, 4, 9}) {
    LatticeGrid h(K);
    DensityField spike(h.size(), 1);
    const RegionId p = h.interior()[h.interior().size() / 2];
    spike.at(p, 0) = 1.0;
    CHECK(discrete_laplacian(spike, h, p, 0) == doctest::Approx(-4.0 * K * K).epsilon(1e-15));
  }
  CHECK_THROWS_AS(discrete_laplacian(c, g, g.at(0.0, 0.5), 0), std::invalid_argument);
}

TEST_CASE("discrete Laplacian commutes with quarter turns") {
  const int K = 6;
  LatticeGrid g(K);
  RandomStream rng(3, 0);
  DensityField f(g.size(), 1), rot(g.size(), 1);
  for (RegionId r : g.interior()) f.at(r, 0) = rng.uniform();
  for (RegionId r = 0; r < g.size(); ++r) rot.at(g.id(g.j_of(r), K - g.i_of(r)), 0) = f.at(r, 0);
  for (RegionId r : g.interior()) {
    const RegionId q = g.id(g.j_of(r), K - g.i_of(r));
    CHECK(discrete_laplacian(rot, g, q, 0) == doctest::Approx(discrete_laplacian(f, g, r, 0)).epsilon(1e-13));
  }
}

TEST_CASE("on/off vector field") {
  const auto spec = onoff_spec(0.01, 10);
  LatticeGrid g(4);
  DensityField f(g.size(), 2);
  for (RegionId r : g.interior()) {
    f.at(r, 0) = 0.25;
    f.at(r, 1) = 0.75;
  }
  const auto d = spatial_rhs(spec, g, f);
  const RegionId centre = g.at(0.5, 0.5);
  CHECK(d.at(centre, 0) == doctest::Approx(2.08025).epsilon(1e-14));
  CHECK(d.at(centre, 1) == doctest::Approx(-2.08025).epsilon(1e-14));
  for (RegionId r : g.boundary()) CHECK(d.at(r, 0) == 0.0);

  const double a[] = {0.25, 0.75};
  const auto s = stationary_rhs(spec, a, {});
  CHECK(s[0] == doctest::Approx(2.08025).epsilon(1e-14));
  CHECK(s[0] + s[1] == 0.0);
  const auto zero = spatial_rhs(spec, g, DensityField(g.size(), 2));
  for (double v : zero.values) CHECK(v == 0.0);
}

TEST_CASE("epidemic with no infected is at rest") {
  const auto spec = builtin_scenario("epidemic");
  const double a[] = {1.0};
  CHECK(stationary_rhs(spec, a, {})[0] == 0.0);
}

TEST_CASE("heat vector field is pure diffusion") {
  const auto spec = heat_spec(0.1);
  LatticeGrid g(8);
  RandomStream rng(5, 0);
  DensityField f(g.size(), 1);
  for (RegionId r : g.interior()) f.at(r, 0) = rng.uniform();
  const auto d = spatial_rhs(spec, g, f);
  for (RegionId r : g.interior()) CHECK(d.at(r, 0) == 0.1 * discrete_laplacian(f, g, r, 0));
}

TEST_CASE("Euler integration") {
  LatticeGrid g(6);
  SUBCASE("zero vector field keeps the field") {
    const auto spec = heat_spec(0.0);
    SpatialModel m(spec, g);
    const auto init = initial_density(spec, g);
    const auto traj = euler_trajectory(m, init, 1.0, 0.125);
    CHECK(traj.size() == 9);
    for (const auto& f : traj) CHECK(f.values == init.values);
  }
  SUBCASE("conservative reactions without migration keep the total") {
    const auto spec = onoff_spec(0.0, 25);
    SpatialModel m(spec, g);
    const auto init = initial_density(spec, g);
    integrate_euler(m, init, 10.0, 0.01, [&](std::size_t, const DensityField& a) {
      CHECK(a.total() == doctest::Approx(init.total()).epsilon(1e-13));
    });
  }
  SUBCASE("boundary stays exactly zero") {
    const auto spec = onoff_spec(0.01, 50);
    SpatialModel m(spec, g);
    integrate_euler(m, initial_density(spec, g), 2.0, 0.01, [&](std::size_t, const DensityField& a) {
      for (RegionId r : g.boundary()) {
        REQUIRE(a.at(r, 0) == 0.0);
        REQUIRE(a.at(r, 1) == 0.0);
      }
    });
  }
  SUBCASE("T/dt must be integral") {
    const auto spec = onoff_spec();
    SpatialModel m(spec, g);
    CHECK_THROWS_AS(integrate_euler(m, initial_density(spec, g), 1.0, 0.3), std::invalid_argument);
    CHECK(step_count(10.0, 0.1) == 100);
  }
}

TEST_CASE("blow-up is reported with step and region") {
  NetworkSpec spec;
  spec.states = {"x"};
  spec.mu = {0.0};
  spec.initial = {Field::scaled_theta(1.0)};
  SymbolTable sym;
  sym.num_states = 1;
  spec.reactions.push_back({{1}, {2}, parse_rate("1e100 * a1 * a1 * a1", sym)});
  LatticeGrid g(4);
  SpatialModel m(spec, g);
  try {
    integrate_euler(m, initial_density(spec, g), 1.0, 0.1);
    FAIL("expected a numeric error");
  } catch (const NumericError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("step") != std::string::npos);
    CHECK(msg.find("region") != std::string::npos);
  }
}

TEST_CASE("step halving halves the Euler error") {
  const auto spec = heat_spec(0.1);
  LatticeGrid g(16);
  SpatialModel m(spec, g);
  const auto init = initial_density(spec, g);
  const double dt = 1.0 / 128;
  const auto ref = integrate_euler(m, init, 1.0, dt / 8);
  const double e1 = sup_distance(integrate_euler(m, init, 1.0, dt), ref);
  const double e2 = sup_distance(integrate_euler(m, init, 1.0, dt / 2), ref);
  CHECK(e1 / e2 >= 1.6);
  CHECK(e1 / e2 <= 2.4);
}

TEST_CASE("RK4 agrees with fine Euler") {
  const auto spec = onoff_spec(0.01, 25);
  LatticeGrid g(7);
  SpatialModel m(spec, g);
  const auto init = initial_density(spec, g);
  const auto rk = integrate_rk4(m, init, 2.0, 0.01);
  const auto eu = integrate_euler(m, init, 2.0, 0.0001);
  CHECK(sup_distance(rk, eu) < 1e-3);
}

TEST_CASE("automatic step respects both time scales") {
  const auto spec = onoff_spec(0.001, 10);
  const double dt = auto_dt(spec, 256, 10.0);
  CHECK(0.001 * dt * 256 * 256 <= 0.9 / 4);
  CHECK(step_count(10.0, dt) == 3108);
  const double coarse = auto_dt(onoff_spec(0.0025, 10), 7, 10.0);
  CHECK(coarse * 2.857 <= 0.0101);
}

TEST_CASE("fluid model needs an edge-absorbing lattice") {
  CHECK_THROWS_AS(SpatialModel(onoff_spec(), LatticeGrid(7, Absorption::Outside)), std::invalid_argument);
}
