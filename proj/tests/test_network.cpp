#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "mrn/config.hpp"
#include "mrn/expr.hpp"
#include "mrn/field.hpp"
#include "mrn/lattice.hpp"
#include "mrn/network.hpp"
#include "mrn/random.hpp"
#include "mrn/scenarios.hpp"

using namespace mrn;

namespace {

bool has_rule(const ValidationError& e, const std::string& rule) {
  return std::any_of(e.diagnostics().begin(), e.diagnostics().end(),
                     [&](const Diagnostic& d) { return d.rule == rule; });
}

const char* kOnoff = R"json({
  "states": ["off", "on"],
  "constants": {"lambda": 0.25, "c": 2.857},
  "reactions": [
    {"consumed": [1, 0], "produced": [0, 1], "rate": "lambda * off"},
    {"consumed": [0, 1], "produced": [1, 0], "rate": "c * min(on, 1)"}
  ],
  "mu": [0.001, 0],
  "initial": [0, {"builtin": "theta", "scale": 10}],
  "horizon": 10
})json";

}  // namespace

TEST_CASE("lattice sizes and neighbour counts") {
  for (int K : {1, 2, 3, 7, 16}) {
    LatticeGrid g(K);
    CHECK(g.size() == static_cast<std::size_t>((K + 1) * (K + 1)));
    CHECK(g.boundary().size() == static_cast<std::size_t>(4 * K));
    for (RegionId r = 0; r < g.size(); ++r) {
      const int i = g.i_of(r), j = g.j_of(r);
      const bool corner = (i == 0 || i == K) && (j == 0 || j == K);
      const std::size_t expect = g.is_interior(r) ? 4 : corner ? 2 : 3;
      if (K >= 2) CHECK(g.neighbors(r).size() == expect);
    }
  }
}

TEST_CASE("neighbours of the spec examples") {
  LatticeGrid g(4);
  const auto n00 = g.neighbors_of(0.0, 0.0);
  CHECK(std::set<RegionId>(n00.begin(), n00.end()) == std::set<RegionId>{g.at(0.25, 0.0), g.at(0.0, 0.25)});
  CHECK(LatticeGrid(2).neighbors_of(0.5, 0.5).size() == 4);
  CHECK(g.neighbors_of(0.25, 0.0).size() == 3);
  CHECK_THROWS_AS(g.neighbors_of(0.3, 0.5), std::out_of_range);
}

TEST_CASE("neighbour relation is symmetric") {
  for (int K : {2, 5, 9}) {
    LatticeGrid g(K);
    for (RegionId p = 0; p < g.size(); ++p) {
      for (RegionId q : g.neighbors(p)) {
        const auto& back = g.neighbors(q);
        CHECK(std::find(back.begin(), back.end(), p) != back.end());
      }
    }
  }
}

TEST_CASE("outside absorption keeps every region live") {
  LatticeGrid g(7, Absorption::Outside);
  CHECK(g.interior().size() == 64);
  CHECK(g.boundary().empty());
  CHECK(g.boundary_neighbor_count(g.id(0, 0)) == 2);
  CHECK(g.boundary_neighbor_count(g.id(0, 3)) == 1);
  CHECK(g.boundary_neighbor_count(g.id(3, 3)) == 0);
  LatticeGrid e(7);
  CHECK(e.boundary_neighbor_count(e.id(1, 1)) == 2);
  CHECK(e.boundary_neighbor_count(e.id(1, 3)) == 1);
}

TEST_CASE("theta bump") {
  CHECK(theta(0.5, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(theta(1.0, 0.5) == 0.0);
  CHECK(theta(0.0, 0.0) == 0.0);
  // 50-digit reference value of exp(4 - 16/3)
  CHECK(theta(0.75, 0.5) == doctest::Approx(0.26359713811572677).epsilon(1e-14));
}

TEST_CASE("rate evaluation") {
  SymbolTable sym;
  sym.states = {"off", "on"};
  sym.num_states = 2;
  sym.constants = {{"c", 2.857}};
  const auto f2 = parse_rate("c * min(a2, 1)", sym);
  const double a[] = {0.25, 0.75};
  CHECK(f2.eval(a, {}) == doctest::Approx(2.14275).epsilon(1e-14));
  const double z[] = {0.3, 0.0};
  CHECK(f2.eval(z, {}) == 0.0);

  SymbolTable p2p;
  p2p.num_states = 2;
  p2p.constants = {{"c", 1.0}, {"mu", 0.5}, {"eta", 0.5}};
  const auto f4 = parse_rate("min(c * a1, mu * (eta * a1 + a2))", p2p);
  const double zero[] = {0.0, 0.0};
  CHECK(f4.eval(zero, {}) == 0.0);
  const double pt[] = {1.0, 0.2};
  CHECK(f4.eval(pt, {}) == doctest::Approx(std::min(1.0, 0.5 * (0.5 + 0.2))));
}

TEST_CASE("expression parser") {
  SymbolTable sym;
  sym.states = {"x", "y"};
  sym.params = {"k"};
  sym.num_states = 2;
  sym.num_params = 1;
  const double a[] = {2.0, 3.0};
  const double b[] = {0.5};
  CHECK(parse_rate("1 + 2 * 3", sym).eval(a, b) == 7.0);
  CHECK(parse_rate("(1 + 2) * 3", sym).eval(a, b) == 9.0);
  CHECK(parse_rate("8 - 2 - 1", sym).eval(a, b) == 5.0);
  CHECK(parse_rate("8 / 2 / 2", sym).eval(a, b) == 2.0);
  CHECK(parse_rate("-x + y", sym).eval(a, b) == 1.0);
  CHECK(parse_rate("max(x, y, k)", sym).eval(a, b) == 3.0);
  CHECK(parse_rate("min(x, y, k)", sym).eval(a, b) == 0.5);
  CHECK(parse_rate("k * a1 * b1", sym).eval(a, b) == 0.5);
  CHECK(parse_rate("1e-3 * x", sym).eval(a, b) == doctest::Approx(0.002));
  CHECK_THROWS_AS(parse_rate("a3", sym), UnknownVariable);
  CHECK_THROWS_AS(parse_rate("q * x", sym), UnknownVariable);
  CHECK_THROWS_AS(parse_rate("x +", sym), ParseError);
  CHECK_THROWS_AS(parse_rate("min(x)", sym), ParseError);
  CHECK_THROWS_AS(parse_rate("(x", sym), ParseError);
}

TEST_CASE("structural checks") {
  SymbolTable sym;
  sym.num_states = 2;
  sym.num_params = 1;
  CHECK(vanishes_when_zero(parse_rate("3 * a1 * a2", sym), 0));
  CHECK(vanishes_when_zero(parse_rate("min(a1, 1)", sym), 0));
  CHECK_FALSE(vanishes_when_zero(parse_rate("a1 + b1", sym), 0));
  CHECK(vanishes_when_zero(parse_rate("a1 * a2 + a1", sym), 0));
  CHECK(provably_nonnegative(parse_rate("min(a1, 2) * b1 + 1", sym)));
  CHECK_FALSE(provably_nonnegative(parse_rate("a1 - a2", sym)));
  CHECK(divisions_guarded(parse_rate("a1 / max(0.01, a2)", sym)));
  CHECK(divisions_guarded(parse_rate("a1 / 4", sym)));
  CHECK_FALSE(divisions_guarded(parse_rate("a1 / a2", sym)));
}

TEST_CASE("scaled migration") {
  auto spec = onoff_spec(0.010);
  CHECK(scaled_migration(spec, 7, 0) == doctest::Approx(0.49).epsilon(1e-14));
  CHECK(scaled_migration(spec, 7, 1) == 0.0);
  CHECK(scaled_migration(onoff_spec(0.001), 16, 0) == doctest::Approx(0.256).epsilon(1e-14));
}

TEST_CASE("parse the on/off document") {
  const auto spec = parse_spec(kOnoff);
  CHECK(spec.num_states() == 2);
  CHECK(spec.reactions.size() == 2);
  CHECK(spec == onoff_spec(0.001, 10.0));
}

TEST_CASE("validation diagnostics") {
  std::string text = kOnoff;
  SUBCASE("nonzero boundary initial field") {
    text.replace(text.find("\"initial\": [0,"), 14, "\"initial\": [0.5,");
    try {
      parse_spec(text);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(has_rule(e, "dbc"));
    }
  }
  SUBCASE("unknown variable") {
    text.replace(text.find("lambda * off"), 12, "lambda * a3");
    try {
      parse_spec(text);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(has_rule(e, "unknown-variable"));
    }
  }
  SUBCASE("negative migration names the field") {
    text.replace(text.find("[0.001, 0]"), 10, "[-0.001, 0]");
    try {
      parse_spec(text);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(has_rule(e, "negative-migration"));
      CHECK(std::string(e.what()).find("mu[0]") != std::string::npos);
    }
  }
  SUBCASE("negative constant") {
    text.replace(text.find("\"c\": 2.857"), 10, "\"c\": -2.857");
    CHECK_THROWS_AS(parse_spec(text), ValidationError);
  }
  SUBCASE("unguarded division") {
    text.replace(text.find("lambda * off"), 12, "off / on");
    try {
      parse_spec(text);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(has_rule(e, "unguarded-division"));
    }
  }
  SUBCASE("missing nonnegativity guard") {
    text.replace(text.find("lambda * off"), 12, "lambda");
    try {
      parse_spec(text);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(has_rule(e, "nonnegativity-guard"));
    }
  }
  SUBCASE("JSON syntax error has a position") {
    text.insert(text.find("\"mu\""), "}");
    try {
      parse_spec(text);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() > 1);
    }
  }
}

TEST_CASE("boundary check lists lattice points") {
  auto spec = onoff_spec();
  spec.initial[0] = Field::constant(0.5);
  const auto diags = check_boundary(spec, LatticeGrid(3));
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].rule == "dbc");
  CHECK(diags[0].message.find("(0, 0)") != std::string::npos);
}

TEST_CASE("builtin scenarios validate") {
  for (const auto& name : builtin_scenarios()) CHECK_NOTHROW(validate(builtin_scenario(name)));
  CHECK_THROWS_AS(builtin_scenario("nope"), std::invalid_argument);
}

TEST_CASE("tabulated fields interpolate bilinearly") {
  const Field f = Field::table({{0, 0, 0}, {0, 4, 0}, {0, 0, 0}});
  CHECK(f(0.5, 0.5) == 4.0);
  CHECK(f(0.25, 0.5) == doctest::Approx(2.0));
  CHECK(f(0.25, 0.25) == doctest::Approx(1.0));
  CHECK(f(0.0, 0.3) == 0.0);
}

namespace {

RateExpr random_expr(RandomStream& rng, int L, int P, int depth) {
  if (depth == 0 || rng.below(3) == 0) {
    switch (rng.below(3)) {
      case 0: return RateExpr::literal(std::ldexp(static_cast<double>(rng.below(1u << 20)) + 1.0, -17));
      case 1: return RateExpr::density(static_cast<int>(rng.below(L)));
      default: return P > 0 ? RateExpr::param(static_cast<int>(rng.below(P))) : RateExpr::literal(0.1);
    }
  }
  const auto a = random_expr(rng, L, P, depth - 1);
  const auto b = random_expr(rng, L, P, depth - 1);
  switch (rng.below(5)) {
    case 0: return a + b;
    case 1: return a * b;
    case 2: return min(a, b);
    case 3: return max(a, b);
    default: return a / max(RateExpr::literal(0.25), b);
  }
}

}  // namespace

TEST_CASE("serialize then parse is the identity") {
  RandomStream rng(11, 0);
  for (int trial = 0; trial < 200; ++trial) {
    NetworkSpec spec;
    const int L = 1 + static_cast<int>(rng.below(3));
    const int P = static_cast<int>(rng.below(3));
    for (int l = 0; l < L; ++l) {
      spec.states.push_back("s" + std::to_string(l));
      spec.mu.push_back(static_cast<double>(rng.below(100)) / 1000.0);
      spec.initial.push_back(rng.below(2) ? Field::scaled_theta(1.0 + static_cast<double>(rng.below(50)))
                                          : Field::sine_mode(0.5));
    }
    for (int p = 0; p < P; ++p) {
      spec.params.push_back({"k" + std::to_string(p), rng.below(2) ? Field::constant(0.3)
                                                                   : Field::table({{1, 2}, {3, 4.5}})});
    }
    const int J = 1 + static_cast<int>(rng.below(3));
    for (int j = 0; j < J; ++j) {
      Reaction r;
      r.consumed.assign(L, 0);
      r.produced.assign(L, 0);
      const int l = static_cast<int>(rng.below(L));
      r.consumed[l] = 1;
      r.produced[static_cast<int>(rng.below(L))] += 1 + static_cast<int>(rng.below(2));
      r.rate = RateExpr::density(l) * random_expr(rng, L, P, 3);
      spec.reactions.push_back(r);
    }
    spec.horizon = 1.0 + static_cast<double>(rng.below(20));
    REQUIRE(check_spec(spec).empty());
    const auto text = serialize_spec(spec);
    CHECK(parse_spec(text) == spec);
    CHECK(serialize_spec(parse_spec(text)) == text);
  }
}

TEST_CASE("initial fields vanish on every lattice boundary") {
  for (const auto& name : builtin_scenarios()) {
    const auto spec = builtin_scenario(name);
    for (int K : {2, 7, 15, 64}) {
      LatticeGrid g(K);
      for (RegionId r : g.boundary()) {
        for (const auto& f : spec.initial) CHECK(f(g.x(r), g.y(r)) == 0.0);
      }
    }
  }
}
