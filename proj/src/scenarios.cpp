#include "mrn/scenarios.hpp"

#include <stdexcept>

namespace mrn {

namespace {

SymbolTable symbols_for(const NetworkSpec& spec, std::map<std::string, double, std::less<>> constants) {
  SymbolTable s;
  s.states = spec.states;
  s.num_states = static_cast<int>(spec.states.size());
  for (const auto& p : spec.params) s.params.push_back(p.name);
  s.num_params = static_cast<int>(spec.params.size());
  s.constants = std::move(constants);
  return s;
}

// Susceptible density a1 out of a unit-density population.
NetworkSpec epidemic_spec() {
  NetworkSpec spec;
  spec.states = {"susceptible"};
  spec.mu = {0.001};
  spec.initial = {Field::scaled_theta(0.9)};
  spec.horizon = 10.0;
  const auto sym = symbols_for(spec, {{"beta", 1.0}});
  spec.reactions.push_back({{1}, {0}, parse_rate("beta * a1 * (1 - a1)", sym)});
  return spec;
}

// Downloaders (a1) and seeds (a2) with arrivals shaped by a theta-profile field.
NetworkSpec p2p_spec() {
  NetworkSpec spec;
  spec.states = {"downloader", "seed"};
  spec.params = {{"arrival", Field::scaled_theta(1.0)}};
  spec.mu = {0.001, 0.001};
  spec.initial = {Field::scaled_theta(1.0), Field::scaled_theta(0.2)};
  spec.horizon = 10.0;
  const auto sym =
      symbols_for(spec, {{"sigma", 0.05}, {"gamma", 0.2}, {"c", 1.0}, {"upload", 0.5}, {"eta", 0.5}});
  spec.reactions.push_back({{0, 0}, {1, 0}, parse_rate("arrival", sym)});
  spec.reactions.push_back({{1, 0}, {0, 0}, parse_rate("sigma * downloader", sym)});
  spec.reactions.push_back({{0, 1}, {0, 0}, parse_rate("gamma * seed", sym)});
  spec.reactions.push_back(
      {{1, 1}, {0, 2}, parse_rate("min(c * downloader, upload * (eta * downloader + seed))", sym)});
  return spec;
}

}  // namespace

NetworkSpec onoff_spec(double mu_off, double V, double lambda, double c) {
  NetworkSpec spec;
  spec.states = {"off", "on"};
  spec.mu = {mu_off, 0.0};
  spec.initial = {Field::constant(0.0), Field::scaled_theta(V)};
  spec.horizon = 10.0;
  const auto sym = symbols_for(spec, {{"lambda", lambda}, {"c", c}});
  spec.reactions.push_back({{1, 0}, {0, 1}, parse_rate("lambda * off", sym)});
  spec.reactions.push_back({{0, 1}, {1, 0}, parse_rate("c * min(on, 1)", sym)});
  return spec;
}

NetworkSpec heat_spec(double mu, std::optional<Field> initial) {
  NetworkSpec spec;
  spec.states = {"walker"};
  spec.mu = {mu};
  spec.initial = {initial.value_or(Field::sine_mode(1.0))};
  spec.horizon = 1.0;
  spec.reactions.push_back({{1}, {1}, RateExpr::literal(0.0)});
  return spec;
}

std::vector<std::string> builtin_scenarios() { return {"epidemic", "p2p", "onoff", "heat"}; }

NetworkSpec builtin_scenario(const std::string& name) {
  NetworkSpec spec;
  if (name == "epidemic") {
    spec = epidemic_spec();
  } else if (name == "p2p") {
    spec = p2p_spec();
  } else if (name == "onoff") {
    spec = onoff_spec();
  } else if (name == "heat") {
    spec = heat_spec();
  } else {
    throw std::invalid_argument("unknown scenario '" + name + "' (expected epidemic, p2p, onoff or heat)");
  }
  validate(spec);
  return spec;
}

ScenarioRoles scenario_roles(const std::string& name) {
  if (name == "onoff") return {1, 0};
  return {0, 0};
}

NetworkSpec apply_overrides(NetworkSpec spec, const ScenarioOverrides& o, std::size_t amplitude_state) {
  if (o.horizon) spec.horizon = *o.horizon;
  for (std::size_t l = 0; l < o.mu.size() && l < spec.mu.size(); ++l) {
    if (o.mu[l]) spec.mu[l] = *o.mu[l];
  }
  if (o.amplitude && amplitude_state < spec.initial.size()) {
    spec.initial[amplitude_state] = Field::scaled_theta(*o.amplitude);
  }
  validate(spec);
  return spec;
}

}  // namespace mrn
