#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mrn/network.hpp"

namespace mrn {

/// Optional adjustments applied on top of a builtin or loaded spec.
struct ScenarioOverrides {
  std::optional<double> horizon;
  /// Per-state migration rates; entries left empty keep the spec value.
  std::vector<std::optional<double>> mu;
  /// Replaces the scenario's primary initial field with V * theta (the on
  /// state for `onoff`, whose off state starts empty).
  std::optional<double> amplitude;
};

/// Builtin names: "epidemic", "p2p", "onoff", "heat".
std::vector<std::string> builtin_scenarios();

/// Throws std::invalid_argument for unknown names. Result is validated.
NetworkSpec builtin_scenario(const std::string& name);

/// State whose initial field the V amplitude controls, and the state the
/// headline fraction metric reports (off state for `onoff`).
struct ScenarioRoles {
  std::size_t amplitude_state = 0;
  std::size_t metric_state = 0;
};
ScenarioRoles scenario_roles(const std::string& name);

NetworkSpec apply_overrides(NetworkSpec spec, const ScenarioOverrides& o, std::size_t amplitude_state);

/// On/off model: off --lambda a1--> on, on --c min(a2,1)--> off, with
/// lambda = 0.25, c = 2.857, mu = (mu_off, 0), alpha_off = 0, alpha_on = V theta.
NetworkSpec onoff_spec(double mu_off = 0.001, double V = 10.0, double lambda = 0.25, double c = 2.857);

/// Pure diffusion: one state, a single reaction with rate 0.
NetworkSpec heat_spec(double mu = 0.1, std::optional<Field> initial = std::nullopt);

}  // namespace mrn
