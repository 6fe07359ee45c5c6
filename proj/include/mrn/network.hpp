#pragma once

#include <string>
#include <vector>

#include "mrn/errors.hpp"
#include "mrn/expr.hpp"
#include "mrn/field.hpp"
#include "mrn/lattice.hpp"

namespace mrn {

/// sum_l consumed[l] A_l  --rate-->  sum_l produced[l] A_l, with the rate
/// given in density form f_j. The count form is N * f_j(A/N, beta).
struct Reaction {
  std::vector<int> consumed;
  std::vector<int> produced;
  RateExpr rate;

  int net(std::size_t l) const { return produced[l] - consumed[l]; }

  bool operator==(const Reaction&) const = default;
};

struct NamedField {
  std::string name;
  ParameterField field;

  bool operator==(const NamedField&) const = default;
};

/// A mobile reaction network. Immutable once validated; share freely.
struct NetworkSpec {
  std::vector<std::string> states;   // order defines l
  std::vector<Reaction> reactions;
  std::vector<NamedField> params;
  std::vector<double> mu;            // base migration rates, one per state
  std::vector<InitialField> initial; // one per state
  double horizon = 10.0;

  std::size_t num_states() const { return states.size(); }
  std::size_t num_params() const { return params.size(); }

  bool operator==(const NetworkSpec&) const = default;
};

/// All violations of the structural rules; empty when the spec is valid.
std::vector<Diagnostic> check_spec(const NetworkSpec& spec);

/// Throws ValidationError listing every violation.
void validate(const NetworkSpec& spec);

/// Initial-field values that are nonzero at boundary regions of `grid`.
std::vector<Diagnostic> check_boundary(const NetworkSpec& spec, const LatticeGrid& grid);

/// mu_l * K^2: migration rate per neighbour on the K lattice.
double scaled_migration(const NetworkSpec& spec, int K, std::size_t l);

/// Parameter values at a point, in parameter order.
std::vector<double> param_values(const NetworkSpec& spec, double x, double y);

}  // namespace mrn
