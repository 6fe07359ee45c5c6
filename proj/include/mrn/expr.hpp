#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mrn/errors.hpp"

namespace mrn {

/// Rate law in density form: a small expression tree over literals, local
/// densities a1..aL, parameter-field values b1..bP and the operators
/// + - * / min max.
///
/// Nodes are stored children-first, so evaluation is a single forward pass
/// and the root is always the last node.
class RateExpr {
 public:
  enum class Op : std::uint8_t { Literal, Density, Param, Neg, Add, Sub, Mul, Div, Min, Max };

  struct Node {
    Op op = Op::Literal;
    double value = 0.0;  // Literal
    int index = 0;       // Density / Param, zero-based
    int lhs = -1;
    int rhs = -1;

    bool operator==(const Node&) const = default;
  };

  RateExpr() : RateExpr(literal(0.0)) {}

  static RateExpr literal(double v);
  static RateExpr density(int l);
  static RateExpr param(int p);

  friend RateExpr operator+(const RateExpr& a, const RateExpr& b);
  friend RateExpr operator-(const RateExpr& a, const RateExpr& b);
  friend RateExpr operator*(const RateExpr& a, const RateExpr& b);
  friend RateExpr operator/(const RateExpr& a, const RateExpr& b);
  friend RateExpr operator-(const RateExpr& a);
  friend RateExpr min(const RateExpr& a, const RateExpr& b);
  friend RateExpr max(const RateExpr& a, const RateExpr& b);

  double eval(std::span<const double> densities, std::span<const double> params) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  int root() const { return static_cast<int>(nodes_.size()) - 1; }

  /// Highest density / parameter index referenced, or -1.
  int max_density_index() const;
  int max_param_index() const;

  /// Canonical infix form using a1.., b1.. and shortest round-trip literals.
  std::string to_string() const;

  bool operator==(const RateExpr&) const = default;

 private:
  explicit RateExpr(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}
  static RateExpr combine(Op op, const RateExpr& a, const RateExpr& b);

  std::vector<Node> nodes_;
};

/// Name bindings used while parsing an infix rate string.
struct SymbolTable {
  std::vector<std::string> states;           // name -> a(index+1)
  std::vector<std::string> params;           // name -> b(index+1)
  std::map<std::string, double, std::less<>> constants;
  int num_states = 0;                        // bounds for raw a<i> / b<i>
  int num_params = 0;
};

/// Thrown for identifiers that resolve to nothing (including a<i> out of range).
class UnknownVariable : public ParseError {
 public:
  UnknownVariable(const std::string& name, std::size_t column)
      : ParseError("unknown variable '" + name + "'", 1, column), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

RateExpr parse_rate(std::string_view text, const SymbolTable& symbols);

/// Structural checks backing the validator.

/// True if the expression is provably >= 0 on the nonnegative orthant.
bool provably_nonnegative(const RateExpr& e);

/// True if the expression is identically 0 whenever density `l` is 0
/// (other inputs nonnegative).
bool vanishes_when_zero(const RateExpr& e, int l);

/// Every division has a positive literal divisor or a divisor of the form
/// max(positive literal, expr).
bool divisions_guarded(const RateExpr& e);

}  // namespace mrn
