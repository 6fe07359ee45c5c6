#include "mrn/network.hpp"

#include <cmath>
#include <sstream>

namespace mrn {

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "invalid network specification:";
        for (const auto& d : diagnostics) os << "\n  [" << d.rule << "] " << d.message;
        return os.str();
      }()),
      diagnostics_(std::move(diagnostics)) {}

namespace {

std::string point_list(const std::vector<std::pair<double, double>>& pts, std::size_t limit = 8) {
  std::ostringstream os;
  for (std::size_t i = 0; i < pts.size() && i < limit; ++i) {
    if (i) os << ", ";
    os << "(" << pts[i].first << ", " << pts[i].second << ")";
  }
  if (pts.size() > limit) os << ", ... (" << pts.size() << " points)";
  return os.str();
}

void check_field(const Field& f, const std::string& where, std::vector<Diagnostic>& out) {
  if (auto err = f.table_shape_error(); !err.empty()) {
    out.push_back({"field-shape", where + ": " + err});
    return;
  }
  if (const auto* c = std::get_if<Field::Constant>(&f.repr()); c && !std::isfinite(c->value)) {
    out.push_back({"negative-field", where + " is not finite"});
    return;
  }
  if (const auto* b = std::get_if<Field::Builtin>(&f.repr()); b && !std::isfinite(b->scale)) {
    out.push_back({"negative-field", where + " scale is not finite"});
    return;
  }
  if (f.lower_bound() < 0.0) {
    out.push_back({"negative-field", where + " takes negative values (min " + std::to_string(f.lower_bound()) + ")"});
  }
}

}  // namespace

std::vector<Diagnostic> check_spec(const NetworkSpec& spec) {
  std::vector<Diagnostic> out;
  const std::size_t L = spec.num_states();
  const int P = static_cast<int>(spec.num_params());
  if (L == 0) out.push_back({"shape", "at least one local state is required"});

  if (!(spec.horizon > 0.0) || !std::isfinite(spec.horizon)) {
    out.push_back({"horizon", "horizon must be a positive finite time, got " + std::to_string(spec.horizon)});
  }

  if (spec.mu.size() != L) {
    out.push_back({"shape", "mu has " + std::to_string(spec.mu.size()) + " entries, expected " + std::to_string(L)});
  }
  for (std::size_t l = 0; l < spec.mu.size(); ++l) {
    if (!(spec.mu[l] >= 0.0) || !std::isfinite(spec.mu[l])) {
      out.push_back({"negative-migration", "mu[" + std::to_string(l) + "] = " + std::to_string(spec.mu[l]) +
                                               " must be a nonnegative finite rate"});
    }
  }

  for (std::size_t p = 0; p < spec.params.size(); ++p) {
    check_field(spec.params[p].field, "params[" + std::to_string(p) + "] '" + spec.params[p].name + "'", out);
  }

  if (spec.initial.size() != L) {
    out.push_back({"shape", "initial has " + std::to_string(spec.initial.size()) + " fields, expected " +
                                std::to_string(L)});
  }
  for (std::size_t l = 0; l < spec.initial.size(); ++l) {
    const std::string where = "initial[" + std::to_string(l) + "]";
    check_field(spec.initial[l], where, out);
    if (!spec.initial[l].table_shape_error().empty()) continue;
    if (auto pts = spec.initial[l].boundary_violations(); !pts.empty()) {
      out.push_back({"dbc", where + " is nonzero on the boundary at " + point_list(pts)});
    }
  }

  for (std::size_t j = 0; j < spec.reactions.size(); ++j) {
    const Reaction& r = spec.reactions[j];
    const std::string where = "reactions[" + std::to_string(j) + "]";
    if (r.consumed.size() != L || r.produced.size() != L) {
      out.push_back({"shape", where + " stoichiometry vectors must have length " + std::to_string(L)});
      continue;
    }
    for (std::size_t l = 0; l < L; ++l) {
      if (r.consumed[l] < 0 || r.produced[l] < 0) {
        out.push_back({"shape", where + " has a negative stoichiometric coefficient"});
        break;
      }
    }
    if (r.rate.max_density_index() >= static_cast<int>(L)) {
      out.push_back({"unknown-variable", where + " rate references a" + std::to_string(r.rate.max_density_index() + 1) +
                                             " but there are only " + std::to_string(L) + " states"});
      continue;
    }
    if (r.rate.max_param_index() >= P) {
      out.push_back({"unknown-variable", where + " rate references b" + std::to_string(r.rate.max_param_index() + 1) +
                                             " but there are only " + std::to_string(P) + " parameters"});
      continue;
    }
    for (const auto& n : r.rate.nodes()) {
      if (n.op == RateExpr::Op::Literal && !std::isfinite(n.value)) {
        out.push_back({"negative-constant", where + " rate contains a non-finite literal"});
        break;
      }
    }
    if (!divisions_guarded(r.rate)) {
      out.push_back({"unguarded-division",
                     where + " divides by an expression that is not max(positive literal, ...): " + r.rate.to_string()});
    }
    for (std::size_t l = 0; l < L; ++l) {
      if (r.consumed[l] > 0 && r.net(l) < 0 && !vanishes_when_zero(r.rate, static_cast<int>(l))) {
        out.push_back({"nonnegativity-guard", where + " consumes " + spec.states[l] +
                                                  " but its rate does not vanish when a" + std::to_string(l + 1) +
                                                  " = 0: " + r.rate.to_string()});
      }
    }
  }
  return out;
}

void validate(const NetworkSpec& spec) {
  auto diags = check_spec(spec);
  if (!diags.empty()) throw ValidationError(std::move(diags));
}

std::vector<Diagnostic> check_boundary(const NetworkSpec& spec, const LatticeGrid& grid) {
  std::vector<Diagnostic> out;
  for (std::size_t l = 0; l < spec.initial.size(); ++l) {
    std::vector<std::pair<double, double>> bad;
    for (RegionId r : grid.boundary()) {
      if (spec.initial[l](grid.x(r), grid.y(r)) != 0.0) bad.emplace_back(grid.x(r), grid.y(r));
    }
    if (!bad.empty()) {
      out.push_back({"dbc", "initial[" + std::to_string(l) + "] is nonzero at boundary regions " +
                                point_list(bad, bad.size())});
    }
  }
  return out;
}

double scaled_migration(const NetworkSpec& spec, int K, std::size_t l) {
  return spec.mu.at(l) * (static_cast<double>(K) * K);
}

std::vector<double> param_values(const NetworkSpec& spec, double x, double y) {
  std::vector<double> v;
  v.reserve(spec.params.size());
  for (const auto& p : spec.params) v.push_back(p.field(x, y));
  return v;
}

}  // namespace mrn
