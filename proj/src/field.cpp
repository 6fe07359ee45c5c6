#include "mrn/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mrn {

double theta(double x, double y) {
  const double dx = x - 0.5;
  const double dy = y - 0.5;
  const double r2 = dx * dx + dy * dy;
  if (r2 >= 0.25) return 0.0;
  return std::exp(4.0 - 1.0 / (0.25 - r2));
}

namespace {

double sample_table(const Field::Table& t, double x, double y) {
  const auto rows = t.values.size();
  const auto cols = t.values.front().size();
  const double fx = std::clamp(x, 0.0, 1.0) * static_cast<double>(rows - 1);
  const double fy = std::clamp(y, 0.0, 1.0) * static_cast<double>(cols - 1);
  const auto i0 = std::min(static_cast<std::size_t>(fx), rows - 2);
  const auto j0 = std::min(static_cast<std::size_t>(fy), cols - 2);
  const double u = fx - static_cast<double>(i0);
  const double v = fy - static_cast<double>(j0);
  const auto& r0 = t.values[i0];
  const auto& r1 = t.values[i0 + 1];
  return (1 - u) * ((1 - v) * r0[j0] + v * r0[j0 + 1]) + u * ((1 - v) * r1[j0] + v * r1[j0 + 1]);
}

bool on_boundary(double x, double y) { return x == 0.0 || x == 1.0 || y == 0.0 || y == 1.0; }

}  // namespace

double Field::operator()(double x, double y) const {
  return std::visit(
      [&](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return r.value;
        } else if constexpr (std::is_same_v<T, Builtin>) {
          if (r.shape == Shape::Theta) return r.scale * theta(x, y);
          if (on_boundary(x, y)) return 0.0;
          return r.scale * std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * y);
        } else {
          return sample_table(r, x, y);
        }
      },
      repr_);
}

double Field::lower_bound() const {
  return std::visit(
      [](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return r.value;
        } else if constexpr (std::is_same_v<T, Builtin>) {
          return std::min(0.0, r.scale);
        } else {
          double m = 0.0;
          bool first = true;
          for (const auto& row : r.values) {
            for (double v : row) {
              m = first ? v : std::min(m, v);
              first = false;
            }
          }
          return m;
        }
      },
      repr_);
}

std::vector<std::pair<double, double>> Field::boundary_violations() const {
  std::vector<std::pair<double, double>> out;
  if (const auto* c = std::get_if<Constant>(&repr_)) {
    if (c->value != 0.0) out = {{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}};
  } else if (const auto* t = std::get_if<Table>(&repr_)) {
    if (!table_shape_error().empty()) return out;
    const auto rows = t->values.size();
    const auto cols = t->values.front().size();
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        const bool edge = i == 0 || j == 0 || i + 1 == rows || j + 1 == cols;
        if (edge && t->values[i][j] != 0.0) {
          out.emplace_back(static_cast<double>(i) / static_cast<double>(rows - 1),
                           static_cast<double>(j) / static_cast<double>(cols - 1));
        }
      }
    }
  }
  return out;
}

std::string Field::table_shape_error() const {
  const auto* t = std::get_if<Table>(&repr_);
  if (!t) return {};
  if (t->values.size() < 2) return "table needs at least 2 rows";
  const auto cols = t->values.front().size();
  if (cols < 2) return "table needs at least 2 columns";
  for (const auto& row : t->values) {
    if (row.size() != cols) return "table rows have different lengths";
    for (double v : row) {
      if (!std::isfinite(v)) return "table contains a non-finite value";
    }
  }
  return {};
}

}  // namespace mrn
