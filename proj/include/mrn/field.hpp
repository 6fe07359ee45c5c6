#pragma once

#include <string>
#include <variant>
#include <vector>

namespace mrn {

/// Smooth bump centred in the unit square, 1 at (1/2, 1/2) and identically 0
/// outside the inscribed disc of radius 1/2.
double theta(double x, double y);

/// A scalar function on [0,1]^2 used for parameter fields and initial densities.
class Field {
 public:
  struct Constant {
    double value = 0.0;
    bool operator==(const Constant&) const = default;
  };
  enum class Shape { Theta, SineMode };
  struct Builtin {
    Shape shape = Shape::Theta;
    double scale = 1.0;
    bool operator==(const Builtin&) const = default;
  };
  /// Samples on a uniform (rows x cols) grid; values[i][j] sits at
  /// (i/(rows-1), j/(cols-1)). Bilinear in between.
  struct Table {
    std::vector<std::vector<double>> values;
    bool operator==(const Table&) const = default;
  };
  using Repr = std::variant<Constant, Builtin, Table>;

  Field() = default;
  Field(Repr repr) : repr_(std::move(repr)) {}  // NOLINT(google-explicit-constructor)

  static Field constant(double v) { return Field(Constant{v}); }
  static Field scaled_theta(double scale) { return Field(Builtin{Shape::Theta, scale}); }
  /// scale * sin(pi x) sin(pi y), exactly 0 on the boundary of the square.
  static Field sine_mode(double scale) { return Field(Builtin{Shape::SineMode, scale}); }
  static Field table(std::vector<std::vector<double>> values) { return Field(Table{std::move(values)}); }

  double operator()(double x, double y) const;

  const Repr& repr() const { return repr_; }

  /// Smallest value the field can take on [0,1]^2.
  double lower_bound() const;

  /// Boundary locations where the field is nonzero. For tables these are
  /// table nodes; for constants the four corners stand in for the whole edge.
  std::vector<std::pair<double, double>> boundary_violations() const;

  /// Shape problems with a table (ragged rows, fewer than 2x2 samples).
  std::string table_shape_error() const;

  bool operator==(const Field&) const = default;

 private:
  Repr repr_ = Constant{0.0};
};

using ParameterField = Field;
using InitialField = Field;

}  // namespace mrn
