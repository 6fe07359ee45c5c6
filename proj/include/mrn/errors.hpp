#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrn {

/// Malformed input text: JSON syntax, expression syntax, bad flag values.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : std::runtime_error(what), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct Diagnostic {
  std::string rule;     // e.g. "unknown-variable", "dbc", "negative-migration"
  std::string message;
};

/// A well-formed document that describes an invalid network.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Diagnostic> diagnostics);

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Non-finite values, stability violations and similar solver failures.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mrn
