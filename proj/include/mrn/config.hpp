#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mrn/network.hpp"

namespace mrn {

/// Parses a JSON network document and validates it.
///
/// Top-level keys: `states` (names), `reactions` (objects with `consumed`,
/// `produced` integer arrays and an infix `rate` string), `params` (objects
/// with `name` and `field`), optional `constants` (name -> number), `mu`,
/// `initial` (one field per state) and `horizon`.
///
/// A field is a number (constant), `{"builtin": "theta"|"sine", "scale": v}`
/// or `{"table": [[...], ...]}`.
///
/// Throws ParseError for malformed JSON or expressions (with line/column) and
/// ValidationError listing every rule violation.
NetworkSpec parse_spec(std::string_view text);
NetworkSpec load_spec(const std::filesystem::path& path);

/// Canonical JSON form. Constants are inlined into the rate strings, so
/// parse_spec(serialize_spec(s)) == s.
std::string serialize_spec(const NetworkSpec& spec);

}  // namespace mrn
