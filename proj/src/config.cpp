#include "mrn/config.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include "json.hpp"

namespace mrn {

using nlohmann::json;

namespace {

struct Collector {
  std::vector<Diagnostic> diags;
  void add(std::string rule, std::string msg) { diags.push_back({std::move(rule), std::move(msg)}); }
};

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::optional<Field> parse_field(const json& j, const std::string& where, Collector& c) {
  if (j.is_number()) return Field::constant(j.get<double>());
  if (!j.is_object()) {
    c.add("schema", where + " must be a number or an object");
    return std::nullopt;
  }
  if (j.contains("builtin")) {
    const auto& name = j["builtin"];
    const double scale = j.contains("scale") && j["scale"].is_number() ? j["scale"].get<double>() : 1.0;
    if (j.contains("scale") && !j["scale"].is_number()) c.add("schema", where + ".scale must be a number");
    if (name == "theta") return Field::scaled_theta(scale);
    if (name == "sine") return Field::sine_mode(scale);
    c.add("schema", where + ".builtin must be \"theta\" or \"sine\"");
    return std::nullopt;
  }
  if (j.contains("table")) {
    const auto& t = j["table"];
    std::vector<std::vector<double>> rows;
    if (!t.is_array()) {
      c.add("schema", where + ".table must be an array of arrays");
      return std::nullopt;
    }
    for (const auto& row : t) {
      if (!row.is_array()) {
        c.add("schema", where + ".table must be an array of arrays");
        return std::nullopt;
      }
      std::vector<double> r;
      for (const auto& v : row) {
        if (!v.is_number()) {
          c.add("schema", where + ".table entries must be numbers");
          return std::nullopt;
        }
        r.push_back(v.get<double>());
      }
      rows.push_back(std::move(r));
    }
    return Field::table(std::move(rows));
  }
  c.add("schema", where + " needs a \"builtin\" or \"table\" key");
  return std::nullopt;
}

json field_to_json(const Field& f) {
  return std::visit(
      [](const auto& r) -> json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Field::Constant>) {
          return r.value;
        } else if constexpr (std::is_same_v<T, Field::Builtin>) {
          return json{{"builtin", r.shape == Field::Shape::Theta ? "theta" : "sine"}, {"scale", r.scale}};
        } else {
          return json{{"table", r.values}};
        }
      },
      f.repr());
}

std::vector<int> int_vector(const json& j, const std::string& where, Collector& c) {
  std::vector<int> out;
  if (!j.is_array()) {
    c.add("schema", where + " must be an array of integers");
    return out;
  }
  for (const auto& v : j) {
    if (!v.is_number_integer()) {
      c.add("schema", where + " must contain integers only");
      return {};
    }
    out.push_back(v.get<int>());
  }
  return out;
}

}  // namespace

NetworkSpec parse_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    auto [line, col] = line_column(text, e.byte);
    throw ParseError("config: JSON syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                         ": " + e.what(),
                     line, col);
  }
  if (!doc.is_object()) throw ParseError("config: top level must be a JSON object", 1, 1);

  Collector c;
  NetworkSpec spec;

  if (!doc.contains("states") || !doc["states"].is_array()) {
    c.add("schema", "missing array 'states'");
  } else {
    for (const auto& s : doc["states"]) {
      if (!s.is_string()) {
        c.add("schema", "state names must be strings");
        continue;
      }
      spec.states.push_back(s.get<std::string>());
    }
  }

  SymbolTable symbols;
  symbols.states = spec.states;
  symbols.num_states = static_cast<int>(spec.states.size());

  if (doc.contains("constants")) {
    if (!doc["constants"].is_object()) {
      c.add("schema", "'constants' must be an object");
    } else {
      for (const auto& [name, v] : doc["constants"].items()) {
        if (!v.is_number()) {
          c.add("schema", "constant '" + name + "' must be a number");
          continue;
        }
        const double value = v.get<double>();
        if (value < 0.0) c.add("negative-constant", "constant '" + name + "' = " + std::to_string(value) + " is negative");
        symbols.constants[name] = value;
      }
    }
  }

  if (doc.contains("params")) {
    if (!doc["params"].is_array()) {
      c.add("schema", "'params' must be an array");
    } else {
      for (std::size_t p = 0; p < doc["params"].size(); ++p) {
        const auto& pj = doc["params"][p];
        const std::string where = "params[" + std::to_string(p) + "]";
        if (!pj.is_object() || !pj.contains("name") || !pj["name"].is_string() || !pj.contains("field")) {
          c.add("schema", where + " must be an object with 'name' and 'field'");
          continue;
        }
        auto f = parse_field(pj["field"], where + ".field", c);
        spec.params.push_back({pj["name"].get<std::string>(), f.value_or(Field{})});
      }
    }
  }
  for (const auto& p : spec.params) symbols.params.push_back(p.name);
  symbols.num_params = static_cast<int>(spec.params.size());

  if (!doc.contains("reactions") || !doc["reactions"].is_array()) {
    c.add("schema", "missing array 'reactions'");
  } else {
    for (std::size_t j = 0; j < doc["reactions"].size(); ++j) {
      const auto& rj = doc["reactions"][j];
      const std::string where = "reactions[" + std::to_string(j) + "]";
      if (!rj.is_object() || !rj.contains("consumed") || !rj.contains("produced") || !rj.contains("rate") ||
          !rj["rate"].is_string()) {
        c.add("schema", where + " must have 'consumed', 'produced' and a string 'rate'");
        continue;
      }
      Reaction r;
      r.consumed = int_vector(rj["consumed"], where + ".consumed", c);
      r.produced = int_vector(rj["produced"], where + ".produced", c);
      const auto rate_text = rj["rate"].get<std::string>();
      try {
        r.rate = parse_rate(rate_text, symbols);
      } catch (const UnknownVariable& e) {
        c.add("unknown-variable", where + ".rate: " + e.what() + " in \"" + rate_text + "\"");
        continue;
      } catch (const ParseError& e) {
        throw ParseError("config: " + where + ".rate: " + e.what(), 0, e.column());
      }
      spec.reactions.push_back(std::move(r));
    }
  }

  if (!doc.contains("mu") || !doc["mu"].is_array()) {
    c.add("schema", "missing array 'mu'");
  } else {
    for (const auto& v : doc["mu"]) {
      if (!v.is_number()) {
        c.add("schema", "'mu' entries must be numbers");
        continue;
      }
      spec.mu.push_back(v.get<double>());
    }
  }

  if (!doc.contains("initial") || !doc["initial"].is_array()) {
    c.add("schema", "missing array 'initial'");
  } else {
    for (std::size_t l = 0; l < doc["initial"].size(); ++l) {
      auto f = parse_field(doc["initial"][l], "initial[" + std::to_string(l) + "]", c);
      spec.initial.push_back(f.value_or(Field{}));
    }
  }

  if (doc.contains("horizon")) {
    if (doc["horizon"].is_number()) {
      spec.horizon = doc["horizon"].get<double>();
    } else {
      c.add("schema", "'horizon' must be a number");
    }
  }

  for (auto& d : check_spec(spec)) c.diags.push_back(std::move(d));
  if (!c.diags.empty()) throw ValidationError(std::move(c.diags));
  return spec;
}

NetworkSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

std::string serialize_spec(const NetworkSpec& spec) {
  json doc;
  doc["states"] = spec.states;
  json params = json::array();
  for (const auto& p : spec.params) params.push_back({{"name", p.name}, {"field", field_to_json(p.field)}});
  doc["params"] = params;
  json reactions = json::array();
  for (const auto& r : spec.reactions) {
    reactions.push_back({{"consumed", r.consumed}, {"produced", r.produced}, {"rate", r.rate.to_string()}});
  }
  doc["reactions"] = reactions;
  doc["mu"] = spec.mu;
  json initial = json::array();
  for (const auto& f : spec.initial) initial.push_back(field_to_json(f));
  doc["initial"] = initial;
  doc["horizon"] = spec.horizon;
  return doc.dump(2);
}

}  // namespace mrn
