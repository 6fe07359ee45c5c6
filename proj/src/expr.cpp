#include "mrn/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

namespace mrn {

RateExpr RateExpr::literal(double v) {
  Node n;
  n.op = Op::Literal;
  n.value = v;
  return RateExpr(std::vector<Node>{n});
}

RateExpr RateExpr::density(int l) {
  Node n;
  n.op = Op::Density;
  n.index = l;
  return RateExpr(std::vector<Node>{n});
}

RateExpr RateExpr::param(int p) {
  Node n;
  n.op = Op::Param;
  n.index = p;
  return RateExpr(std::vector<Node>{n});
}

RateExpr RateExpr::combine(Op op, const RateExpr& a, const RateExpr& b) {
  std::vector<Node> nodes;
  nodes.reserve(a.nodes_.size() + b.nodes_.size() + 1);
  nodes.insert(nodes.end(), a.nodes_.begin(), a.nodes_.end());
  const int shift = static_cast<int>(a.nodes_.size());
  for (Node n : b.nodes_) {
    if (n.lhs >= 0) n.lhs += shift;
    if (n.rhs >= 0) n.rhs += shift;
    nodes.push_back(n);
  }
  Node top;
  top.op = op;
  top.lhs = shift - 1;
  top.rhs = static_cast<int>(nodes.size()) - 1;
  nodes.push_back(top);
  return RateExpr(std::move(nodes));
}

RateExpr operator+(const RateExpr& a, const RateExpr& b) { return RateExpr::combine(RateExpr::Op::Add, a, b); }
RateExpr operator-(const RateExpr& a, const RateExpr& b) { return RateExpr::combine(RateExpr::Op::Sub, a, b); }
RateExpr operator*(const RateExpr& a, const RateExpr& b) { return RateExpr::combine(RateExpr::Op::Mul, a, b); }
RateExpr operator/(const RateExpr& a, const RateExpr& b) { return RateExpr::combine(RateExpr::Op::Div, a, b); }
RateExpr min(const RateExpr& a, const RateExpr& b) { return RateExpr::combine(RateExpr::Op::Min, a, b); }
RateExpr max(const RateExpr& a, const RateExpr& b) { return RateExpr::combine(RateExpr::Op::Max, a, b); }

RateExpr operator-(const RateExpr& a) {
  // Negated literals fold so that printing and re-parsing is the identity.
  if (a.nodes_.size() == 1 && a.nodes_[0].op == RateExpr::Op::Literal) {
    return RateExpr::literal(-a.nodes_[0].value);
  }
  std::vector<RateExpr::Node> nodes = a.nodes_;
  RateExpr::Node top;
  top.op = RateExpr::Op::Neg;
  top.lhs = static_cast<int>(nodes.size()) - 1;
  nodes.push_back(top);
  return RateExpr(std::move(nodes));
}

double RateExpr::eval(std::span<const double> densities, std::span<const double> params) const {
  constexpr std::size_t kInline = 32;
  std::array<double, kInline> inline_buf;
  std::vector<double> heap_buf;
  double* v = inline_buf.data();
  if (nodes_.size() > kInline) {
    heap_buf.resize(nodes_.size());
    v = heap_buf.data();
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    switch (n.op) {
      case Op::Literal: v[i] = n.value; break;
      case Op::Density: v[i] = densities[static_cast<std::size_t>(n.index)]; break;
      case Op::Param: v[i] = params[static_cast<std::size_t>(n.index)]; break;
      case Op::Neg: v[i] = -v[n.lhs]; break;
      case Op::Add: v[i] = v[n.lhs] + v[n.rhs]; break;
      case Op::Sub: v[i] = v[n.lhs] - v[n.rhs]; break;
      case Op::Mul: v[i] = v[n.lhs] * v[n.rhs]; break;
      case Op::Div: v[i] = v[n.lhs] / v[n.rhs]; break;
      case Op::Min: v[i] = std::min(v[n.lhs], v[n.rhs]); break;
      case Op::Max: v[i] = std::max(v[n.lhs], v[n.rhs]); break;
    }
  }
  return v[nodes_.size() - 1];
}

int RateExpr::max_density_index() const {
  int m = -1;
  for (const Node& n : nodes_) {
    if (n.op == Op::Density) m = std::max(m, n.index);
  }
  return m;
}

int RateExpr::max_param_index() const {
  int m = -1;
  for (const Node& n : nodes_) {
    if (n.op == Op::Param) m = std::max(m, n.index);
  }
  return m;
}

namespace {

using Op = RateExpr::Op;
using Node = RateExpr::Node;

int precedence(const Node& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Literal: return n.value < 0 || std::signbit(n.value) ? 3 : 4;
    default: return 4;
  }
}

std::string format_double(double v) {
  std::array<char, 64> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void print(const std::vector<Node>& nodes, int i, std::string& out) {
  const Node& n = nodes[static_cast<std::size_t>(i)];
  auto child = [&](int c, bool parens) {
    if (parens) out += '(';
    print(nodes, c, out);
    if (parens) out += ')';
  };
  switch (n.op) {
    case Op::Literal: out += format_double(n.value); return;
    case Op::Density: out += "a" + std::to_string(n.index + 1); return;
    case Op::Param: out += "b" + std::to_string(n.index + 1); return;
    case Op::Neg:
      out += '-';
      child(n.lhs, precedence(nodes[n.lhs]) < 3);
      return;
    case Op::Min:
    case Op::Max:
      out += n.op == Op::Min ? "min(" : "max(";
      print(nodes, n.lhs, out);
      out += ", ";
      print(nodes, n.rhs, out);
      out += ')';
      return;
    default: break;
  }
  const int p = precedence(n);
  const char* sym = n.op == Op::Add ? " + " : n.op == Op::Sub ? " - " : n.op == Op::Mul ? " * " : " / ";
  // Right operands of equal precedence keep parentheses so the tree shape survives re-parsing.
  child(n.lhs, precedence(nodes[n.lhs]) < p);
  out += sym;
  child(n.rhs, precedence(nodes[n.rhs]) <= p);
}

class Parser {
 public:
  Parser(std::string_view text, const SymbolTable& symbols) : text_(text), symbols_(symbols) {}

  RateExpr parse() {
    RateExpr e = expression();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("rate expression: " + msg + " at column " + std::to_string(pos_ + 1), 1, pos_ + 1);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  RateExpr expression() {
    RateExpr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + term();
      } else if (accept('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  RateExpr term() {
    RateExpr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * unary();
      } else if (accept('/')) {
        lhs = lhs / unary();
      } else {
        return lhs;
      }
    }
  }

  RateExpr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return primary();
  }

  RateExpr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      RateExpr e = expression();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  RateExpr number() {
    double v = 0.0;
    const char* first = text_.data() + pos_;
    auto res = std::from_chars(first, text_.data() + text_.size(), v);
    if (res.ec != std::errc{}) fail("malformed number");
    pos_ += static_cast<std::size_t>(res.ptr - first);
    return RateExpr::literal(v);
  }

  RateExpr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(text_.substr(start, pos_ - start));

    if (name == "min" || name == "max") {
      expect('(');
      RateExpr acc = expression();
      int args = 1;
      while (accept(',')) {
        RateExpr next = expression();
        acc = name == "min" ? min(acc, next) : max(acc, next);
        ++args;
      }
      expect(')');
      if (args < 2) fail(name + " needs at least two arguments");
      return acc;
    }

    // Canonical a<i> / b<i> take precedence over names so serialized specs re-parse unchanged.
    if ((name[0] == 'a' || name[0] == 'b') && name.size() > 1 &&
        std::all_of(name.begin() + 1, name.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
      int idx = 0;
      std::from_chars(name.data() + 1, name.data() + name.size(), idx);
      const int bound = name[0] == 'a' ? symbols_.num_states : symbols_.num_params;
      if (idx >= 1 && idx <= bound) {
        return name[0] == 'a' ? RateExpr::density(idx - 1) : RateExpr::param(idx - 1);
      }
    }
    if (auto it = std::find(symbols_.states.begin(), symbols_.states.end(), name); it != symbols_.states.end()) {
      return RateExpr::density(static_cast<int>(it - symbols_.states.begin()));
    }
    if (auto it = std::find(symbols_.params.begin(), symbols_.params.end(), name); it != symbols_.params.end()) {
      return RateExpr::param(static_cast<int>(it - symbols_.params.begin()));
    }
    if (auto it = symbols_.constants.find(name); it != symbols_.constants.end()) {
      return RateExpr::literal(it->second);
    }
    throw UnknownVariable(name, start + 1);
  }

  std::string_view text_;
  const SymbolTable& symbols_;
  std::size_t pos_ = 0;
};

bool nonneg_at(const std::vector<Node>& nodes, int i) {
  const Node& n = nodes[static_cast<std::size_t>(i)];
  switch (n.op) {
    case Op::Literal: return n.value >= 0.0;
    case Op::Density:
    case Op::Param: return true;
    case Op::Neg:
    case Op::Sub: return false;
    default: return nonneg_at(nodes, n.lhs) && nonneg_at(nodes, n.rhs);
  }
}

bool vanishes_at(const std::vector<Node>& nodes, int i, int l) {
  const Node& n = nodes[static_cast<std::size_t>(i)];
  switch (n.op) {
    case Op::Literal: return n.value == 0.0;
    case Op::Density: return n.index == l;
    case Op::Param: return false;
    case Op::Neg: return vanishes_at(nodes, n.lhs, l);
    case Op::Add:
    case Op::Sub:
    case Op::Max: return vanishes_at(nodes, n.lhs, l) && vanishes_at(nodes, n.rhs, l);
    case Op::Mul: return vanishes_at(nodes, n.lhs, l) || vanishes_at(nodes, n.rhs, l);
    case Op::Div: return vanishes_at(nodes, n.lhs, l);
    case Op::Min: {
      const bool a = vanishes_at(nodes, n.lhs, l);
      const bool b = vanishes_at(nodes, n.rhs, l);
      return (a && b) || (a && nonneg_at(nodes, n.rhs)) || (b && nonneg_at(nodes, n.lhs));
    }
  }
  return false;
}

bool positive_literal(const Node& n) { return n.op == Op::Literal && n.value > 0.0; }

}  // namespace

std::string RateExpr::to_string() const {
  std::string out;
  print(nodes_, root(), out);
  return out;
}

RateExpr parse_rate(std::string_view text, const SymbolTable& symbols) { return Parser(text, symbols).parse(); }

bool provably_nonnegative(const RateExpr& e) { return nonneg_at(e.nodes(), e.root()); }

bool vanishes_when_zero(const RateExpr& e, int l) { return vanishes_at(e.nodes(), e.root(), l); }

bool divisions_guarded(const RateExpr& e) {
  const auto& nodes = e.nodes();
  for (const Node& n : nodes) {
    if (n.op != Op::Div) continue;
    const Node& d = nodes[static_cast<std::size_t>(n.rhs)];
    if (positive_literal(d)) continue;
    if (d.op == Op::Max && (positive_literal(nodes[d.lhs]) || positive_literal(nodes[d.rhs]))) continue;
    return false;
  }
  return true;
}

}  // namespace mrn
