#include "hypernorden/expr.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <map>

namespace hypernorden {

namespace {

Expr make_node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

const std::map<std::string, ExprFunc, std::less<>>& function_table() {
  static const std::map<std::string, ExprFunc, std::less<>> table = {
      {"exp", ExprFunc::Exp},   {"log", ExprFunc::Log},  {"sin", ExprFunc::Sin},
      {"cos", ExprFunc::Cos},   {"sinh", ExprFunc::Sinh}, {"cosh", ExprFunc::Cosh},
      {"sqrt", ExprFunc::Sqrt}};
  return table;
}

const char* function_name(ExprFunc fn) {
  switch (fn) {
    case ExprFunc::Exp: return "exp";
    case ExprFunc::Log: return "log";
    case ExprFunc::Sin: return "sin";
    case ExprFunc::Cos: return "cos";
    case ExprFunc::Sinh: return "sinh";
    case ExprFunc::Cosh: return "cosh";
    case ExprFunc::Sqrt: return "sqrt";
  }
  return "?";
}

class Parser {
 public:
  Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  Expr run() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size())
      throw SyntaxError("unexpected trailing input", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Expr parse_sum() {
    Expr lhs = parse_term();
    for (;;) {
      const std::size_t at = pos_;
      if (eat('+'))
        lhs = make_node({ExprKind::Add, 0, 0, 0, ExprFunc::Exp, lhs, parse_term(), at});
      else if (eat('-'))
        lhs = make_node({ExprKind::Sub, 0, 0, 0, ExprFunc::Exp, lhs, parse_term(), at});
      else
        return lhs;
    }
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    for (;;) {
      const std::size_t at = pos_;
      if (eat('*'))
        lhs = make_node({ExprKind::Mul, 0, 0, 0, ExprFunc::Exp, lhs, parse_factor(), at});
      else if (eat('/'))
        lhs = make_node({ExprKind::Div, 0, 0, 0, ExprFunc::Exp, lhs, parse_factor(), at});
      else
        return lhs;
    }
  }

  Expr parse_factor() {
    skip_ws();
    const std::size_t at = pos_;
    if (eat('-'))
      return make_node({ExprKind::Negate, 0, 0, 0, ExprFunc::Exp, parse_factor(), nullptr, at});
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    for (;;) {
      const std::size_t at = pos_;
      if (!eat('^')) return base;
      const int e = parse_int_exponent();
      ExprNode n{ExprKind::Pow, 0, 0, e, ExprFunc::Exp, base, nullptr, at};
      base = make_node(std::move(n));
    }
  }

  int parse_int_exponent() {
    skip_ws();
    const std::size_t at = pos_;
    bool neg = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      neg = true;
      ++pos_;
    }
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      throw SyntaxError("expected integer exponent after '^'", at);
    int value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > 1'000'000) throw SyntaxError("exponent too large", at);
      ++pos_;
    }
    return neg ? -value : value;
  }

  Expr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw SyntaxError("unexpected end of input", pos_);
    const std::size_t at = pos_;
    const char c = text_[pos_];

    if (c == '(') {
      ++pos_;
      Expr inner = parse_sum();
      if (!eat(')')) throw SyntaxError("expected ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number(at);
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier(at);
    throw SyntaxError(std::string("unexpected character '") + c + "'", at);
  }

  Expr parse_number(std::size_t at) {
    std::size_t end = pos_;
    while (end < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.'))
      ++end;
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t e = end + 1;
      if (e < text_.size() && (text_[e] == '+' || text_[e] == '-')) ++e;
      if (e < text_.size() && std::isdigit(static_cast<unsigned char>(text_[e]))) {
        ++e;
        while (e < text_.size() && std::isdigit(static_cast<unsigned char>(text_[e]))) ++e;
        end = e;
      }
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + at, text_.data() + end, value);
    if (ec != std::errc() || ptr != text_.data() + end)
      throw SyntaxError("malformed number", at);
    pos_ = end;
    return make_node({ExprKind::Literal, value, 0, 0, ExprFunc::Exp, nullptr, nullptr, at});
  }

  Expr parse_identifier(std::size_t at) {
    std::size_t end = pos_;
    while (end < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
      ++end;
    const std::string_view name = text_.substr(at, end - at);
    pos_ = end;

    if (name.size() >= 2 && name[0] == 'x' &&
        std::isdigit(static_cast<unsigned char>(name[1]))) {
      int index = 0;
      const auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
      if (ec == std::errc() && ptr == name.data() + name.size()) {
        if (index < 1 || index > dim_)
          throw UnknownIdentifierError(
              "variable " + std::string(name) + " out of range for dimension " +
                  std::to_string(dim_),
              at);
        return make_node({ExprKind::Variable, 0, index, 0, ExprFunc::Exp, nullptr, nullptr, at});
      }
    }

    const auto it = function_table().find(name);
    if (it == function_table().end())
      throw UnknownIdentifierError("unknown identifier '" + std::string(name) + "'", at);
    if (!eat('(')) throw SyntaxError("expected '(' after function name", pos_);
    Expr arg = parse_sum();
    if (!eat(')')) throw SyntaxError("expected ')'", pos_);
    return make_node({ExprKind::Call, 0, 0, 0, it->second, arg, nullptr, at});
  }

  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;
};

void collect_vars(const Expr& e, std::set<int>& out) {
  if (!e) return;
  if (e->kind == ExprKind::Variable) out.insert(e->var);
  collect_vars(e->lhs, out);
  collect_vars(e->rhs, out);
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

Expr parse_expr(std::string_view text, int dim) { return Parser(text, dim).run(); }

std::string to_string(const Expr& e) {
  const ExprNode& n = *e;
  switch (n.kind) {
    case ExprKind::Literal:
      return format_double(n.literal);
    case ExprKind::Variable:
      return "x" + std::to_string(n.var);
    case ExprKind::Negate:
      return "(-" + to_string(n.lhs) + ")";
    case ExprKind::Add:
      return "(" + to_string(n.lhs) + "+" + to_string(n.rhs) + ")";
    case ExprKind::Sub:
      return "(" + to_string(n.lhs) + "-" + to_string(n.rhs) + ")";
    case ExprKind::Mul:
      return "(" + to_string(n.lhs) + "*" + to_string(n.rhs) + ")";
    case ExprKind::Div:
      return "(" + to_string(n.lhs) + "/" + to_string(n.rhs) + ")";
    case ExprKind::Pow:
      return "(" + to_string(n.lhs) + "^" + std::to_string(n.exponent) + ")";
    case ExprKind::Call:
      return std::string(function_name(n.fn)) + "(" + to_string(n.lhs) + ")";
  }
  return "?";
}

std::set<int> free_vars(const Expr& e) {
  std::set<int> out;
  collect_vars(e, out);
  return out;
}

Expr expr_literal(double value) {
  return make_node({ExprKind::Literal, value, 0, 0, ExprFunc::Exp, nullptr, nullptr, 0});
}

Expr expr_variable(int index) {
  return make_node({ExprKind::Variable, 0, index, 0, ExprFunc::Exp, nullptr, nullptr, 0});
}

namespace detail {

void throw_eval_domain(const char* what, const ExprNode& node) {
  ExprNode copy = node;
  const Expr view = std::make_shared<const ExprNode>(std::move(copy));
  throw EvaluationDomainError(std::string(what) + " in subexpression " + to_string(view) +
                                  " (offset " + std::to_string(node.offset) + ")",
                              to_string(view), node.offset);
}

}  // namespace detail

}  // namespace hypernorden
