#pragma once

#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>

#include "hypernorden/dual.hpp"
#include "hypernorden/errors.hpp"

namespace hypernorden {

/// Scalar-valued coordinate functions over variables x1..xD.
///
/// Grammar (EBNF, also documented in docs/expression-grammar.md):
///   expr    = term { ("+" | "-") term } ;
///   term    = factor { ("*" | "/") factor } ;
///   factor  = "-" factor | power ;
///   power   = atom { "^" integer } ;
///   atom    = number | variable | function "(" expr ")" | "(" expr ")" ;
///   variable = "x" digits ;                   (* 1-based, <= declared dim *)
///   function = "exp" | "log" | "sin" | "cos" | "sinh" | "cosh" | "sqrt" ;
///   integer  = [ "-" ] digits ;
///
/// "^" binds tighter than unary minus and associates to the left; there is
/// no implicit multiplication. Domain guards (division, log, sqrt) fire at
/// evaluation time, never at parse time.
enum class ExprKind { Literal, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };

enum class ExprFunc { Exp, Log, Sin, Cos, Sinh, Cosh, Sqrt };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprKind kind;
  double literal = 0.0;   // Literal
  int var = 0;            // Variable, 1-based
  int exponent = 0;       // Pow
  ExprFunc fn = ExprFunc::Exp;  // Call
  Expr lhs;
  Expr rhs;
  std::size_t offset = 0;  // byte offset in the source text, 0 for built exprs
};

/// Parse an expression over x1..x{dim}. Throws SyntaxError or
/// UnknownIdentifierError with the byte offset of the problem.
Expr parse_expr(std::string_view text, int dim);

/// Fully parenthesized rendering; parse(to_string(e)) reproduces e.
std::string to_string(const Expr& e);

/// Exact set of variable indices (1-based) appearing in e.
std::set<int> free_vars(const Expr& e);

/// Building blocks for programmatically assembled expressions.
Expr expr_literal(double value);
Expr expr_variable(int index);

namespace detail {

[[noreturn]] void throw_eval_domain(const char* what, const ExprNode& node);

}  // namespace detail

/// Evaluate e over any scalar algebra providing +,-,*,/ and the function set
/// (double, Dual1, Dual2). Derivatives propagate automatically when dual
/// scalars are bound. bindings[i] binds x{i+1}.
template <class S>
S evaluate(const Expr& e, std::span<const S> bindings) {
  const ExprNode& n = *e;
  switch (n.kind) {
    case ExprKind::Literal:
      return S(n.literal);
    case ExprKind::Variable:
      if (n.var < 1 || n.var > static_cast<int>(bindings.size()))
        detail::throw_eval_domain("variable index out of range of bindings", n);
      return bindings[static_cast<std::size_t>(n.var - 1)];
    case ExprKind::Negate:
      return -evaluate(n.lhs, bindings);
    case ExprKind::Add:
      return evaluate(n.lhs, bindings) + evaluate(n.rhs, bindings);
    case ExprKind::Sub:
      return evaluate(n.lhs, bindings) - evaluate(n.rhs, bindings);
    case ExprKind::Mul:
      return evaluate(n.lhs, bindings) * evaluate(n.rhs, bindings);
    case ExprKind::Div: {
      const S num = evaluate(n.lhs, bindings);
      const S den = evaluate(n.rhs, bindings);
      if (value_of(den) == 0.0) detail::throw_eval_domain("division by zero", n);
      return num / den;
    }
    case ExprKind::Pow: {
      const S base = evaluate(n.lhs, bindings);
      if (n.exponent < 0 && value_of(base) == 0.0)
        detail::throw_eval_domain("zero base with negative exponent", n);
      return pow_int(base, n.exponent);
    }
    case ExprKind::Call: {
      const S arg = evaluate(n.lhs, bindings);
      using std::cos;
      using std::cosh;
      using std::exp;
      using std::log;
      using std::sin;
      using std::sinh;
      using std::sqrt;
      switch (n.fn) {
        case ExprFunc::Exp:
          return exp(arg);
        case ExprFunc::Log:
          if (value_of(arg) <= 0.0) detail::throw_eval_domain("log of non-positive value", n);
          return log(arg);
        case ExprFunc::Sin:
          return sin(arg);
        case ExprFunc::Cos:
          return cos(arg);
        case ExprFunc::Sinh:
          return sinh(arg);
        case ExprFunc::Cosh:
          return cosh(arg);
        case ExprFunc::Sqrt:
          if (value_of(arg) < 0.0) detail::throw_eval_domain("sqrt of negative value", n);
          return sqrt(arg);
      }
      detail::throw_eval_domain("unknown function", n);
    }
  }
  detail::throw_eval_domain("malformed expression node", n);
}

/// Convenience overload for a plain vector of bindings.
template <class S>
S evaluate(const Expr& e, const std::vector<S>& bindings) {
  return evaluate(e, std::span<const S>(bindings));
}

}  // namespace hypernorden
