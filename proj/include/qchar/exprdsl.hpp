#pragma once

// A small expression language over q-series:
//
//   expr   := term (("+" | "-") term)*
//   term   := unary (("*" | "/") unary)*
//   unary  := "-" unary | factor
//   factor := atom ("^" sint)?
//   atom   := int | "q" ("^" "(" sint ("/" "2")? ")" | "^" sint)? | ident "(" args? ")" | "(" expr ")"
//   sint   := "-"? int | "(" "-"? int ")"      (exponents)
//   args   := "-"? int ("," "-"? int)*

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qchar/errors.hpp"
#include "qchar/qseries.hpp"

namespace qchar::dsl {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct IntLit {
  Coefficient value;  // nonnegative; negation is a Neg node
};
struct QMono {
  HalfExp exp;
};
struct Binary {
  char op;  // + - * /
  ExprPtr lhs;
  ExprPtr rhs;
};
struct Neg {
  ExprPtr operand;
};
struct Power {
  ExprPtr base;
  long exponent;
};
struct Call {
  std::string name;
  std::vector<long> args;
};

struct Expr {
  std::variant<IntLit, QMono, Binary, Neg, Power, Call> node;
  SourceSpan span;
};

struct Builtin {
  std::string_view name;
  int arity;
};
/// phi(j) poch(j,n) distp(j) gauss() fs(m,s) qp(m,s) hs(m,s) L0(m) Lk(m,k) cor22lhs(m).
const std::vector<Builtin>& builtins();

/// Throws SyntaxError, UnknownBuiltin or ArityError.
ExprPtr parse(std::string_view text);

/// Value below `order`. Throws DivisionByNonUnit, InvalidParameter from builtins, and
/// OrderUnderflow when the requested order cannot be guaranteed.
QSeries eval(const Expr& e, HalfExp order);

/// Canonical text; parse(format(e)) is structurally equal to e.
std::string format(const Expr& e);

/// Equality of trees, ignoring spans.
bool structurally_equal(const Expr& a, const Expr& b);

/// "line:col: message" for an error found in `text`.
std::string render_error(const ParseError& err, std::string_view text);

}  // namespace qchar::dsl
