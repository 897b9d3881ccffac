#include "qchar/exprdsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>

#include "qchar/charfock.hpp"

namespace qchar::dsl {

const std::vector<Builtin>& builtins() {
  static const std::vector<Builtin> table{{"phi", 1}, {"poch", 2}, {"distp", 1}, {"gauss", 0}, {"fs", 2},
                                          {"qp", 2},  {"hs", 2},   {"L0", 1},    {"Lk", 2},    {"cor22lhs", 1}};
  return table;
}

namespace {

enum class Tok { Int, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::string_view text;
  SourceSpan span;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + std::string(t.text) + "'";
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(c)) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Tok::Int, s.substr(start, i - start), {start, i}});
      continue;
    }
    if (std::isalpha(c) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::Ident, s.substr(start, i - start), {start, i}});
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ',': k = Tok::Comma; break;
      default: {
        // one whole UTF-8 sequence
        std::size_t end = i + 1;
        while (end < s.size() && (static_cast<unsigned char>(s[end]) & 0xC0) == 0x80) ++end;
        throw SyntaxError("unexpected character '" + std::string(s.substr(i, end - i)) + "'", {i, end},
                          {"expression"});
      }
    }
    ++i;
    out.push_back({k, s.substr(start, 1), {start, i}});
  }
  out.push_back({Tok::End, {}, {s.size(), s.size()}});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  ExprPtr parse_all() {
    ExprPtr e = expr();
    if (peek().kind != Tok::End) fail({"'+'", "'-'", "'*'", "'/'", "end of input"});
    return e;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string msg = "unexpected " + describe(t) + ", expected ";
    for (std::size_t k = 0; k < expected.size(); ++k) msg += (k ? (k + 1 == expected.size() ? " or " : ", ") : "") + expected[k];
    SourceSpan sp = t.span;
    if (sp.begin == sp.end && sp.begin > 0) sp.begin -= 1;  // point at the last byte at end of input
    throw SyntaxError(msg, sp, std::move(expected));
  }
  Token expect(Tok k, const char* name) {
    if (peek().kind != k) fail({name});
    return take();
  }

  static ExprPtr make(decltype(Expr::node) n, SourceSpan sp) { return std::make_shared<const Expr>(Expr{std::move(n), sp}); }

  long small_int(const Token& t) const {
    long v = 0;
    const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (res.ec != std::errc{} || v > (1L << 40)) throw SyntaxError("integer " + std::string(t.text) + " is too large here", t.span, {"smaller integer"});
    return v;
  }

  // "-"? int
  long signed_int() {
    const bool neg = accept(Tok::Minus);
    const Token t = expect(Tok::Int, "integer");
    const long v = small_int(t);
    return neg ? -v : v;
  }

  // exponent after '^': sint, or "(" sint ("/" "2")? ")" when halves are allowed
  HalfExp exponent(bool halves) {
    if (accept(Tok::LParen)) {
      const long n = signed_int();
      HalfExp e = HalfExp::from_q(n);
      if (halves && accept(Tok::Slash)) {
        const Token d = expect(Tok::Int, "2");
        if (d.text != "2") throw SyntaxError("exponent denominator must be 2", d.span, {"2"});
        e = HalfExp{n};
      }
      expect(Tok::RParen, "')'");
      return e;
    }
    if (peek().kind != Tok::Minus && peek().kind != Tok::Int) fail({"integer", "'-'", "'('"});
    return HalfExp::from_q(signed_int());
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const char op = take().kind == Tok::Plus ? '+' : '-';
      ExprPtr rhs = term();
      lhs = make(Binary{op, lhs, rhs}, {lhs->span.begin, rhs->span.end});
    }
    return lhs;
  }

  ExprPtr term() {
    ExprPtr lhs = unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const char op = take().kind == Tok::Star ? '*' : '/';
      ExprPtr rhs = unary();
      lhs = make(Binary{op, lhs, rhs}, {lhs->span.begin, rhs->span.end});
    }
    return lhs;
  }

  ExprPtr unary() {
    if (peek().kind == Tok::Minus) {
      const std::size_t begin = take().span.begin;
      ExprPtr operand = unary();
      return make(Neg{operand}, {begin, operand->span.end});
    }
    return factor();
  }

  ExprPtr factor() {
    ExprPtr base = atom();
    if (accept(Tok::Caret)) {
      const HalfExp e = exponent(false);
      return make(Power{base, e.u / 2}, {base->span.begin, toks_[pos_ - 1].span.end});
    }
    return base;
  }

  ExprPtr atom() {
    const Token t = peek();
    switch (t.kind) {
      case Tok::Int: {
        take();
        return make(IntLit{Coefficient(std::string(t.text))}, t.span);
      }
      case Tok::LParen: {
        take();
        ExprPtr inner = expr();
        const Token close = expect(Tok::RParen, "')'");
        // parentheses do not create nodes; widen the span to include them
        return make(inner->node, {t.span.begin, close.span.end});
      }
      case Tok::Ident: {
        take();
        if (t.text == "q" && peek().kind != Tok::LParen) {
          HalfExp e = HalfExp::from_q(1);
          if (accept(Tok::Caret)) e = exponent(true);
          return make(QMono{e}, {t.span.begin, toks_[pos_ - 1].span.end});
        }
        const auto& table = builtins();
        const auto it = std::find_if(table.begin(), table.end(), [&](const Builtin& b) { return b.name == t.text; });
        if (it == table.end()) throw UnknownBuiltin("unknown function '" + std::string(t.text) + "'", t.span);
        expect(Tok::LParen, "'('");
        std::vector<long> args;
        if (peek().kind != Tok::RParen) {
          args.push_back(signed_int());
          while (accept(Tok::Comma)) args.push_back(signed_int());
        }
        if (peek().kind != Tok::RParen) fail({"','", "')'"});
        const Token close = take();
        const SourceSpan sp{t.span.begin, close.span.end};
        if (static_cast<int>(args.size()) != it->arity) {
          throw ArityError(std::string(t.text) + " takes " + std::to_string(it->arity) + " argument" +
                               (it->arity == 1 ? "" : "s") + ", got " + std::to_string(args.size()),
                           sp);
        }
        return make(Call{std::string(t.text), std::move(args)}, sp);
      }
      default:
        fail({"integer", "'q'", "function name", "'('", "'-'"});
    }
  }
};

int narrow(long v) {
  if (v < std::numeric_limits<int>::min() / 4 || v > std::numeric_limits<int>::max() / 4) {
    throw InvalidParameter("builtin argument out of range: " + std::to_string(v));
  }
  return static_cast<int>(v);
}

QSeries eval_call(const Call& c, HalfExp order) {
  std::vector<int> a;
  for (long v : c.args) a.push_back(narrow(v));
  const std::string& n = c.name;
  if (n == "phi") return euler_phi(a[0], order);
  if (n == "poch") return pochhammer(a[0], a[1], order);
  if (n == "distp") return dist_product(a[0], order);
  if (n == "gauss") return gauss_sum(order);
  if (n == "fs") return fs_char(a[0], a[1], order);
  if (n == "qp") return fs_quasiparticle(a[0], a[1], order);
  if (n == "hs") return h_s(a[0], a[1], order);
  if (n == "L0") return lchar_basic(a[0], order);
  if (n == "Lk") return lchar_family(a[0], a[1], order);
  if (n == "cor22lhs") return fock_vacuum_product(a[0], order);
  throw InvalidParameter("unknown function " + n);
}

constexpr int kRetries = 16;
constexpr long kMaxPower = 100000;

QSeries divide(const QSeries& a, const QSeries& b) {
  if (b.is_zero()) throw DivisionByNonUnit("division by a series that vanishes below its order");
  const Coefficient& lead = b.coeffs().front();
  if (lead != 1 && lead != -1) throw DivisionByNonUnit("division by a series with leading coefficient " + lead.get_str());
  return mul(a, invert(b));
}

QSeries power_of(const QSeries& base, long n) {
  if (n > kMaxPower || n < -kMaxPower) throw InvalidParameter("exponent " + std::to_string(n) + " is too large");
  if (n == 0) return QSeries::one(std::max(base.order(), HalfExp{1}));
  if (n > 0) return power(base, static_cast<int>(n));
  return power(divide(QSeries::one(base.order() - base.min_exp()), base), static_cast<int>(-n));
}

// Evaluates at `order` or above when possible; the caller checks what it got.
QSeries eval_at(const Expr& e, HalfExp order);

template <class Combine>
QSeries with_retries(HalfExp order, Combine combine) {
  HalfExp request = order;
  QSeries r;
  for (int attempt = 0; attempt < kRetries; ++attempt) {
    r = combine(request);
    if (r.order() >= order) return r.truncated(order);
    request = request + (order - r.order());
  }
  return r;
}

QSeries eval_at(const Expr& e, HalfExp order) {
  return std::visit(
      [&](const auto& n) -> QSeries {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          if (sgn(n.value) == 0 || order.u <= 0) return QSeries::zero(order);
          return QSeries::monomial(n.value, HalfExp{0}, order);
        } else if constexpr (std::is_same_v<T, QMono>) {
          if (n.exp >= order) return QSeries::zero(order);
          return QSeries::monomial(1, n.exp, order);
        } else if constexpr (std::is_same_v<T, Call>) {
          return eval_call(n, order);
        } else if constexpr (std::is_same_v<T, Neg>) {
          return -eval_at(*n.operand, order);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return with_retries(order, [&](HalfExp req) {
            const QSeries a = eval_at(*n.lhs, req);
            const QSeries b = eval_at(*n.rhs, req);
            switch (n.op) {
              case '+': return a + b;
              case '-': return a - b;
              case '*': return a * b;
              default: return divide(a, b);
            }
          });
        } else {
          return with_retries(order, [&](HalfExp req) { return power_of(eval_at(*n.base, req), n.exponent); });
        }
      },
      e.node);
}

int precedence(const Expr& e) {
  if (const auto* b = std::get_if<Binary>(&e.node)) return (b->op == '+' || b->op == '-') ? 1 : 2;
  if (std::holds_alternative<Neg>(e.node)) return 3;
  if (std::holds_alternative<Power>(e.node)) return 4;
  return 5;
}

std::string paren(const std::string& s) { return "(" + s + ")"; }

std::string format_exponent(long n) { return n < 0 ? paren(std::to_string(n)) : std::to_string(n); }

}  // namespace

ExprPtr parse(std::string_view text) { return Parser(text).parse_all(); }

QSeries eval(const Expr& e, HalfExp order) {
  const QSeries r = eval_at(e, order);
  if (r.order() < order) {
    throw OrderUnderflow("expression is only determined below u^" + std::to_string(r.order().u) +
                         ", requested u^" + std::to_string(order.u));
  }
  return r.truncated(order);
}

std::string format(const Expr& e) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          return n.value.get_str();
        } else if constexpr (std::is_same_v<T, QMono>) {
          if (n.exp.u == 2) return "q";
          if (n.exp.u % 2 == 0) return "q^" + format_exponent(n.exp.u / 2);
          return "q^(" + std::to_string(n.exp.u) + "/2)";
        } else if constexpr (std::is_same_v<T, Call>) {
          std::string s = n.name + "(";
          for (std::size_t k = 0; k < n.args.size(); ++k) s += (k ? "," : "") + std::to_string(n.args[k]);
          return s + ")";
        } else if constexpr (std::is_same_v<T, Neg>) {
          const std::string inner = format(*n.operand);
          return "-" + (precedence(*n.operand) < 3 ? paren(inner) : inner);
        } else if constexpr (std::is_same_v<T, Binary>) {
          const int p = precedence(e);
          std::string l = format(*n.lhs), r = format(*n.rhs);
          if (precedence(*n.lhs) < p) l = paren(l);
          if (precedence(*n.rhs) <= p) r = paren(r);
          return l + " " + n.op + " " + r;
        } else {
          // a bare q-monomial would absorb the exponent
          std::string b = format(*n.base);
          if (precedence(*n.base) < 5 || std::holds_alternative<QMono>(n.base->node)) b = paren(b);
          return b + "^" + format_exponent(n.exponent);
        }
      },
      e.node);
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, IntLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, QMono>) {
          return x.exp == y.exp;
        } else if constexpr (std::is_same_v<T, Call>) {
          return x.name == y.name && x.args == y.args;
        } else if constexpr (std::is_same_v<T, Neg>) {
          return structurally_equal(*x.operand, *y.operand);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return x.op == y.op && structurally_equal(*x.lhs, *y.lhs) && structurally_equal(*x.rhs, *y.rhs);
        } else {
          return x.exponent == y.exponent && structurally_equal(*x.base, *y.base);
        }
      },
      a.node);
}

std::string render_error(const ParseError& err, std::string_view text) {
  std::size_t line = 1, col = 1;
  const std::size_t stop = std::min(err.span().begin, text.size());
  for (std::size_t i = 0; i < stop; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col) + ": " + err.what();
}

}  // namespace qchar::dsl
