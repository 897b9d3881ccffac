#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "qchar/charfock.hpp"
#include "qchar/errors.hpp"
#include "qchar/exprdsl.hpp"
#include "test_util.hpp"

using namespace qchar;
using namespace qchar::dsl;
using qchar::testing::q_poly;

namespace {

ExprPtr node(decltype(Expr::node) n) { return std::make_shared<const Expr>(Expr{std::move(n), {}}); }

// Random well-formed trees; builtins kept cheap so evaluation stays fast.
ExprPtr random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 6);
  std::uniform_int_distribution<int> small(0, 5);
  switch (pick(rng)) {
    case 0: return node(IntLit{Coefficient(small(rng))});
    case 1: return node(QMono{HalfExp{small(rng) - 2}});
    case 2: {
      switch (small(rng) % 4) {
        case 0: return node(Call{"phi", {1 + small(rng) % 3}});
        case 1: return node(Call{"distp", {1 + small(rng) % 2}});
        case 2: return node(Call{"gauss", {}});
        default: return node(Call{"poch", {1, small(rng) % 3}});
      }
    }
    case 3: return node(Neg{random_expr(rng, depth - 1)});
    case 4: return node(Power{random_expr(rng, depth - 1), static_cast<long>(small(rng) % 3)});
    default: {
      static const char ops[] = {'+', '-', '*'};
      return node(Binary{ops[small(rng) % 3], random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
    }
  }
}

QSeries ev(const std::string& s, HalfExp order) { return eval(*parse(s), order); }

}  // namespace

TEST_CASE("parse shapes") {
  auto e = parse("phi(1)");
  REQUIRE(std::holds_alternative<Call>(e->node));
  CHECK(std::get<Call>(e->node).name == "phi");
  CHECK(std::get<Call>(e->node).args == std::vector<long>{1});

  e = parse("distp(1)^2 / phi(2)");
  REQUIRE(std::holds_alternative<Binary>(e->node));
  const auto& div = std::get<Binary>(e->node);
  CHECK(div.op == '/');
  CHECK(std::holds_alternative<Power>(div.lhs->node));
  CHECK(std::holds_alternative<Call>(div.rhs->node));

  e = parse("q^(1/2) * qp(2,1)");
  const auto& mul = std::get<Binary>(e->node);
  CHECK(std::get<QMono>(mul.lhs->node).exp == HalfExp{1});

  // left associativity and precedence
  CHECK(format(*parse("1 - 2 - 3")) == "1 - 2 - 3");
  CHECK(format(*parse("1 - (2 - 3)")) == "1 - (2 - 3)");
  CHECK(format(*parse("(1 + 2) * 3")) == "(1 + 2) * 3");
  CHECK(format(*parse("-q^2")) == "-q^2");
  CHECK(format(*parse("(-q)^2")) == "(-q)^2");
  CHECK(format(*parse("q^-1")) == "q^(-1)");
  CHECK(format(*parse("q^(-3/2)")) == "q^(-3/2)");
  CHECK(format(*parse("q^(4/2)")) == "q^2");
  CHECK(format(*parse("(q^2)^3")) == "(q^2)^3");
  CHECK(format(*parse("fs( 2 , -1 )")) == "fs(2,-1)");
  CHECK(format(*parse("phi( 1 )")) == "phi(1)");
  CHECK(format(*parse("gauss()")) == "gauss()");

  const auto neg = parse("-2 * 3");
  CHECK(std::get<Binary>(neg->node).op == '*');
}

TEST_CASE("spans") {
  const std::string text = "1 + phi(2)";
  auto e = parse(text);
  CHECK(e->span == SourceSpan{0, text.size()});
  const auto& b = std::get<Binary>(e->node);
  CHECK(b.rhs->span == SourceSpan{4, 10});
  CHECK(b.lhs->span == SourceSpan{0, 1});
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(parse("foo(1)"), UnknownBuiltin);
  CHECK_THROWS_AS(parse("phi(1,2)"), ArityError);
  CHECK_THROWS_AS(parse("gauss(1)"), ArityError);
  CHECK_THROWS_AS(parse("q^(1/3)"), SyntaxError);
  CHECK_THROWS_AS(parse("phi(x)"), SyntaxError);
  CHECK_THROWS_AS(parse("1 +"), SyntaxError);
  CHECK_THROWS_AS(parse("(1"), SyntaxError);
  CHECK_THROWS_AS(parse("1 2"), SyntaxError);
  CHECK_THROWS_AS(parse("1 $ 2"), SyntaxError);
  CHECK_THROWS_AS(parse(""), SyntaxError);

  const std::vector<std::string> bad{"1 +", "(1", "phi(", "phi(1", "q^", "q^(1/", "2 ** 3", "1 2", ")", "phi(1,)",
                                     "1 € 2", "a^b", "\n\n  3 + * 4", "q^(99999999999999999999)"};
  for (const auto& text : bad) {
    try {
      parse(text);
      FAIL("accepted: " << text);
    } catch (const SyntaxError& e) {
      CHECK(e.span().begin <= text.size());
      CHECK(e.span().end <= text.size());
      CHECK(e.span().begin <= e.span().end);
      CHECK_FALSE(e.expected().empty());
    } catch (const ParseError& e) {
      CHECK(e.span().end <= text.size());
    }
  }

  try {
    parse("1 +\n  * 2");
    FAIL("accepted");
  } catch (const SyntaxError& e) {
    CHECK(render_error(e, "1 +\n  * 2").rfind("2:3: ", 0) == 0);
  }
  try {
    parse("nope()");
    FAIL("accepted");
  } catch (const UnknownBuiltin& e) {
    CHECK(render_error(e, "nope()") == "1:1: unknown function 'nope'");
  }
}

TEST_CASE("evaluation") {
  CHECK(ev("gauss()", HalfExp::from_q(7)) == q_poly({1, 1, 0, 1, 0, 0, 1}, 7));
  CHECK(ev("phi(1)*distp(1)^2 - gauss()", HalfExp::from_q(50)).is_zero());
  CHECK(ev("qp(2,0) - cor22lhs(2)", HalfExp::from_q(100)).is_zero());
  CHECK(ev("L0(2)", HalfExp::from_q(5)) == q_poly({1, 2, 4, 8, 14}, 5));
  CHECK(ev("distp(1)^2 / phi(2)", HalfExp::from_q(40)) == lchar_basic(2, HalfExp::from_q(40)));
  CHECK(ev("Lk(3,2) - Lk(3,-2)", HalfExp::from_q(60)).is_zero());
  CHECK(ev("hs(2,0) - gauss()", HalfExp::from_q(30)).is_zero());
  CHECK(ev("fs(3,0) - fs(3,2)", HalfExp::from_q(60)).is_zero());
  CHECK(ev("poch(1,2)", HalfExp::from_q(4)) == q_poly({1, -1, -1, 1}, 4));
  CHECK(ev("1/(1-q)", HalfExp::from_q(4)) == q_poly({1, 1, 1, 1}, 4));
  CHECK(ev("(1-q)^-1", HalfExp::from_q(4)) == q_poly({1, 1, 1, 1}, 4));
  CHECK(ev("-3 + 3", HalfExp{20}).is_zero());

  // negative exponents force deeper evaluation of the other factor
  const QSeries r = ev("q^(-5) * phi(1)", HalfExp::from_q(3));
  CHECK(r.order() == HalfExp::from_q(3));
  CHECK(r.min_exp() == HalfExp::from_q(-5));
  CHECK(r == euler_phi(1, HalfExp::from_q(8)).shifted(HalfExp::from_q(-5)));
  const QSeries inv = ev("1 / (q^(-1/2) + 1)", HalfExp{6});
  CHECK(inv.order() == HalfExp{6});
  CHECK(inv.min_exp() == HalfExp{1});

  CHECK_THROWS_AS(ev("1 / (2 + q)", HalfExp{10}), DivisionByNonUnit);
  CHECK_THROWS_AS(ev("1 / (q - q)", HalfExp{10}), DivisionByNonUnit);
  CHECK_THROWS_AS(ev("phi(0)", HalfExp{10}), InvalidParameter);
  CHECK_THROWS_AS(ev("fs(1,0)", HalfExp{10}), InvalidParameter);
}

TEST_CASE("round trip on random trees") {
  std::mt19937_64 rng(20240607);
  for (int n = 0; n < 500; ++n) {
    const ExprPtr e = random_expr(rng, 4);
    const std::string text = format(*e);
    const ExprPtr back = parse(text);
    CHECK_MESSAGE(structurally_equal(*e, *back), text);
    CHECK(format(*back) == text);
  }
}

TEST_CASE("evaluation is a homomorphism") {
  std::mt19937_64 rng(77);
  const HalfExp order{24};
  for (int n = 0; n < 150; ++n) {
    const ExprPtr a = random_expr(rng, 2);
    const ExprPtr b = random_expr(rng, 2);
    INFO(format(*a), " | ", format(*b));
    const QSeries va = eval(*a, order), vb = eval(*b, order);
    for (char op : {'+', '-', '*'}) {
      const Expr combined{Binary{op, a, b}, {}};
      const QSeries got = eval(combined, order);
      QSeries want = op == '+' ? va + vb : op == '-' ? va - vb : mul_truncated(eval(*a, order + order), eval(*b, order + order), order);
      CHECK_FALSE(first_difference(got, want).has_value());
      CHECK(got.order() == order);
    }
  }
}
