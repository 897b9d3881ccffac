#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <numbers>

#include "qchar/bivariate.hpp"
#include "qchar/charfock.hpp"
#include "qchar/errors.hpp"
#include "test_util.hpp"

using namespace qchar;
using qchar::testing::naive_product;
using qchar::testing::q_poly;

namespace {

QSeries from_map(const std::map<std::int64_t, Coefficient>& terms, std::int64_t order_u) {
  std::int64_t lo = terms.empty() ? 0 : std::min<std::int64_t>(0, terms.begin()->first);
  std::vector<Coefficient> c(static_cast<std::size_t>(order_u - lo));
  for (const auto& [e, v] : terms)
    if (e < order_u) c[static_cast<std::size_t>(e - lo)] += v;
  return QSeries::from_coeffs(HalfExp{lo}, HalfExp{order_u}, std::move(c));
}

// h_s by scanning the box |a|, |p| <= cutoff.
QSeries h_box(int m, int s, std::int64_t order_u, int cutoff) {
  std::map<std::int64_t, Coefficient> terms;
  for (long a = -cutoff; a <= cutoff; ++a)
    for (long p = -cutoff; p <= cutoff; ++p) {
      const bool pos = a >= 0 && p >= 0, neg = a < 0 && p < 0;
      if (!pos && !neg) continue;
      const long e = (p + s) * (p + s + 1) - long{s} * m + long{m} * a * (a + 1) + 2L * m * a * p;
      if (e >= order_u) continue;
      const int sign = (a % 2 == 0) ? 1 : -1;
      terms[e] += pos ? sign : -sign;
    }
  return from_map(terms, order_u);
}

// Quadruple sum with every index bounded by `cutoff`, each term built from naive products.
QSeries quasiparticle_box(int m, int s, std::int64_t order_u, int cutoff) {
  const HalfExp order{order_u};
  auto inv_pochs = [&](int j) {
    std::vector<QSeries> out;
    QSeries p = QSeries::one(order);
    for (int i = 0; i <= cutoff; ++i) {
      if (i > 0) p = p * (QSeries::one(order) - QSeries::monomial(1, HalfExp::from_q(long{j} * i), order));
      out.push_back(invert(p));
    }
    return out;
  };
  const auto iq = inv_pochs(1), iqm = inv_pochs(m);
  QSeries total = QSeries::zero(order);
  for (int a = 0; a <= cutoff; ++a)
    for (int b = 0; b <= cutoff; ++b)
      for (int c = 0; c <= cutoff; ++c) {
        const int d = a - b + c - s;
        if (d < 0 || d > cutoff) continue;
        const long e = long{a} * (a + 1) + long{b} * (b - 1) + 2L * c * m;
        if (e >= order_u) continue;
        QSeries t = iq[a] * iq[b] * iqm[c] * iqm[d];
        total = total + t.shifted(HalfExp{e}).truncated(order);
      }
  return total;
}

QSeries u_shift(const QSeries& x, std::int64_t e) { return x.shifted(HalfExp{e}); }

bool agree(const QSeries& a, const QSeries& b) { return !first_difference(a, b).has_value(); }

}  // namespace

TEST_CASE("specialization table") {
  for (int m = 2; m <= 6; ++m) {
    SpecializationTable t(m);
    for (int i = 1; i <= m; ++i) CHECK(t.epsilon(i) == HalfExp::from_q(m - i));
    CHECK(t.epsilon(m + 1) == HalfExp{0});
    CHECK(t.delta() == HalfExp::from_q(m));
    for (int i = 0; i < m; ++i) CHECK(t.alpha(i) == HalfExp::from_q(1));
    CHECK(t.alpha(m) == HalfExp{0});
    CHECK(t.alpha_even0() == HalfExp::from_q(1));
    // The odd root alpha_m together with the others adds up to delta.
    HalfExp sum{0};
    for (int i = 0; i <= m; ++i) sum = sum + t.alpha(i);
    CHECK(sum == t.delta());
    for (int j = 1; j <= 4; ++j) {
      for (int i = 1; i <= m; ++i) {
        CHECK(t.mode_weight(SpecializationTable::Mode::psi, i, j).u == 2 * i + 2 * m * j - 3 * m);
        CHECK(t.mode_weight(SpecializationTable::Mode::psistar, i, j).u == -2 * i + 2 * m * j + m);
      }
      CHECK(t.mode_weight(SpecializationTable::Mode::phi, 1, j).u == 2 * m * j - m);
      CHECK(t.mode_weight(SpecializationTable::Mode::phistar, 1, j).u == 2 * m * j - m);
    }
  }
  CHECK_THROWS_AS(SpecializationTable(1), InvalidParameter);
  CHECK_THROWS_AS(SpecializationTable(3).epsilon(5), InvalidParameter);
  CHECK_THROWS_AS(SpecializationTable(3).mode_weight(SpecializationTable::Mode::phi, 2, 1), InvalidParameter);
}

TEST_CASE("label shifts") {
  for (int m = 2; m <= 6; ++m) {
    CHECK(label_shift({m, BasicLambda0{}}) == HalfExp{0});
    CHECK(label_shift({m, LambdaMMinus1{}}) == HalfExp{0});
    CHECK(label_shift({m, GeneralS{m - 1}}) == HalfExp{0});
    for (int k = 0; k <= 3; ++k) {
      // F(e^{-Lambda_(-k(m-1))}) = F(e^{-Lambda_0}) q^{-km(m-1)/2}
      CHECK(label_shift({m, GeneralS{-k * (m - 1)}}) == HalfExp{-long{k} * m * (m - 1)});
      CHECK(label_shift({m, FamilyK{k}}) == HalfExp{long{k} * m * (m - 1)});
    }
    // Lambda_(m) = Lambda_m up to the scalar bookkeeping: F(e^{-Lambda_m}) = F(e^{-Lambda_0}) q^{-m/2}
    CHECK(label_shift({m, GeneralS{m}}) == HalfExp{-m});
  }
  CHECK_THROWS_AS(label_shift({4, GeneralS{1}}), InvalidParameter);
  CHECK_THROWS_AS(label_shift({1, BasicLambda0{}}), InvalidParameter);
}

TEST_CASE("h_s against a box enumeration with doubled cutoffs") {
  const std::int64_t order_u = 60;
  for (int m : {2, 3, 5}) {
    for (int s = -4; s <= 5; ++s) {
      const QSeries h = h_s(m, s, HalfExp{order_u});
      const QSeries small = h_box(m, s, order_u, 30);
      const QSeries large = h_box(m, s, order_u, 60);
      CHECK(agree(small, large));
      CHECK(agree(h, large));
      CHECK(h.order() == HalfExp{order_u});
    }
  }
}

TEST_CASE("h_s special values and symmetries") {
  CHECK(h_s(2, 0, HalfExp::from_q(7)) == gauss_sum(HalfExp::from_q(7)));
  CHECK(h_s(3, 0, HalfExp::from_q(200)) == h_s(3, 2, HalfExp::from_q(200)));
  const HalfExp order = HalfExp::from_q(80);
  const QSeries two_gauss = scale(gauss_sum(order), 2);
  for (int m = 2; m <= 5; ++m)
    for (int s = -5; s <= 6; ++s) {
      CHECK(agree(h_s(m, s, order), h_s(m, m - 1 - s, order)));
      const std::int64_t sm = long{s} * m;
      const QSeries lhs = u_shift(h_s(m, s, order - HalfExp{sm}), sm) + u_shift(h_s(m, -s, order + HalfExp{sm}), -sm);
      CHECK(lhs.order() == order);
      CHECK(agree(lhs, two_gauss));
    }
  CHECK_THROWS_AS(h_s(1, 0, order), InvalidParameter);
}

TEST_CASE("fs_char") {
  CHECK(fs_char(2, 0, HalfExp::from_q(5)) == q_poly({1, 2, 5, 10, 20}, 5));
  const HalfExp order = HalfExp::from_q(200);
  CHECK(agree(fs_char(3, 0, order), fs_char(3, 2, order)));
  const QSeries dp = dist_product(1, order);
  for (int m = 2; m <= 5; ++m) {
    const QSeries im = invert(euler_phi(m, order));
    CHECK(agree(fs_char(m, m - 1, order), dp * dp * im * im));
  }
}

TEST_CASE("fs_char agrees with the z-coefficients of the Fock product") {
  const HalfExp order = HalfExp::from_q(30);
  for (int m : {2, 3, 4}) {
    const auto f = fock_char_product(m, order, ZWindow{-4, 4});
    for (int s = -4; s <= 4; ++s) {
      const QSeries a = fs_char(m, s, order);
      const QSeries b = coeff_z(f, s);
      CHECK(agree(a, b));
      CHECK(std::min(a.order(), b.order()) >= HalfExp::from_q(20));
    }
  }
}

TEST_CASE("quasiparticle sums") {
  const std::int64_t order_u = 40;
  for (int m : {2, 3}) {
    for (int s : {-2, 0, 1, 3}) {
      const QSeries fast = quasiparticle_sum(m, s, HalfExp{order_u});
      const QSeries small = quasiparticle_box(m, s, order_u, 20);
      const QSeries large = quasiparticle_box(m, s, order_u, 40);
      CHECK(agree(small, large));
      CHECK(fast == large);
    }
  }
  const QSeries q21 = fs_quasiparticle(2, 1, HalfExp::from_q(6));
  CHECK(q21.min_exp() == HalfExp{0});
  CHECK(q21.coeff(HalfExp{0}) == 1);
  const QSeries q0 = quasiparticle_sum(3, 0, HalfExp{1});
  CHECK(q0 == QSeries::one(HalfExp{1}));

  const HalfExp order = HalfExp::from_q(60);
  for (int m = 2; m <= 4; ++m)
    for (int s = -3; s <= 4; ++s) {
      const QSeries a = fs_quasiparticle(m, s, order);
      CHECK(a.order() == order);
      CHECK(agree(a, fs_char(m, s, order)));
    }
}

TEST_CASE("opposite charges and charge symmetry") {
  const HalfExp order = HalfExp::from_q(120);
  for (int m = 2; m <= 5; ++m) {
    const QSeries rhs = lemma11a_rhs(m, order);
    CHECK(rhs.coeff(HalfExp{0}) == 2);
    for (int s = 0; s <= 5; ++s) {
      const std::int64_t sm = long{s} * m;
      const QSeries lhs = u_shift(fs_char(m, s, order - HalfExp{sm}), sm) + u_shift(fs_char(m, -s, order + HalfExp{sm}), -sm);
      CHECK(lhs.order() == order);
      CHECK(agree(lhs, rhs));
      CHECK(agree(fs_char(m, s, order), fs_char(m, m - 1 - s, order)));
    }
  }
  // m = 2 by direct products at doubled order
  const HalfExp big = HalfExp::from_q(40);
  const QSeries d = naive_product(1, 1, big);
  QSeries phi2 = naive_product(2, -1, big);
  QSeries direct = scale(d * d * invert(phi2 * phi2), 2);
  CHECK(agree(lemma11a_rhs(2, HalfExp::from_q(20)), direct));
}

TEST_CASE("closed form and recurrence") {
  const HalfExp order = HalfExp::from_q(100);
  for (int m = 2; m <= 4; ++m) {
    const QSeries dp = dist_product(1, order);
    const QSeries im = invert(euler_phi(m, order));
    CHECK(agree(prop12_closed(m, 0, order), dp * dp * im * im));
    for (int k = 0; k <= 3; ++k) {
      const QSeries closed = prop12_closed(m, k, order);
      CHECK(agree(closed, fs_char(m, (k + 1) * (m - 1), order)));
      CHECK(agree(closed, fs_char(m, -k * (m - 1), order)));
    }
    CHECK(agree(recurrence_step(m, 0, fs_char(m, 0, order), order), fs_char(m, m - 1, order)));
  }
  const QSeries r = recurrence_step(2, 1, fs_char(2, 1, HalfExp::from_q(30)), HalfExp::from_q(20));
  CHECK(agree(r, fs_char(2, 2, HalfExp::from_q(20))));
  CHECK(r.min_exp() == fs_char(2, 2, HalfExp::from_q(20)).min_exp());
  CHECK_THROWS_AS(recurrence_step(2, 0, fs_char(2, 0, HalfExp::from_q(5)), HalfExp::from_q(20)), InsufficientOrder);
  CHECK_THROWS_AS(prop12_closed(3, -1, order), InvalidParameter);
}

TEST_CASE("iterating the recurrence reproduces the closed form") {
  const HalfExp order = HalfExp::from_q(100);
  for (int m = 2; m <= 4; ++m) {
    // h holds the charge k(m-1) series, which by charge symmetry is also the charge -(k-1)(m-1) one.
    QSeries h = fs_char(m, 0, order);
    for (int k = 0; k <= 3; ++k) {
      h = recurrence_step(m, k * (m - 1), h, order);
      CHECK(h.order() == order);
      CHECK(agree(h, prop12_closed(m, k, order)));
    }
  }
}

TEST_CASE("lchar") {
  CHECK(lchar_basic(2, HalfExp::from_q(5)) == q_poly({1, 2, 4, 8, 14}, 5));
  const HalfExp order = HalfExp::from_q(150);
  for (int m = 2; m <= 6; ++m) {
    const QSeries basic = lchar_basic(m, order);
    const QSeries phim = euler_phi(m, order);
    CHECK(agree(basic, fs_char(m, 0, order) * phim));
    CHECK(agree(basic, fs_char(m, m - 1, order) * phim));
    CHECK(agree(lchar_family(m, 0, order), basic));
    CHECK(basic.coeff(HalfExp{0}) == 1);
    CHECK(basic.coeff(HalfExp::from_q(1)) == 2);
    for (int k = 1; k <= 3; ++k) {
      CHECK(agree(lchar_family(m, k, order), lchar_family(m, -k, order)));
      const QSeries left = lchar_family(m, k, order) * invert(phim);
      const QSeries right = u_shift(prop12_closed(m, k, order), -long{k} * m * (m - 1));
      CHECK(agree(left, right));
    }
  }
}

TEST_CASE("characters through the Fock sectors match the closed forms") {
  const HalfExp order = HalfExp::from_q(80);
  for (int m = 2; m <= 4; ++m) {
    CHECK(agree(lchar_via_fock({m, BasicLambda0{}}, order), lchar({m, BasicLambda0{}}, order)));
    CHECK(agree(lchar_via_fock({m, LambdaMMinus1{}}, order), lchar({m, LambdaMMinus1{}}, order)));
    for (int k = -3; k <= 3; ++k) {
      const HighestWeightLabel label{m, FamilyK{k}};
      const QSeries via = lchar_via_fock(label, order);
      CHECK(via.order() == order);
      CHECK(agree(via, lchar(label, order)));
    }
    for (int s : {0, -(m - 1), -2 * (m - 1), m - 1, 2 * (m - 1), 3 * (m - 1)}) {
      const HighestWeightLabel label{m, GeneralS{s}};
      CHECK(agree(lchar_via_fock(label, order), lchar(label, order)));
    }
  }
  CHECK_THROWS_AS(lchar({3, GeneralS{3}}, order), InvalidParameter);
}

TEST_CASE("charge zero quasiparticle sum against the product") {
  const HalfExp order = HalfExp::from_q(100);
  for (int m = 2; m <= 6; ++m) {
    auto [lhs, rhs] = cor22_sides(m, order);
    CHECK(lhs.coeff(HalfExp{0}) == 1);
    CHECK(rhs.coeff(HalfExp{0}) == 1);
    CHECK(agree(lhs, rhs));
  }
  auto [l, r] = cor22_sides(2, HalfExp{30});
  CHECK(agree(r, quasiparticle_box(2, 0, 30, 30)));
}

TEST_CASE("asymptotic prediction") {
  const double expect = std::numbers::pi * 10.0 + 0.5 * std::log(3.0) - std::log(800.0 * std::sqrt(3.0));
  CHECK(asympt_log_predicted(2, 100) == doctest::Approx(expect).epsilon(1e-14));
  double prev = -1e300;
  for (std::int64_t n = 1; n <= 2000; n += 7) {
    const double v = asympt_log_predicted(3, n);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(std::isinf(asympt_predicted(2, 100000)));
  CHECK(asympt_predicted(2, 10) == doctest::Approx(std::exp(asympt_log_predicted(2, 10))));
  CHECK_THROWS_AS(asympt_log_predicted(2, 0), InvalidParameter);

  Coefficient big;
  mpz_ui_pow_ui(big.get_mpz_t(), 10, 400);
  CHECK(log_of(big) == doctest::Approx(400 * std::log(10.0)).epsilon(1e-12));
}

TEST_CASE("asymptotic report") {
  for (int m : {2, 3, 7}) {
    const auto rows = asympt_report(m, 50);
    REQUIRE(rows.size() == 50);
    CHECK(rows[0].a_n == 1);
    CHECK_FALSE(rows[0].log_ratio.has_value());
    CHECK(rows[1].a_n == 2);
    CHECK(rows[1].log_ratio.has_value());
  }
  const auto rows = asympt_report(2, 401);
  CHECK(std::abs(*rows[400].log_ratio - 1.0) < std::abs(*rows[40].log_ratio - 1.0));
  CHECK_THROWS_AS(asympt_report(2, 100, 50), InsufficientOrder);
}
