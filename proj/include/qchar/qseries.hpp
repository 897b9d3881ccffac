#pragma once

// Truncated Laurent series in u = q^{1/2} with arbitrary-precision integer
// coefficients, plus the classical product and theta building blocks.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace qchar {

using Coefficient = mpz_class;

/// An exponent on the lattice (1/2)Z, stored as an integer number of u-units.
struct HalfExp {
  std::int64_t u = 0;

  static constexpr HalfExp from_u(std::int64_t v) { return HalfExp{v}; }
  static constexpr HalfExp from_q(std::int64_t n) { return HalfExp{2 * n}; }

  /// Renders the q-exponent u/2, e.g. "3", "-1", "1/2", "-3/2".
  std::string to_string() const;

  friend constexpr auto operator<=>(HalfExp, HalfExp) = default;
  friend constexpr HalfExp operator+(HalfExp a, HalfExp b) { return HalfExp{a.u + b.u}; }
  friend constexpr HalfExp operator-(HalfExp a, HalfExp b) { return HalfExp{a.u - b.u}; }
  constexpr HalfExp operator-() const { return HalfExp{-u}; }
};

/// A series sum_{e in [min_exp, order)} c_e u^e whose every coefficient below
/// `order` is exact. The zero series has min_exp == order and no stored
/// coefficients; otherwise coeffs().front() != 0.
class QSeries {
 public:
  QSeries() = default;

  static QSeries zero(HalfExp order);
  static QSeries one(HalfExp order) { return monomial(1, HalfExp{0}, order); }
  static QSeries monomial(const Coefficient& c, HalfExp exp, HalfExp order);
  /// Coefficients start at `min_exp`; entries at or beyond `order` are dropped,
  /// missing entries below `order` are zero.
  static QSeries from_coeffs(HalfExp min_exp, HalfExp order, std::vector<Coefficient> coeffs);

  HalfExp min_exp() const { return HalfExp{min_u_}; }
  HalfExp order() const { return HalfExp{order_u_}; }
  const std::vector<Coefficient>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  /// Coefficient of u^e. Throws std::out_of_range when e >= order().
  Coefficient coeff(HalfExp e) const;
  /// Same without the order check; exponents outside storage read as 0.
  const Coefficient& coeff_unchecked(std::int64_t u) const;

  QSeries truncated(HalfExp order) const;
  /// Multiplication by u^{by}: shifts min_exp and order alike.
  QSeries shifted(HalfExp by) const;
  QSeries operator-() const;

  friend bool operator==(const QSeries&, const QSeries&) = default;

 private:
  QSeries(std::int64_t min_u, std::int64_t order_u, std::vector<Coefficient> coeffs);
  void canonicalize();

  std::int64_t min_u_ = 0;
  std::int64_t order_u_ = 0;
  std::vector<Coefficient> coeffs_;
};

QSeries add(const QSeries& a, const QSeries& b);
QSeries sub(const QSeries& a, const QSeries& b);
QSeries mul(const QSeries& a, const QSeries& b);
/// mul() with both inputs pre-truncated so nothing at or above `order` is computed.
QSeries mul_truncated(const QSeries& a, const QSeries& b, HalfExp order);
QSeries scale(const QSeries& a, const Coefficient& c);
/// Throws ZeroSeries or NonUnitLeadingCoefficient.
QSeries invert(const QSeries& a);
/// Integer power; negative n goes through invert().
QSeries power(const QSeries& a, int n);

inline QSeries operator+(const QSeries& a, const QSeries& b) { return add(a, b); }
inline QSeries operator-(const QSeries& a, const QSeries& b) { return sub(a, b); }
inline QSeries operator*(const QSeries& a, const QSeries& b) { return mul(a, b); }

/// Lowest exponent below min(a.order, b.order) where a and b differ.
std::optional<HalfExp> first_difference(const QSeries& a, const QSeries& b);

/// phi(q^j) = prod_{i>=1} (1 - q^{ji}).
QSeries euler_phi(int j, HalfExp order);
/// (q^j)_n = prod_{i=1..n} (1 - q^{ji}).
QSeries pochhammer(int j, int n, HalfExp order);
/// prod_{i>=1} (1 + q^{ji}).
QSeries dist_product(int j, HalfExp order);
/// sum_{p>=0} q^{p(p+1)/2}.
QSeries gauss_sum(HalfExp order);

/// One-line rendering such as "1 + 2q - q^{3/2} + O(q^{5})".
std::string to_string(const QSeries& s);
/// One "c · q^{e}" line per nonzero coefficient, then "O(q^{order})".
std::string to_text_lines(const QSeries& s);

nlohmann::json to_json(const QSeries& s);
QSeries qseries_from_json(const nlohmann::json& j);

}  // namespace qchar
