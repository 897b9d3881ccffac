#pragma once

// Laurent series in the charge variable z whose z-coefficients are QSeries,
// and the classical bivariate products built from them.

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qchar/qseries.hpp"

namespace qchar {

/// Inclusive range of z-degrees.
struct ZWindow {
  int lo = 0;
  int hi = 0;

  bool contains(int d) const { return lo <= d && d <= hi; }
  int size() const { return hi - lo + 1; }
  ZWindow widened(int by) const { return ZWindow{lo - by, hi + by}; }
  friend bool operator==(ZWindow, ZWindow) = default;
};

/// Lower bound on the u-exponents found at some set of z-degrees. Two
/// sentinels: kNoTerms (the degrees are known to vanish) and kUnknown (nothing
/// is claimed).
using ExpBound = std::int64_t;
inline constexpr ExpBound kNoTerms = std::int64_t{1} << 60;
inline constexpr ExpBound kUnknown = -(std::int64_t{1} << 60);

/// Charge-graded series. Rows for degrees in window() are exact below order();
/// degrees outside the window are summarized only by the tail bounds.
class ChargeSeries {
 public:
  ChargeSeries(ZWindow window, HalfExp order, std::vector<QSeries> rows, ExpBound tail_lo = kUnknown,
               ExpBound tail_hi = kUnknown);

  /// The constant 1 on `window`, exact outside it.
  static ChargeSeries one(ZWindow window, HalfExp order);
  /// A Laurent polynomial in z; degrees outside `window` are zero.
  static ChargeSeries polynomial(ZWindow window, HalfExp order, std::vector<QSeries> rows);

  ZWindow window() const { return window_; }
  HalfExp order() const { return order_; }
  const QSeries& row(int d) const;
  const std::vector<QSeries>& rows() const { return rows_; }
  ExpBound tail_lo() const { return tail_lo_; }
  ExpBound tail_hi() const { return tail_hi_; }

  /// Lower bound on exponents at degree d (row minimum inside, tail outside).
  ExpBound bound_at(int d) const;
  /// Lower bound over every degree at or above `d`.
  ExpBound bound_from(int d) const;
  /// Lower bound over every degree at or below `d`.
  ExpBound bound_upto(int d) const;
  ExpBound floor() const;

  /// Restriction to a sub-window; dropped rows fold into the tails.
  ChargeSeries restricted(ZWindow sub) const;
  ChargeSeries truncated(HalfExp order) const;

 private:
  ZWindow window_;
  HalfExp order_;
  std::vector<QSeries> rows_;
  ExpBound tail_lo_;
  ExpBound tail_hi_;
};

/// Product claimed on `window`. Throws WindowUnderflow when a pair involving
/// a degree outside an input window could reach below the result order.
ChargeSeries cs_mul(const ChargeSeries& a, const ChargeSeries& b, ZWindow window);

/// The z^s coefficient; throws OutOfWindow.
QSeries coeff_z(const ChargeSeries& cs, int s);

/// (1 + sign * z^{z_deg} u^{u_exp}), or its reciprocal when `inverse`.
struct LinearFactor {
  int z_deg = 1;
  int sign = 1;
  std::int64_t u_exp = 0;
  bool inverse = false;
};

/// Factors contributed at index k = 1, 2, ...; exponents must be nondecreasing in k.
using FactorFamily = std::function<std::vector<LinearFactor>(int k)>;

/// prod_{k>=1} of the family, exact on `target` below `order`.
ChargeSeries infinite_product(const FactorFamily& family, ZWindow target, HalfExp order);

/// prod_n (1 + z q^{n-1/2})(1 + z^{-1} q^{n-1/2})  and  phi(q)^{-1} sum_j z^j q^{j^2/2}.
std::pair<ChargeSeries, ChargeSeries> jacobi_triple_sides(HalfExp order, ZWindow window);

/// prod_k (1 + z q^{k-1/2})^{-1}(1 + z^{-1} q^{k-1/2})^{-1}  and
/// phi(q)^{-2} (sum_{m,k>=0} - sum_{m,k<0}) (-1)^{m+k} z^k q^{m(m+1)/2 + (m+1/2)k}.
std::pair<ChargeSeries, ChargeSeries> kp_identity_sides(HalfExp order, ZWindow window);

/// Theta-type numerator of the row k of the second identity (before phi(q)^{-2}).
QSeries kp_theta_row(int k, HalfExp order);

/// The specialized Fock character
/// prod_k (1 + z q^{k-m/2})(1 + z^{-1} q^{k-1+m/2}) / ((1 - z q^{m(k-1/2)})(1 - z^{-1} q^{m(k-1/2)})).
ChargeSeries fock_char_product(int m, HalfExp order, ZWindow window);

/// First (degree, exponent) where two charge series differ on their common window.
std::optional<std::pair<int, HalfExp>> first_difference(const ChargeSeries& a, const ChargeSeries& b);

nlohmann::json to_json(const ChargeSeries& cs);
ChargeSeries charge_series_from_json(const nlohmann::json& j);

}  // namespace qchar
