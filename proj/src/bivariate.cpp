#include "qchar/bivariate.hpp"

#include <algorithm>
#include <string>

#include "qchar/errors.hpp"

namespace qchar {

namespace {

ExpBound bound_add(ExpBound a, ExpBound b) {
  if (a >= kNoTerms || b >= kNoTerms) return kNoTerms;
  if (a <= kUnknown || b <= kUnknown) return kUnknown;
  return a + b;
}

ExpBound row_bound(const QSeries& r) { return r.min_exp().u; }

// Minimum of row bounds over degrees [from, to] that lie in the window.
ExpBound rows_min(const ChargeSeries& cs, int from, int to) {
  ExpBound m = kNoTerms;
  const ZWindow w = cs.window();
  for (int d = std::max(from, w.lo); d <= std::min(to, w.hi); ++d) m = std::min(m, row_bound(cs.row(d)));
  return m;
}

// acc holds exponents [lowest, order); adds ra*rb into it.
void accumulate_product(std::vector<Coefficient>& acc, std::int64_t lowest, std::int64_t order, const QSeries& ra,
                        const QSeries& rb) {
  if (ra.is_zero() || rb.is_zero()) return;
  const auto& ac = ra.coeffs();
  const auto& bc = rb.coeffs();
  std::vector<std::size_t> bnz;
  for (std::size_t j = 0; j < bc.size(); ++j) {
    if (sgn(bc[j]) != 0) bnz.push_back(j);
  }
  const std::int64_t base = ra.min_exp().u + rb.min_exp().u;
  for (std::size_t i = 0; i < ac.size(); ++i) {
    if (sgn(ac[i]) == 0) continue;
    const std::int64_t ei = base + static_cast<std::int64_t>(i);
    if (ei >= order) break;
    for (std::size_t j : bnz) {
      const std::int64_t e = ei + static_cast<std::int64_t>(j);
      if (e >= order) break;
      mpz_addmul(acc[static_cast<std::size_t>(e - lowest)].get_mpz_t(), ac[i].get_mpz_t(), bc[j].get_mpz_t());
    }
  }
}

std::string window_text(ZWindow w) { return "[" + std::to_string(w.lo) + "," + std::to_string(w.hi) + "]"; }

// Expansion of one linear factor on its natural window. Geometric factors are
// expanded while n*u_exp < reach; the far tail records the first omitted term.
ChargeSeries factor_series(const LinearFactor& f, HalfExp order, std::int64_t reach) {
  if (f.z_deg != 1 && f.z_deg != -1) throw InvalidParameter("linear factor z-degree must be +1 or -1");
  if (!f.inverse) {
    std::vector<QSeries> rows;
    rows.push_back(QSeries::one(order));
    rows.push_back(QSeries::monomial(f.sign, HalfExp{f.u_exp}, order));
    if (f.z_deg < 0) std::swap(rows[0], rows[1]);
    return ChargeSeries::polynomial(f.z_deg > 0 ? ZWindow{0, 1} : ZWindow{-1, 0}, order, std::move(rows));
  }
  if (f.u_exp <= 0) throw InvalidParameter("inverse factor needs a positive u-exponent for a formal expansion");
  std::int64_t n_max = 0;
  while ((n_max + 1) * f.u_exp < reach) ++n_max;
  std::vector<QSeries> rows;
  const int ratio_sign = -f.sign;
  for (std::int64_t n = 0; n <= n_max; ++n) {
    const int c = (n % 2 == 0 || ratio_sign > 0) ? 1 : -1;
    rows.push_back(QSeries::monomial(c, HalfExp{n * f.u_exp}, order));
  }
  const ExpBound far = (n_max + 1) * f.u_exp;
  const int span = static_cast<int>(n_max);
  if (f.z_deg > 0) return ChargeSeries(ZWindow{0, span}, order, std::move(rows), kNoTerms, far);
  std::reverse(rows.begin(), rows.end());
  return ChargeSeries(ZWindow{-span, 0}, order, std::move(rows), far, kNoTerms);
}

}  // namespace

ChargeSeries::ChargeSeries(ZWindow window, HalfExp order, std::vector<QSeries> rows, ExpBound tail_lo,
                           ExpBound tail_hi)
    : window_(window), order_(order), rows_(std::move(rows)), tail_lo_(tail_lo), tail_hi_(tail_hi) {
  if (window_.lo > window_.hi) throw InvalidParameter("empty z-window " + window_text(window_));
  if (static_cast<int>(rows_.size()) != window_.size()) {
    throw InvalidParameter("row count does not match z-window " + window_text(window_));
  }
  for (auto& r : rows_) {
    if (r.order() < order_) throw InvalidParameter("row order below the shared order");
    r = r.truncated(order_);
  }
}

ChargeSeries ChargeSeries::one(ZWindow window, HalfExp order) {
  std::vector<QSeries> rows(static_cast<std::size_t>(window.size()), QSeries::zero(order));
  if (!window.contains(0)) throw InvalidParameter("window must contain degree 0");
  rows[static_cast<std::size_t>(-window.lo)] = QSeries::one(order);
  return ChargeSeries(window, order, std::move(rows), kNoTerms, kNoTerms);
}

ChargeSeries ChargeSeries::polynomial(ZWindow window, HalfExp order, std::vector<QSeries> rows) {
  return ChargeSeries(window, order, std::move(rows), kNoTerms, kNoTerms);
}

const QSeries& ChargeSeries::row(int d) const {
  if (!window_.contains(d)) {
    throw OutOfWindow("z-degree " + std::to_string(d) + " outside window " + window_text(window_));
  }
  return rows_[static_cast<std::size_t>(d - window_.lo)];
}

ExpBound ChargeSeries::bound_at(int d) const {
  if (d < window_.lo) return tail_lo_;
  if (d > window_.hi) return tail_hi_;
  return row_bound(row(d));
}

ExpBound ChargeSeries::bound_from(int d) const {
  ExpBound m = std::min(tail_hi_, rows_min(*this, d, window_.hi));
  if (d < window_.lo) m = std::min(m, tail_lo_);
  return m;
}

ExpBound ChargeSeries::bound_upto(int d) const {
  ExpBound m = std::min(tail_lo_, rows_min(*this, window_.lo, d));
  if (d > window_.hi) m = std::min(m, tail_hi_);
  return m;
}

ExpBound ChargeSeries::floor() const {
  return std::min({tail_lo_, tail_hi_, rows_min(*this, window_.lo, window_.hi)});
}

ChargeSeries ChargeSeries::restricted(ZWindow sub) const {
  if (sub.lo < window_.lo || sub.hi > window_.hi) {
    throw OutOfWindow("window " + window_text(sub) + " not inside " + window_text(window_));
  }
  std::vector<QSeries> rows(rows_.begin() + (sub.lo - window_.lo), rows_.begin() + (sub.hi - window_.lo + 1));
  return ChargeSeries(sub, order_, std::move(rows), std::min(tail_lo_, rows_min(*this, window_.lo, sub.lo - 1)),
                      std::min(tail_hi_, rows_min(*this, sub.hi + 1, window_.hi)));
}

ChargeSeries ChargeSeries::truncated(HalfExp order) const {
  if (order >= order_) return *this;
  return ChargeSeries(window_, order, rows_, tail_lo_, tail_hi_);
}

ChargeSeries cs_mul(const ChargeSeries& a, const ChargeSeries& b, ZWindow window) {
  const ZWindow wa = a.window();
  const ZWindow wb = b.window();

  std::int64_t shared = kNoTerms;
  for (int d = window.lo; d <= window.hi; ++d) {
    for (int d1 = std::max(wa.lo, d - wb.hi); d1 <= std::min(wa.hi, d - wb.lo); ++d1) {
      const QSeries& ra = a.row(d1);
      const QSeries& rb = b.row(d - d1);
      shared = std::min(shared, std::min(ra.min_exp().u + rb.order().u, rb.min_exp().u + ra.order().u));
    }
  }
  if (shared >= kNoTerms) shared = std::min(a.order().u, b.order().u);
  const HalfExp order{shared};

  std::vector<QSeries> rows;
  rows.reserve(static_cast<std::size_t>(window.size()));
  for (int d = window.lo; d <= window.hi; ++d) {
    const int lo1 = std::max(wa.lo, d - wb.hi);
    const int hi1 = std::min(wa.hi, d - wb.lo);
    std::int64_t lowest = shared;
    for (int d1 = lo1; d1 <= hi1; ++d1) {
      const QSeries& ra = a.row(d1);
      const QSeries& rb = b.row(d - d1);
      if (!ra.is_zero() && !rb.is_zero()) lowest = std::min(lowest, ra.min_exp().u + rb.min_exp().u);
    }
    std::vector<Coefficient> acc(static_cast<std::size_t>(shared - lowest));
    for (int d1 = lo1; d1 <= hi1; ++d1) accumulate_product(acc, lowest, shared, a.row(d1), b.row(d - d1));
    rows.push_back(QSeries::from_coeffs(HalfExp{lowest}, order, std::move(acc)));

    // Pairs with a factor from outside an input window.
    ExpBound outside = std::min(bound_add(a.tail_lo(), b.bound_from(d - wa.lo + 1)),
                                bound_add(a.tail_hi(), b.bound_upto(d - wa.hi - 1)));
    outside = std::min(outside, bound_add(rows_min(a, wa.lo, d - wb.hi - 1), b.tail_hi()));
    outside = std::min(outside, bound_add(rows_min(a, d - wb.lo + 1, wa.hi), b.tail_lo()));
    if (outside < shared) {
      throw WindowUnderflow("z-degree " + std::to_string(d) + " needs input degrees outside " + window_text(wa) +
                            " x " + window_text(wb) + " below u^" + std::to_string(shared));
    }
  }

  ExpBound tail_hi = std::min(bound_add(a.tail_lo(), b.bound_from(window.hi + 2 - wa.lo)),
                              bound_add(a.tail_hi(), b.floor()));
  ExpBound tail_lo = std::min(bound_add(a.tail_hi(), b.bound_upto(window.lo - 2 - wa.hi)),
                              bound_add(a.tail_lo(), b.floor()));
  for (int d1 = wa.lo; d1 <= wa.hi; ++d1) {
    const ExpBound r = row_bound(a.row(d1));
    tail_hi = std::min(tail_hi, bound_add(r, b.bound_from(window.hi + 1 - d1)));
    tail_lo = std::min(tail_lo, bound_add(r, b.bound_upto(window.lo - 1 - d1)));
  }
  return ChargeSeries(window, order, std::move(rows), tail_lo, tail_hi);
}

QSeries coeff_z(const ChargeSeries& cs, int s) { return cs.row(s); }

ChargeSeries infinite_product(const FactorFamily& family, ZWindow target, HalfExp order) {
  if (target.lo > target.hi) throw InvalidParameter("empty z-window " + window_text(target));

  // Factors with negative exponents can pull the product below the requested
  // order; raise the working order by their total.
  std::int64_t slack = 0;
  for (int k = 1;; ++k) {
    bool negative = false;
    for (const auto& f : family(k)) {
      if (f.u_exp < 0) {
        slack -= f.u_exp;
        negative = true;
      }
    }
    if (!negative) break;
  }
  const HalfExp work = order + HalfExp{slack};
  const std::int64_t reach = work.u + slack;

  for (int margin = 2; margin <= (1 << 13); margin *= 2) {
    const ZWindow w{std::min(target.lo, 0) - margin, std::max(target.hi, 0) + margin};
    try {
      ChargeSeries p = ChargeSeries::one(w, work);
      for (int k = 1;; ++k) {
        bool any = false;
        for (const auto& f : family(k)) {
          if (f.u_exp >= work.u) continue;
          any = true;
          p = cs_mul(p, factor_series(f, work, reach), w);
        }
        if (!any) break;
      }
      if (p.order() < order) {
        throw InsufficientOrder("product reached only u^" + std::to_string(p.order().u) + " of u^" +
                                std::to_string(order.u));
      }
      return p.restricted(target).truncated(order);
    } catch (const WindowUnderflow&) {
      // widen and retry
    }
  }
  throw WindowUnderflow("no working window up to margin 8192 supports " + window_text(target));
}

std::pair<ChargeSeries, ChargeSeries> jacobi_triple_sides(HalfExp order, ZWindow window) {
  const FactorFamily family = [](int k) {
    const std::int64_t e = 2 * k - 1;
    return std::vector<LinearFactor>{{1, 1, e, false}, {-1, 1, e, false}};
  };
  ChargeSeries lhs = infinite_product(family, window, order);

  const QSeries inv_phi = invert(euler_phi(1, order));
  std::vector<QSeries> rows;
  for (int d = window.lo; d <= window.hi; ++d) {
    const std::int64_t e = static_cast<std::int64_t>(d) * d;
    rows.push_back(inv_phi.shifted(HalfExp{e}).truncated(order));
  }
  const std::int64_t lo_edge = static_cast<std::int64_t>(window.lo - 1) * (window.lo - 1);
  const std::int64_t hi_edge = static_cast<std::int64_t>(window.hi + 1) * (window.hi + 1);
  // |d| grows away from the window only when the window straddles 0
  const ExpBound tail_lo = window.lo <= 0 ? lo_edge : 0;
  const ExpBound tail_hi = window.hi >= 0 ? hi_edge : 0;
  ChargeSeries rhs(window, order, std::move(rows), tail_lo, tail_hi);
  return {std::move(lhs), std::move(rhs)};
}

QSeries kp_theta_row(int k, HalfExp order) {
  // k >= 0 takes m >= 0 with sign +; k < 0 takes m < 0 with sign -.
  std::vector<Coefficient> c(static_cast<std::size_t>(std::max<std::int64_t>(order.u, 0)));
  const std::int64_t kk = k;
  auto exponent = [kk](std::int64_t m) { return m * (m + 1) + (2 * m + 1) * kk; };
  auto sign = [kk](std::int64_t m) { return ((m + kk) % 2 == 0) ? 1 : -1; };
  if (k >= 0) {
    for (std::int64_t m = 0; exponent(m) < order.u; ++m) c[static_cast<std::size_t>(exponent(m))] += sign(m);
  } else {
    for (std::int64_t m = -1; exponent(m) < order.u; --m) c[static_cast<std::size_t>(exponent(m))] -= sign(m);
  }
  return QSeries::from_coeffs(HalfExp{0}, order, std::move(c));
}

std::pair<ChargeSeries, ChargeSeries> kp_identity_sides(HalfExp order, ZWindow window) {
  const FactorFamily family = [](int k) {
    const std::int64_t e = 2 * k - 1;
    return std::vector<LinearFactor>{{1, 1, e, true}, {-1, 1, e, true}};
  };
  ChargeSeries lhs = infinite_product(family, window, order);

  const QSeries inv_phi = invert(euler_phi(1, order));
  const QSeries inv_phi2 = inv_phi * inv_phi;
  std::vector<QSeries> rows;
  for (int k = window.lo; k <= window.hi; ++k) rows.push_back(mul_truncated(kp_theta_row(k, order), inv_phi2, order));
  // Degree k has lowest exponent |k| (u-units) for k >= 1 and k <= -1.
  const ExpBound tail_lo = window.lo <= 0 ? -(window.lo - 1) : 0;
  const ExpBound tail_hi = window.hi >= 0 ? window.hi + 1 : 0;
  ChargeSeries rhs(window, order, std::move(rows), tail_lo, tail_hi);
  return {std::move(lhs), std::move(rhs)};
}

ChargeSeries fock_char_product(int m, HalfExp order, ZWindow window) {
  if (m < 2) throw InvalidParameter("fock_char_product: m must be >= 2, got " + std::to_string(m));
  const FactorFamily family = [m](int k) {
    const std::int64_t kk = k;
    const std::int64_t boson = static_cast<std::int64_t>(m) * (2 * kk - 1);
    return std::vector<LinearFactor>{
        {1, 1, 2 * kk - m, false},
        {-1, 1, 2 * kk - 2 + m, false},
        {1, -1, boson, true},
        {-1, -1, boson, true},
    };
  };
  return infinite_product(family, window, order);
}

std::optional<std::pair<int, HalfExp>> first_difference(const ChargeSeries& a, const ChargeSeries& b) {
  const int lo = std::max(a.window().lo, b.window().lo);
  const int hi = std::min(a.window().hi, b.window().hi);
  for (int d = lo; d <= hi; ++d) {
    if (auto e = first_difference(a.row(d), b.row(d))) return std::make_pair(d, *e);
  }
  return std::nullopt;
}

nlohmann::json to_json(const ChargeSeries& cs) {
  nlohmann::json rows = nlohmann::json::object();
  for (int d = cs.window().lo; d <= cs.window().hi; ++d) rows[std::to_string(d)] = to_json(cs.row(d));
  return nlohmann::json{
      {"zmin", cs.window().lo}, {"zmax", cs.window().hi}, {"order_u", cs.order().u}, {"rows", rows}};
}

ChargeSeries charge_series_from_json(const nlohmann::json& j) {
  try {
    const ZWindow w{j.at("zmin").get<int>(), j.at("zmax").get<int>()};
    const HalfExp order{j.at("order_u").get<std::int64_t>()};
    if (w.lo > w.hi) throw InvalidParameter("ChargeSeries JSON: zmin > zmax");
    std::vector<QSeries> rows;
    for (int d = w.lo; d <= w.hi; ++d) rows.push_back(qseries_from_json(j.at("rows").at(std::to_string(d))));
    return ChargeSeries(w, order, std::move(rows));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("ChargeSeries JSON: ") + e.what());
  }
}

}  // namespace qchar
