#include "qchar/qseries.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "qchar/errors.hpp"

namespace qchar {

namespace {

const Coefficient& zero_coefficient() {
  static const Coefficient z{0};
  return z;
}

std::vector<std::size_t> nonzero_indices(const std::vector<Coefficient>& c) {
  std::vector<std::size_t> nz;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (sgn(c[i]) != 0) nz.push_back(i);
  }
  return nz;
}

void require_positive(int j, const char* what) {
  if (j < 1) throw InvalidParameter(std::string(what) + ": j must be >= 1, got " + std::to_string(j));
}

// Multiplies the dense buffer (exponents 0..size-1) by (1 + sign*u^step) in place.
void times_binomial(std::vector<Coefficient>& c, std::int64_t step, int sign) {
  const auto n = static_cast<std::int64_t>(c.size());
  for (std::int64_t e = n - 1; e >= step; --e) {
    const Coefficient& src = c[static_cast<std::size_t>(e - step)];
    if (sgn(src) == 0) continue;
    if (sign > 0) {
      c[static_cast<std::size_t>(e)] += src;
    } else {
      c[static_cast<std::size_t>(e)] -= src;
    }
  }
}

std::string render_monomial(HalfExp e) {
  if (e.u == 0) return "";
  if (e.u == 2) return "q";
  return "q^{" + e.to_string() + "}";
}

}  // namespace

std::string HalfExp::to_string() const {
  if (u % 2 == 0) return std::to_string(u / 2);
  return std::to_string(u) + "/2";
}

QSeries::QSeries(std::int64_t min_u, std::int64_t order_u, std::vector<Coefficient> coeffs)
    : min_u_(min_u), order_u_(order_u), coeffs_(std::move(coeffs)) {
  canonicalize();
}

void QSeries::canonicalize() {
  if (min_u_ >= order_u_) {
    coeffs_.clear();
    min_u_ = order_u_;
    return;
  }
  const auto len = static_cast<std::size_t>(order_u_ - min_u_);
  if (coeffs_.size() > len) coeffs_.resize(len);
  std::size_t lead = 0;
  while (lead < coeffs_.size() && sgn(coeffs_[lead]) == 0) ++lead;
  if (lead == coeffs_.size()) {
    coeffs_.clear();
    min_u_ = order_u_;
    return;
  }
  if (lead > 0) {
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
    min_u_ += static_cast<std::int64_t>(lead);
  }
  coeffs_.resize(static_cast<std::size_t>(order_u_ - min_u_));
}

QSeries QSeries::zero(HalfExp order) { return QSeries(order.u, order.u, {}); }

QSeries QSeries::monomial(const Coefficient& c, HalfExp exp, HalfExp order) {
  return QSeries(exp.u, order.u, {c});
}

QSeries QSeries::from_coeffs(HalfExp min_exp, HalfExp order, std::vector<Coefficient> coeffs) {
  return QSeries(min_exp.u, order.u, std::move(coeffs));
}

Coefficient QSeries::coeff(HalfExp e) const {
  if (e.u >= order_u_) {
    throw std::out_of_range("coefficient of u^" + std::to_string(e.u) + " lies beyond order u^" +
                            std::to_string(order_u_));
  }
  return coeff_unchecked(e.u);
}

const Coefficient& QSeries::coeff_unchecked(std::int64_t u) const {
  if (u < min_u_ || u >= min_u_ + static_cast<std::int64_t>(coeffs_.size())) return zero_coefficient();
  return coeffs_[static_cast<std::size_t>(u - min_u_)];
}

QSeries QSeries::truncated(HalfExp order) const {
  if (order.u >= order_u_) return *this;
  return QSeries(min_u_, order.u, coeffs_);
}

QSeries QSeries::shifted(HalfExp by) const {
  QSeries r = *this;
  r.min_u_ += by.u;
  r.order_u_ += by.u;
  return r;
}

QSeries QSeries::operator-() const {
  QSeries r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

QSeries add(const QSeries& a, const QSeries& b) {
  const HalfExp order = std::min(a.order(), b.order());
  const std::int64_t lo = std::min(a.min_exp().u, b.min_exp().u);
  if (lo >= order.u) return QSeries::zero(order);
  std::vector<Coefficient> c(static_cast<std::size_t>(order.u - lo));
  for (std::int64_t e = lo; e < order.u; ++e) {
    c[static_cast<std::size_t>(e - lo)] = a.coeff_unchecked(e) + b.coeff_unchecked(e);
  }
  return QSeries::from_coeffs(HalfExp{lo}, order, std::move(c));
}

QSeries sub(const QSeries& a, const QSeries& b) { return add(a, -b); }

QSeries mul(const QSeries& a, const QSeries& b) {
  const HalfExp order = std::min(a.min_exp() + b.order(), b.min_exp() + a.order());
  if (a.is_zero() || b.is_zero()) return QSeries::zero(order);
  const HalfExp lo = a.min_exp() + b.min_exp();
  if (lo >= order) return QSeries::zero(order);
  const auto len = static_cast<std::size_t>((order - lo).u);
  std::vector<Coefficient> c(len);
  const auto bnz = nonzero_indices(b.coeffs());
  const auto& ac = a.coeffs();
  const auto& bc = b.coeffs();
  for (std::size_t i = 0; i < ac.size() && i < len; ++i) {
    if (sgn(ac[i]) == 0) continue;
    for (std::size_t j : bnz) {
      if (i + j >= len) break;
      mpz_addmul(c[i + j].get_mpz_t(), ac[i].get_mpz_t(), bc[j].get_mpz_t());
    }
  }
  return QSeries::from_coeffs(lo, order, std::move(c));
}

QSeries mul_truncated(const QSeries& a, const QSeries& b, HalfExp order) {
  const HalfExp contract = std::min({order, a.min_exp() + b.order(), b.min_exp() + a.order()});
  if (a.min_exp() + b.min_exp() >= contract) return QSeries::zero(contract);
  const QSeries at = a.truncated(order - b.min_exp());
  const QSeries bt = b.truncated(order - a.min_exp());
  return mul(at, bt).truncated(order);
}

QSeries scale(const QSeries& a, const Coefficient& c) {
  std::vector<Coefficient> out = a.coeffs();
  for (auto& x : out) x *= c;
  return QSeries::from_coeffs(a.min_exp(), a.order(), std::move(out));
}

QSeries invert(const QSeries& a) {
  if (a.is_zero()) throw ZeroSeries("cannot invert a series that vanishes below its order");
  const Coefficient& lead = a.coeffs().front();
  if (lead != 1 && lead != -1) {
    throw NonUnitLeadingCoefficient("leading coefficient " + lead.get_str() + " is not a unit");
  }
  const auto len = a.coeffs().size();
  const auto& ac = a.coeffs();
  std::vector<std::size_t> nz;
  for (std::size_t k = 1; k < len; ++k) {
    if (sgn(ac[k]) != 0) nz.push_back(k);
  }
  std::vector<Coefficient> b(len);
  b[0] = lead;
  Coefficient acc;
  for (std::size_t n = 1; n < len; ++n) {
    acc = 0;
    for (std::size_t k : nz) {
      if (k > n) break;
      mpz_addmul(acc.get_mpz_t(), ac[k].get_mpz_t(), b[n - k].get_mpz_t());
    }
    // lead is its own inverse
    b[n] = -lead * acc;
  }
  const HalfExp min = -a.min_exp();
  return QSeries::from_coeffs(min, min + HalfExp{static_cast<std::int64_t>(len)}, std::move(b));
}

QSeries power(const QSeries& a, int n) {
  if (n < 0) return power(invert(a), -n);
  QSeries r = QSeries::one(a.order() - a.min_exp());
  for (int i = 0; i < n; ++i) r = mul(r, a);
  return r;
}

std::optional<HalfExp> first_difference(const QSeries& a, const QSeries& b) {
  const std::int64_t order = std::min(a.order().u, b.order().u);
  const std::int64_t lo = std::min(a.min_exp().u, b.min_exp().u);
  for (std::int64_t e = lo; e < order; ++e) {
    if (a.coeff_unchecked(e) != b.coeff_unchecked(e)) return HalfExp{e};
  }
  return std::nullopt;
}

QSeries euler_phi(int j, HalfExp order) {
  require_positive(j, "euler_phi");
  if (order.u <= 0) return QSeries::zero(order);
  // Pentagonal numbers: phi(x) = sum_k (-1)^k x^{k(3k-1)/2}, k in Z.
  std::vector<Coefficient> c(static_cast<std::size_t>(order.u));
  const std::int64_t unit = 2 * static_cast<std::int64_t>(j);
  c[0] = 1;
  for (std::int64_t k = 1;; ++k) {
    const std::int64_t e1 = unit * (k * (3 * k - 1) / 2);
    if (e1 >= order.u) break;
    const int sign = (k % 2 == 0) ? 1 : -1;
    c[static_cast<std::size_t>(e1)] += sign;
    const std::int64_t e2 = unit * (k * (3 * k + 1) / 2);
    if (e2 < order.u) c[static_cast<std::size_t>(e2)] += sign;
  }
  return QSeries::from_coeffs(HalfExp{0}, order, std::move(c));
}

QSeries pochhammer(int j, int n, HalfExp order) {
  require_positive(j, "pochhammer");
  if (n < 0) throw InvalidParameter("pochhammer: n must be >= 0, got " + std::to_string(n));
  if (order.u <= 0) return QSeries::zero(order);
  std::vector<Coefficient> c(static_cast<std::size_t>(order.u));
  c[0] = 1;
  for (int i = 1; i <= n; ++i) {
    const std::int64_t step = 2 * static_cast<std::int64_t>(j) * i;
    if (step >= order.u) break;
    times_binomial(c, step, -1);
  }
  return QSeries::from_coeffs(HalfExp{0}, order, std::move(c));
}

QSeries dist_product(int j, HalfExp order) {
  require_positive(j, "dist_product");
  if (order.u <= 0) return QSeries::zero(order);
  std::vector<Coefficient> c(static_cast<std::size_t>(order.u));
  c[0] = 1;
  for (std::int64_t i = 1;; ++i) {
    const std::int64_t step = 2 * static_cast<std::int64_t>(j) * i;
    if (step >= order.u) break;
    times_binomial(c, step, +1);
  }
  return QSeries::from_coeffs(HalfExp{0}, order, std::move(c));
}

QSeries gauss_sum(HalfExp order) {
  if (order.u <= 0) return QSeries::zero(order);
  std::vector<Coefficient> c(static_cast<std::size_t>(order.u));
  for (std::int64_t p = 0; p * (p + 1) < order.u; ++p) c[static_cast<std::size_t>(p * (p + 1))] = 1;
  return QSeries::from_coeffs(HalfExp{0}, order, std::move(c));
}

std::string to_string(const QSeries& s) {
  std::ostringstream out;
  bool first = true;
  const auto& c = s.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (sgn(c[i]) == 0) continue;
    const HalfExp e = s.min_exp() + HalfExp{static_cast<std::int64_t>(i)};
    const bool negative = sgn(c[i]) < 0;
    if (first) {
      if (negative) out << "-";
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;
    const Coefficient mag = abs(c[i]);
    const std::string mono = render_monomial(e);
    if (mono.empty() || mag != 1) out << mag.get_str();
    out << mono;
  }
  if (!first) out << " + ";
  out << "O(q^{" << s.order().to_string() << "})";
  return out.str();
}

std::string to_text_lines(const QSeries& s) {
  std::ostringstream out;
  const auto& c = s.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (sgn(c[i]) == 0) continue;
    const HalfExp e = s.min_exp() + HalfExp{static_cast<std::int64_t>(i)};
    out << c[i].get_str() << " · q^{" << e.to_string() << "}\n";
  }
  out << "O(q^{" << s.order().to_string() << "})\n";
  return out.str();
}

nlohmann::json to_json(const QSeries& s) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : s.coeffs()) coeffs.push_back(c.get_str());
  return nlohmann::json{{"denom", 2}, {"min_u_exp", s.min_exp().u}, {"order_u", s.order().u}, {"coeffs", coeffs}};
}

QSeries qseries_from_json(const nlohmann::json& j) {
  try {
    if (j.at("denom").get<int>() != 2) throw InvalidParameter("QSeries JSON: denom must be 2");
    const auto min_u = j.at("min_u_exp").get<std::int64_t>();
    const auto order_u = j.at("order_u").get<std::int64_t>();
    const auto& arr = j.at("coeffs");
    if (!arr.is_array()) throw InvalidParameter("QSeries JSON: coeffs must be an array");
    if (static_cast<std::int64_t>(arr.size()) > std::max<std::int64_t>(0, order_u - min_u)) {
      throw InvalidParameter("QSeries JSON: more coefficients than the window [min_u_exp, order_u) holds");
    }
    std::vector<Coefficient> coeffs;
    coeffs.reserve(arr.size());
    for (const auto& c : arr) {
      Coefficient v;
      if (v.set_str(c.get<std::string>(), 10) != 0) throw InvalidParameter("QSeries JSON: bad coefficient");
      coeffs.push_back(std::move(v));
    }
    return QSeries::from_coeffs(HalfExp{min_u}, HalfExp{order_u}, std::move(coeffs));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("QSeries JSON: ") + e.what());
  }
}

}  // namespace qchar
