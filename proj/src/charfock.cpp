#include "qchar/charfock.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "qchar/errors.hpp"

namespace qchar {

namespace {

void require_m(int m, const char* what) {
  if (m < 2) throw InvalidParameter(std::string(what) + ": m must be >= 2, got " + std::to_string(m));
}

// sum_{i>=0} u^{step*i}
QSeries geometric(std::int64_t step, HalfExp order) {
  std::vector<Coefficient> c(static_cast<std::size_t>(std::max<std::int64_t>(order.u, 0)));
  for (std::int64_t e = 0; e < order.u; e += step) c[static_cast<std::size_t>(e)] = 1;
  return QSeries::from_coeffs(HalfExp{0}, order, std::move(c));
}

// 1/(q^j)_n for n = 0..n_max at `order`, built one geometric factor at a time.
std::vector<QSeries> inverse_pochhammers(int j, int n_max, HalfExp order) {
  std::vector<QSeries> out;
  out.push_back(QSeries::one(order));
  for (int n = 1; n <= n_max; ++n) {
    const std::int64_t step = 2 * static_cast<std::int64_t>(j) * n;
    out.push_back(mul_truncated(out.back(), geometric(step, order), order));
  }
  return out;
}

// u^{e} * x truncated at `order`.
QSeries shifted_to(const QSeries& x, std::int64_t e, HalfExp order) {
  return x.truncated(order - HalfExp{e}).shifted(HalfExp{e}).truncated(order);
}

}  // namespace

SpecializationTable::SpecializationTable(int m) : m_(m) { require_m(m, "SpecializationTable"); }

HalfExp SpecializationTable::epsilon(int i) const {
  if (i >= 1 && i <= m_) return HalfExp::from_q(m_ - i);
  if (i == m_ + 1) return HalfExp{0};
  throw InvalidParameter("epsilon index out of range: " + std::to_string(i));
}

HalfExp SpecializationTable::alpha(int i) const {
  // alpha_0 = delta - eps_1 + eps_{m+1}, alpha_i = eps_i - eps_{i+1}
  if (i == 0) return delta() - epsilon(1) + epsilon(m_ + 1);
  if (i >= 1 && i <= m_) return epsilon(i) - epsilon(i + 1);
  throw InvalidParameter("alpha index out of range: " + std::to_string(i));
}

HalfExp SpecializationTable::mode_weight(Mode kind, int color, int j) const {
  if (j < 1) throw InvalidParameter("mode index j must be >= 1");
  const HalfExp energy{(2 * static_cast<std::int64_t>(j) - 1) * m_};  // (j - 1/2) delta
  switch (kind) {
    case Mode::psi:
      if (color < 1 || color > m_) throw InvalidParameter("psi color out of range");
      return energy - epsilon(color);
    case Mode::psistar:
      if (color < 1 || color > m_) throw InvalidParameter("psi* color out of range");
      return energy + epsilon(color);
    case Mode::phi:
      if (color != 1) throw InvalidParameter("phi has a single color");
      return energy - epsilon(m_ + 1);
    case Mode::phistar:
      if (color != 1) throw InvalidParameter("phi* has a single color");
      return energy + epsilon(m_ + 1);
  }
  throw InvalidParameter("unknown mode kind");
}

HalfExp label_shift(const HighestWeightLabel& label) {
  const int m = label.m;
  require_m(m, "label_shift");
  const std::int64_t mm = m;
  struct Visitor {
    std::int64_t m;
    HalfExp operator()(BasicLambda0) const { return HalfExp{0}; }
    HalfExp operator()(LambdaMMinus1) const { return HalfExp{0}; }
    HalfExp operator()(FamilyK f) const {
      // {k(m-1)+1} Lambda_0 - k(m-1) Lambda_m
      return HalfExp{f.k * (m - 1) * m};
    }
    HalfExp operator()(GeneralS g) const {
      const std::int64_t s = g.s;
      // (1-s) Lambda_0 + s Lambda_m + s delta
      if (s <= 0) return HalfExp{-s * m + 2 * s * m};
      if (s == m - 1) return HalfExp{0};
      // -(s-m) Lambda_0 + (1+s-m) Lambda_m
      if (s >= m) return HalfExp{-(1 + s - m) * m};
      throw InvalidParameter("Lambda_(s) for 0 < s < m-1 is not expressible through Lambda_0, Lambda_m, delta");
    }
  };
  return std::visit(Visitor{mm}, label.family);
}

QSeries h_s(int m, int s, HalfExp order) {
  require_m(m, "h_s");
  const std::int64_t mm = m, ss = s;
  auto exponent = [&](std::int64_t a, std::int64_t p) {
    return (p + ss) * (p + ss + 1) - ss * mm + mm * a * (a + 1) + 2 * mm * a * p;
  };
  std::map<std::int64_t, Coefficient> terms;
  auto visit = [&](std::int64_t a, std::int64_t p, int region_sign) {
    const std::int64_t e = exponent(a, p);
    if (e >= order.u) return false;
    terms[e] += region_sign * ((a % 2 == 0) ? 1 : -1);
    return true;
  };
  // For fixed a the exponent is convex in p with minimizers pv and pv + 1.
  for (std::int64_t a = 0;; ++a) {
    const std::int64_t pv = -ss - mm * a - 1;
    if (pv <= 0 && exponent(a, 0) >= order.u) break;
    const std::int64_t start = std::max<std::int64_t>(0, pv);
    for (std::int64_t p = start; visit(a, p, +1); ++p) {
    }
    for (std::int64_t p = start - 1; p >= 0 && visit(a, p, +1); --p) {
    }
  }
  for (std::int64_t a = -1;; --a) {
    const std::int64_t pv = -ss - mm * a - 1;
    if (pv >= -1 && exponent(a, -1) >= order.u) break;
    const std::int64_t start = std::min<std::int64_t>(-1, pv + 1);
    for (std::int64_t p = start; visit(a, p, -1); --p) {
    }
    for (std::int64_t p = start + 1; p <= -1 && visit(a, p, -1); ++p) {
    }
  }
  if (terms.empty()) return QSeries::zero(order);
  const std::int64_t lo = terms.begin()->first;
  std::vector<Coefficient> c(static_cast<std::size_t>(order.u - lo));
  for (auto& [e, v] : terms) c[static_cast<std::size_t>(e - lo)] = v;
  return QSeries::from_coeffs(HalfExp{lo}, order, std::move(c));
}

QSeries fs_char(int m, int s, HalfExp order) {
  require_m(m, "fs_char");
  const QSeries h = h_s(m, s, order);
  const HalfExp inner = order - std::min(HalfExp{0}, h.min_exp());
  const QSeries inv1 = invert(euler_phi(1, inner));
  const QSeries invm = invert(euler_phi(m, inner));
  const QSeries denom = mul(inv1, mul(invm, invm));
  return mul_truncated(h, denom, order);
}

QSeries quasiparticle_sum(int m, int s, HalfExp order) {
  require_m(m, "quasiparticle_sum");
  if (order.u <= 0) return QSeries::zero(order);
  const std::int64_t O = order.u;
  const std::int64_t mm = m;
  int a_max = 0, b_max = 0, c_max = 0;
  while ((a_max + 1) * static_cast<std::int64_t>(a_max + 2) < O) ++a_max;
  while ((b_max + 1) * static_cast<std::int64_t>(b_max) < O) ++b_max;
  while (2 * (c_max + 1) * mm < O) ++c_max;
  // d = a - b + c - s carries no exponent of its own
  const int d_max = std::max(0, a_max + c_max - s);

  const auto inv_q = inverse_pochhammers(1, std::max(a_max, b_max), order);
  const auto inv_qm = inverse_pochhammers(m, std::max(c_max, d_max), order);

  // Fermionic pairs grouped by a - b.
  std::map<int, QSeries> fermions;
  for (int a = 0; a <= a_max; ++a) {
    for (int b = 0; b <= b_max; ++b) {
      const std::int64_t e = static_cast<std::int64_t>(a) * (a + 1) + static_cast<std::int64_t>(b) * (b - 1);
      if (e >= O) continue;
      const HalfExp rest = order - HalfExp{e};
      QSeries term = shifted_to(mul_truncated(inv_q[static_cast<std::size_t>(a)], inv_q[static_cast<std::size_t>(b)], rest), e, order);
      auto [it, fresh] = fermions.try_emplace(a - b, term);
      if (!fresh) it->second = it->second + term;
    }
  }

  QSeries total = QSeries::zero(order);
  for (const auto& [t, ferm] : fermions) {
    // Bosonic pairs with c - d = s - t.
    const int diff = s - t;
    QSeries bosons = QSeries::zero(order);
    for (int c = std::max(0, diff); c <= c_max; ++c) {
      const int d = c - diff;
      const std::int64_t e = 2 * static_cast<std::int64_t>(c) * mm;
      const HalfExp rest = order - HalfExp{e};
      bosons = bosons + shifted_to(mul_truncated(inv_qm[static_cast<std::size_t>(c)], inv_qm[static_cast<std::size_t>(d)], rest), e, order);
    }
    total = total + mul_truncated(ferm, bosons, order);
  }
  return total;
}

QSeries fs_quasiparticle(int m, int s, HalfExp order) {
  require_m(m, "fs_quasiparticle");
  const HalfExp shift{static_cast<std::int64_t>(s) * m};
  return quasiparticle_sum(m, s, order + shift).shifted(-shift);
}

QSeries fock_vacuum_product(int m, HalfExp order) {
  require_m(m, "fock_vacuum_product");
  const QSeries d = dist_product(1, order);
  const QSeries invm = invert(euler_phi(m, order));
  return mul(mul(d, d), mul(invm, invm));
}

QSeries lemma11a_rhs(int m, HalfExp order) {
  require_m(m, "lemma11a_rhs");
  return scale(fock_vacuum_product(m, order), 2);
}

QSeries theta_bracket(int m, int k, HalfExp order) {
  require_m(m, "theta_bracket");
  const std::int64_t kk = k, step = static_cast<std::int64_t>(m) * (m - 1);
  const std::int64_t K = kk < 0 ? -kk : kk;
  std::map<std::int64_t, Coefficient> terms;
  for (std::int64_t j = -K; j <= K; ++j) {
    const std::int64_t e = (kk * kk - j * j) * step;
    if (e >= order.u) continue;
    terms[e] += ((kk - j) % 2 == 0) ? 1 : -1;
  }
  if (order.u <= 0) return QSeries::zero(order);
  std::vector<Coefficient> c(static_cast<std::size_t>(order.u));
  for (auto& [e, v] : terms) c[static_cast<std::size_t>(e)] = v;
  return QSeries::from_coeffs(HalfExp{0}, order, std::move(c));
}

QSeries prop12_closed(int m, int k, HalfExp order) {
  require_m(m, "prop12_closed");
  if (k < 0) throw InvalidParameter("prop12_closed: k must be >= 0, got " + std::to_string(k));
  const std::int64_t shift = static_cast<std::int64_t>(k) * m * (m - 1);
  const QSeries inner = mul(theta_bracket(m, k, order), fock_vacuum_product(m, order));
  return shifted_to(inner, shift, order);
}

QSeries recurrence_step(int m, int s, const QSeries& fs, HalfExp order) {
  require_m(m, "recurrence_step");
  const HalfExp shift{static_cast<std::int64_t>(s) * m};
  const HalfExp inner = order - shift;
  if (fs.order() + shift < inner) {
    throw InsufficientOrder("recurrence_step: input known to u^" + std::to_string(fs.order().u) +
                            " cannot give the charge " + std::to_string(s + m - 1) + " series to u^" +
                            std::to_string(order.u));
  }
  const QSeries diff = lemma11a_rhs(m, inner) - fs.shifted(shift);
  return diff.truncated(inner).shifted(shift);
}

QSeries lchar_basic(int m, HalfExp order) {
  require_m(m, "lchar_basic");
  const QSeries d = dist_product(1, order);
  return mul(mul(d, d), invert(euler_phi(m, order)));
}

QSeries lchar_family(int m, int k, HalfExp order) {
  require_m(m, "lchar_family");
  return mul(theta_bracket(m, k, order), lchar_basic(m, order));
}

QSeries lchar_via_fock(const HighestWeightLabel& label, HalfExp order) {
  const int m = label.m;
  require_m(m, "lchar_via_fock");
  struct ChargeOf {
    int m;
    int operator()(BasicLambda0) const { return 0; }
    int operator()(LambdaMMinus1) const { return m - 1; }
    // Lambda_(s) agrees with the family label up to a multiple of delta.
    int operator()(FamilyK f) const { return f.k >= 0 ? -f.k * (m - 1) : (1 - f.k) * (m - 1); }
    int operator()(GeneralS g) const { return g.s; }
  };
  const int s = std::visit(ChargeOf{m}, label.family);
  const HalfExp shift = label_shift(HighestWeightLabel{m, GeneralS{s}});
  const HalfExp inner = order - shift;
  const QSeries fs = fs_char(m, s, inner);
  const QSeries phim = euler_phi(m, inner - std::min(HalfExp{0}, fs.min_exp()));
  return shifted_to(mul_truncated(fs, phim, inner), shift.u, order);
}

QSeries lchar(const HighestWeightLabel& label, HalfExp order) {
  const int m = label.m;
  require_m(m, "lchar");
  struct Closed {
    int m;
    HalfExp order;
    QSeries operator()(BasicLambda0) const { return lchar_basic(m, order); }
    QSeries operator()(LambdaMMinus1) const { return lchar_basic(m, order); }
    QSeries operator()(FamilyK f) const { return lchar_family(m, f.k, order); }
    QSeries operator()(GeneralS g) const {
      if (g.s == 0 || g.s == m - 1) return lchar_basic(m, order);
      if (g.s % (m - 1) == 0) {
        const int r = g.s / (m - 1);
        if (r <= 0) return lchar_family(m, -r, order);
        return lchar_family(m, 1 - r, order);
      }
      throw InvalidParameter("no closed form for Lambda_(" + std::to_string(g.s) + ")");
    }
  };
  return std::visit(Closed{m, order}, label.family);
}

std::pair<QSeries, QSeries> cor22_sides(int m, HalfExp order) {
  require_m(m, "cor22_sides");
  return {fock_vacuum_product(m, order), quasiparticle_sum(m, 0, order)};
}

double asympt_log_predicted(int m, std::int64_t n) {
  require_m(m, "asympt_log_predicted");
  if (n < 1) throw InvalidParameter("asympt_log_predicted: n must be >= 1");
  const double mm = m, nn = static_cast<double>(n);
  return std::numbers::pi * std::sqrt((2.0 / 3.0) * ((mm + 1.0) / mm) * nn) + 0.5 * std::log(mm + 1.0) -
         std::log(8.0 * std::sqrt(3.0) * nn);
}

double asympt_predicted(int m, std::int64_t n) { return std::exp(asympt_log_predicted(m, n)); }

double log_of(const Coefficient& c) {
  if (sgn(c) <= 0) throw InvalidParameter("log_of: argument must be positive");
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, c.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp2) * std::numbers::ln2;
}

std::vector<AsymptoticRow> asympt_report(int m, std::int64_t n_max, std::int64_t order_hint) {
  require_m(m, "asympt_report");
  if (n_max < 1) throw InvalidParameter("asympt_report: n_max must be >= 1");
  if (order_hint != 0 && order_hint < n_max) {
    throw InsufficientOrder("asympt_report: order " + std::to_string(order_hint) + " does not reach n = " +
                            std::to_string(n_max - 1));
  }
  const QSeries series = lchar_basic(m, HalfExp::from_q(std::max(order_hint, n_max)));
  std::vector<AsymptoticRow> rows;
  rows.reserve(static_cast<std::size_t>(n_max));
  for (std::int64_t n = 0; n < n_max; ++n) {
    AsymptoticRow row;
    row.n = n;
    row.a_n = series.coeff(HalfExp::from_q(n));
    if (n >= 1) row.log_ratio = log_of(row.a_n) / asympt_log_predicted(m, n);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qchar
