#pragma once

// Principally specialized characters of level-1 sl(m|1)-modules: the charge
// sectors F_s of the Fock space and the irreducible modules L(Lambda).

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "qchar/qseries.hpp"

namespace qchar {

/// Exponents (u-units) of the specialization of type (1,...,1,0) applied to
/// e^{-eps_i}, e^{-alpha_i} and e^{-delta}.
class SpecializationTable {
 public:
  explicit SpecializationTable(int m);

  int m() const { return m_; }
  /// F(e^{-eps_i}) for i = 1..m+1.
  HalfExp epsilon(int i) const;
  /// F(e^{-alpha_i}) for i = 0..m, derived from the epsilon and delta values.
  HalfExp alpha(int i) const;
  /// F(e^{-alpha'_0}) with alpha'_0 = alpha_0 + alpha_m.
  HalfExp alpha_even0() const { return alpha(0) + alpha(m_); }
  HalfExp delta() const { return HalfExp::from_q(m_); }

  enum class Mode { psi, psistar, phi, phistar };
  /// F(e^{weight}) of the creation mode with index -(j - 1/2), derived from
  /// weight(psi^(i)_k) = eps_i + k delta and friends.
  HalfExp mode_weight(Mode kind, int color, int j) const;

 private:
  int m_;
};

/// Highest weight labels handled by the character formulas.
struct BasicLambda0 {};
struct LambdaMMinus1 {};
/// {k(m-1)+1} Lambda_0 - k(m-1) Lambda_m.
struct FamilyK {
  int k = 0;
};
/// Lambda_(s) in the charge-s labelling.
struct GeneralS {
  int s = 0;
};

struct HighestWeightLabel {
  int m = 2;
  std::variant<BasicLambda0, LambdaMMinus1, FamilyK, GeneralS> family;
};

/// Exponent of F(e^{-Lambda}) / F(e^{-Lambda_0}), from F(e^{-Lambda_m}) =
/// F(e^{-Lambda_0}) q^{-m/2}, F(e^{-Lambda_{m-1}}) = F(e^{-Lambda_0}) and
/// F(e^{-delta}) = q^m. GeneralS covers s <= 0, s = m-1 and s >= m.
HalfExp label_shift(const HighestWeightLabel& label);

/// (sum_{a,p>=0} - sum_{a,p<0}) (-1)^a q^{(p+s)(p+s+1)/2 - sm/2 + (m/2)a(a+1) + map}.
QSeries h_s(int m, int s, HalfExp order);
/// F(e^{-Lambda_0} ch F_s) = h_s / (phi(q) phi(q^m)^2).
QSeries fs_char(int m, int s, HalfExp order);
/// Quasiparticle sum over a,b,c,d >= 0 with a-b+c-d = s, including the q^{-sm/2} prefactor.
QSeries fs_quasiparticle(int m, int s, HalfExp order);
/// The same sum without the prefactor.
QSeries quasiparticle_sum(int m, int s, HalfExp order);

/// prod(1+q^i)^2 / phi(q^m)^2.
QSeries fock_vacuum_product(int m, HalfExp order);
/// 2 prod(1+q^i)^2 / phi(q^m)^2.
QSeries lemma11a_rhs(int m, HalfExp order);
/// sum_{|j|<=|k|} (-1)^{k-j} q^{(k^2-j^2) m(m-1)/2}.
QSeries theta_bracket(int m, int k, HalfExp order);
/// q^{k m(m-1)/2} * theta_bracket(m,k) * prod(1+q^i)^2 / phi(q^m)^2, k >= 0.
QSeries prop12_closed(int m, int k, HalfExp order);
/// q^{sm/2}(2 prod(1+q^i)^2/phi(q^m)^2 - q^{sm/2} fs), the charge s+m-1 character.
/// Throws InsufficientOrder if fs does not support `order`.
QSeries recurrence_step(int m, int s, const QSeries& fs, HalfExp order);

/// F(e^{-Lambda} ch L(Lambda)) for Lambda_0 (and Lambda_{m-1}): prod(1+q^i)^2 / phi(q^m).
QSeries lchar_basic(int m, HalfExp order);
/// theta_bracket(m,k) * prod(1+q^i)^2 / phi(q^m), any integer k.
QSeries lchar_family(int m, int k, HalfExp order);
/// F(e^{-Lambda} ch L(Lambda)) through ch F_s = phi(e^{-delta})^{-1} ch L(Lambda_(s)).
QSeries lchar_via_fock(const HighestWeightLabel& label, HalfExp order);
/// Closed product/bracket formula for the label (BasicLambda0, LambdaMMinus1, FamilyK).
QSeries lchar(const HighestWeightLabel& label, HalfExp order);

/// {prod(1+q^i)^2 / phi(q^m)^2, quasiparticle sum at s = 0}.
std::pair<QSeries, QSeries> cor22_sides(int m, HalfExp order);

/// log of (m+1)^{1/2} exp(pi sqrt((2/3)((m+1)/m) n)) / (8 sqrt(3) n).
double asympt_log_predicted(int m, std::int64_t n);
/// exp(asympt_log_predicted); +inf once it exceeds double range.
double asympt_predicted(int m, std::int64_t n);

struct AsymptoticRow {
  std::int64_t n = 0;
  Coefficient a_n;
  /// log(a_n) / asympt_log_predicted(m, n); unset for n = 0.
  std::optional<double> log_ratio;
};

/// Rows n = 0 .. n_max-1 from the coefficients of lchar_basic(m).
/// `order_hint` (q-units, 0 = automatic) must cover n_max or InsufficientOrder is thrown.
std::vector<AsymptoticRow> asympt_report(int m, std::int64_t n_max, std::int64_t order_hint = 0);

/// log of a positive big integer.
double log_of(const Coefficient& c);

}  // namespace qchar
