#pragma once

// Brute-force counting over the Fock space basis: fermionic modes psi^(i),
// psi^(i)* (i = 1..m) and bosonic modes phi, phi*, all with half-odd indices
// -(j - 1/2), j >= 1.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qchar/qseries.hpp"
#include "qchar/report.hpp"

namespace qchar {

enum class ModeKind { psi, psistar, phi, phistar };

/// u-exponent of the specialized weight of the creation mode of index -(j - 1/2):
/// psi 2i + 2mj - 3m, psi* -2i + 2mj + m, phi and phi* 2mj - m.
HalfExp weight_exponent(ModeKind kind, int color, int j, int m);

/// One basis vector: per-color strictly increasing mode lists for psi and psi*,
/// weakly increasing lists for phi and phi*.
struct FockState {
  std::vector<std::vector<int>> psi;
  std::vector<std::vector<int>> psistar;
  std::vector<int> phi;
  std::vector<int> phistar;

  int charge() const;
  HalfExp degree(int m) const;
  /// "charge degree psi | psi* | phi | phi*", colors as comma-separated [..] lists, degree in u-units.
  std::string dump(int m) const;
  bool canonical() const;
  friend bool operator==(const FockState&, const FockState&) = default;
};

inline constexpr std::int64_t kDefaultMaxNodes = 100'000'000;

/// Sum of u^{degree} over states of charge s with degree < max_u_exp.
QSeries enumerate_charge_series(int m, int s, HalfExp max_u_exp, std::int64_t max_nodes = kDefaultMaxNodes);
/// The same for every charge that has a state below the bound.
std::map<int, QSeries> enumerate_all_charges(int m, HalfExp max_u_exp, std::int64_t max_nodes = kDefaultMaxNodes);

/// States of charge s with degree < max_u_exp, materialized one by one (small bounds only).
std::vector<FockState> enumerate_states(int m, int s, HalfExp max_u_exp, std::int64_t max_nodes = kDefaultMaxNodes);

/// Enumeration versus the quasiparticle sum and the h_s formula, below max_u_exp.
IdentityReport oracle_vs_quasiparticle(int m, int s, HalfExp max_u_exp, std::int64_t max_nodes = kDefaultMaxNodes);

}  // namespace qchar
