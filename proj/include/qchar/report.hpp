#pragma once

// Outcome of comparing the two sides of an identity.

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "qchar/qseries.hpp"

namespace qchar {

struct IdentityReport {
  std::string identity;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::int64_t order_u = 0;
  bool pass = false;
  std::optional<std::int64_t> first_diff_u;
  std::optional<std::string> lhs_coeff;
  std::optional<std::string> rhs_coeff;
  double ms = 0.0;
};

/// Compares lhs and rhs below their common order.
IdentityReport compare_series(std::string identity, nlohmann::ordered_json params, const QSeries& lhs,
                              const QSeries& rhs);

/// Folds `other` into `into`: the verdict becomes the conjunction, the order the minimum, and the
/// first recorded discrepancy is kept.
void merge_into(IdentityReport& into, const IdentityReport& other);

/// {"identity","params","order_u","verdict","first_diff_u_exp","lhs_coeff","rhs_coeff","ms"}.
/// `ms` is written as 0 unless `with_timing`, so repeated runs print identical bytes.
nlohmann::ordered_json to_json(const IdentityReport& r, bool with_timing = false);

}  // namespace qchar
