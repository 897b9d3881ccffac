#include "qchar/report.hpp"

#include <algorithm>
#include <utility>

namespace qchar {

IdentityReport compare_series(std::string identity, nlohmann::ordered_json params, const QSeries& lhs,
                              const QSeries& rhs) {
  IdentityReport r;
  r.identity = std::move(identity);
  r.params = std::move(params);
  r.order_u = std::min(lhs.order(), rhs.order()).u;
  const auto diff = first_difference(lhs, rhs);
  r.pass = !diff.has_value();
  if (diff) {
    r.first_diff_u = diff->u;
    r.lhs_coeff = lhs.coeff(*diff).get_str();
    r.rhs_coeff = rhs.coeff(*diff).get_str();
  }
  return r;
}

void merge_into(IdentityReport& into, const IdentityReport& other) {
  into.order_u = std::min(into.order_u, other.order_u);
  into.ms += other.ms;
  if (into.pass && !other.pass) {
    into.first_diff_u = other.first_diff_u;
    into.lhs_coeff = other.lhs_coeff;
    into.rhs_coeff = other.rhs_coeff;
  }
  into.pass = into.pass && other.pass;
}

nlohmann::ordered_json to_json(const IdentityReport& r, bool with_timing) {
  nlohmann::ordered_json j;
  j["identity"] = r.identity;
  j["params"] = r.params;
  j["order_u"] = r.order_u;
  j["verdict"] = r.pass ? "pass" : "fail";
  j["first_diff_u_exp"] = r.first_diff_u ? nlohmann::ordered_json(*r.first_diff_u) : nlohmann::ordered_json(nullptr);
  j["lhs_coeff"] = r.lhs_coeff ? nlohmann::ordered_json(*r.lhs_coeff) : nlohmann::ordered_json(nullptr);
  j["rhs_coeff"] = r.rhs_coeff ? nlohmann::ordered_json(*r.rhs_coeff) : nlohmann::ordered_json(nullptr);
  j["ms"] = with_timing ? r.ms : 0.0;
  return j;
}

}  // namespace qchar
