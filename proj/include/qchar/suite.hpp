#pragma once

// Identity checks over parameter grids, shared by the CLI and the acceptance run.

#include <cstdint>
#include <string>
#include <vector>

#include "qchar/bivariate.hpp"
#include "qchar/report.hpp"

namespace qchar::suite {

/// Inclusive integer range; "a..b" or "a".
struct Range {
  int lo = 0;
  int hi = 0;
  static Range parse(const std::string& text);
  std::vector<int> values() const;
};

struct GridSpec {
  Range m{2, 4};
  Range s{0, 4};
  Range k{0, 3};
  std::int64_t order_q = 200;
  int zwin = 10;
  /// q-bound of the Fock enumeration inside the prop21 family.
  int qbound = 30;
  int jobs = 1;
  std::int64_t max_nodes = 100'000'000;
};

/// lemma11a lemma11b prop12 recurrence thm13a thm13b prop21 cor22 jtp kp eq13 gauss
const std::vector<std::string>& family_names();

/// Every grid point of the family, in grid order. Throws InvalidParameter for an unknown family.
std::vector<IdentityReport> run_family(const std::string& family, const GridSpec& grid);

IdentityReport check_lemma11a(int m, int s, HalfExp order);
IdentityReport check_lemma11b(int m, int s, HalfExp order);
/// Closed form against both charge sectors and against k steps of the recurrence.
IdentityReport check_prop12(int m, int k, HalfExp order);
IdentityReport check_recurrence(int m, int s, HalfExp order);
IdentityReport check_thm13a(int m, HalfExp order);
/// lchar_family against the shifted charge sector of the matching proof case and against lchar_via_fock.
IdentityReport check_thm13b(int m, int k, HalfExp order);
/// Quasiparticle sum against fs_char at `order`, and the Fock enumeration below `oracle_bound` (0 skips it).
IdentityReport check_prop21(int m, int s, HalfExp order, HalfExp oracle_bound,
                            std::int64_t max_nodes = 100'000'000);
IdentityReport check_cor22(int m, HalfExp order);
IdentityReport check_jtp(HalfExp order, ZWindow window);
IdentityReport check_kp(HalfExp order, ZWindow window);
IdentityReport check_eq13(int m, int s, HalfExp order);
IdentityReport check_gauss(HalfExp order);

/// Compares two charge series on the common window.
IdentityReport compare_charge(std::string identity, nlohmann::ordered_json params, const ChargeSeries& lhs,
                              const ChargeSeries& rhs);

}  // namespace qchar::suite
