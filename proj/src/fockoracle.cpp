#include "qchar/fockoracle.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "qchar/charfock.hpp"
#include "qchar/errors.hpp"

namespace qchar {

namespace {

void require_m(int m, const char* what) {
  if (m < 2) throw InvalidParameter(std::string(what) + ": m must be >= 2, got " + std::to_string(m));
}

struct Mode {
  ModeKind kind;
  int color;
  int j;
  std::int64_t e;
  int charge;
  bool fermion;
};

struct ModeSet {
  std::vector<Mode> modes;  // sorted by exponent
  std::int64_t floor = 0;   // sum of the negative exponents
  int charge_bound = 0;     // a state below the bound has at most this many modes
};

ModeSet modes_below(int m, std::int64_t bound) {
  ModeSet out;
  for (int i = 1; i <= m; ++i) {
    const std::int64_t e = weight_exponent(ModeKind::psi, i, 1, m).u;
    if (e < 0) out.floor += e;
  }
  const std::int64_t budget = bound - out.floor;
  auto add = [&](ModeKind kind, int color, int charge, bool fermion) {
    for (int j = 1;; ++j) {
      const std::int64_t e = weight_exponent(kind, color, j, m).u;
      if (e > 0 && e >= budget) break;
      out.modes.push_back({kind, color, j, e, charge, fermion});
    }
  };
  for (int i = 1; i <= m; ++i) add(ModeKind::psi, i, +1, true);
  for (int i = 1; i <= m; ++i) add(ModeKind::psistar, i, -1, true);
  add(ModeKind::phi, 1, +1, false);
  add(ModeKind::phistar, 1, -1, false);
  std::stable_sort(out.modes.begin(), out.modes.end(), [](const Mode& a, const Mode& b) { return a.e < b.e; });
  int free_modes = 0;
  for (const auto& md : out.modes)
    if (md.e <= 0) ++free_modes;
  // every mode of positive exponent costs at least one u
  out.charge_bound = free_modes + static_cast<int>(std::max<std::int64_t>(budget, 0));
  return out;
}

std::int64_t mode_exponent(ModeKind kind, int color, int j, int m) { return weight_exponent(kind, color, j, m).u; }

}  // namespace

HalfExp weight_exponent(ModeKind kind, int color, int j, int m) {
  require_m(m, "weight_exponent");
  if (j < 1) throw InvalidParameter("mode index j must be >= 1");
  const std::int64_t mm = m, jj = j, ii = color;
  switch (kind) {
    case ModeKind::psi:
      if (color < 1 || color > m) throw InvalidParameter("psi color out of range");
      return HalfExp{2 * ii + 2 * mm * jj - 3 * mm};
    case ModeKind::psistar:
      if (color < 1 || color > m) throw InvalidParameter("psi* color out of range");
      return HalfExp{-2 * ii + 2 * mm * jj + mm};
    case ModeKind::phi:
    case ModeKind::phistar:
      if (color != 1) throw InvalidParameter("bosonic modes have the single color 1");
      return HalfExp{2 * mm * jj - mm};
  }
  throw InvalidParameter("unknown mode kind");
}

int FockState::charge() const {
  int c = 0;
  for (const auto& l : psi) c += static_cast<int>(l.size());
  for (const auto& l : psistar) c -= static_cast<int>(l.size());
  return c + static_cast<int>(phi.size()) - static_cast<int>(phistar.size());
}

HalfExp FockState::degree(int m) const {
  std::int64_t d = 0;
  for (std::size_t i = 0; i < psi.size(); ++i)
    for (int j : psi[i]) d += mode_exponent(ModeKind::psi, static_cast<int>(i) + 1, j, m);
  for (std::size_t i = 0; i < psistar.size(); ++i)
    for (int j : psistar[i]) d += mode_exponent(ModeKind::psistar, static_cast<int>(i) + 1, j, m);
  for (int j : phi) d += mode_exponent(ModeKind::phi, 1, j, m);
  for (int j : phistar) d += mode_exponent(ModeKind::phistar, 1, j, m);
  return HalfExp{d};
}

bool FockState::canonical() const {
  auto strict = [](const std::vector<int>& l) {
    for (std::size_t k = 0; k < l.size(); ++k)
      if (l[k] < 1 || (k > 0 && l[k] <= l[k - 1])) return false;
    return true;
  };
  auto weak = [](const std::vector<int>& l) {
    for (std::size_t k = 0; k < l.size(); ++k)
      if (l[k] < 1 || (k > 0 && l[k] < l[k - 1])) return false;
    return true;
  };
  return std::all_of(psi.begin(), psi.end(), strict) && std::all_of(psistar.begin(), psistar.end(), strict) &&
         weak(phi) && weak(phistar);
}

std::string FockState::dump(int m) const {
  auto list = [](const std::vector<int>& l) {
    std::string s = "[";
    for (std::size_t k = 0; k < l.size(); ++k) s += (k ? " " : "") + std::to_string(l[k]);
    return s + "]";
  };
  auto colors = [&](const std::vector<std::vector<int>>& ls) {
    std::string s;
    for (std::size_t k = 0; k < ls.size(); ++k) s += (k ? "," : "") + list(ls[k]);
    return s;
  };
  std::ostringstream os;
  os << charge() << ' ' << degree(m).u << ' ' << colors(psi) << " | " << colors(psistar) << " | " << list(phi)
     << " | " << list(phistar);
  return os.str();
}

std::map<int, QSeries> enumerate_all_charges(int m, HalfExp max_u_exp, std::int64_t max_nodes) {
  require_m(m, "enumerate_all_charges");
  const std::int64_t bound = max_u_exp.u;
  const ModeSet ms = modes_below(m, bound);
  std::map<int, QSeries> out;
  if (bound <= ms.floor) return out;
  const int B = ms.charge_bound;
  const std::int64_t width = bound - ms.floor;  // index x = degree - floor
  const std::size_t rows = static_cast<std::size_t>(2 * B + 1);
  std::vector<std::vector<Coefficient>> table(rows, std::vector<Coefficient>(static_cast<std::size_t>(width)));
  table[static_cast<std::size_t>(B)][static_cast<std::size_t>(-ms.floor)] = 1;
  std::int64_t nodes = 0;
  auto tick = [&](std::int64_t n) {
    nodes += n;
    if (nodes > max_nodes) {
      throw ResourceLimit("Fock enumeration exceeded " + std::to_string(max_nodes) + " nodes");
    }
  };
  // Negative modes come first, so every partial degree stays inside [floor, bound).
  for (const Mode& md : ms.modes) {
    const int dc = md.charge;
    const std::int64_t e = md.e;
    if (md.fermion) {
      // target cells are visited before their sources
      const bool up_c = dc > 0;
      for (int ci = 0; ci < static_cast<int>(rows); ++ci) {
        const int c = up_c ? static_cast<int>(rows) - 1 - ci : ci;
        const int src_c = c - dc;
        if (src_c < 0 || src_c >= static_cast<int>(rows)) continue;
        auto& dst = table[static_cast<std::size_t>(c)];
        const auto& src = table[static_cast<std::size_t>(src_c)];
        for (std::int64_t x = 0; x < width; ++x) {
          const std::int64_t from = x - e;
          if (from < 0 || from >= width) continue;
          const auto& v = src[static_cast<std::size_t>(from)];
          if (sgn(v) != 0) dst[static_cast<std::size_t>(x)] += v;
        }
        tick(width);
      }
    } else {
      // geometric in (z^dc u^e): sources are updated before use, e > 0 always
      const bool up_c = dc > 0;
      for (int ci = 0; ci < static_cast<int>(rows); ++ci) {
        const int c = up_c ? ci : static_cast<int>(rows) - 1 - ci;
        const int src_c = c - dc;
        if (src_c < 0 || src_c >= static_cast<int>(rows)) continue;
        auto& dst = table[static_cast<std::size_t>(c)];
        const auto& src = table[static_cast<std::size_t>(src_c)];
        for (std::int64_t x = e; x < width; ++x) {
          const auto& v = src[static_cast<std::size_t>(x - e)];
          if (sgn(v) != 0) dst[static_cast<std::size_t>(x)] += v;
        }
        tick(width);
      }
    }
  }
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = table[r];
    if (std::all_of(row.begin(), row.end(), [](const Coefficient& c) { return sgn(c) == 0; })) continue;
    out.emplace(static_cast<int>(r) - B, QSeries::from_coeffs(HalfExp{ms.floor}, max_u_exp, row));
  }
  return out;
}

QSeries enumerate_charge_series(int m, int s, HalfExp max_u_exp, std::int64_t max_nodes) {
  const auto all = enumerate_all_charges(m, max_u_exp, max_nodes);
  const auto it = all.find(s);
  if (it == all.end()) return QSeries::zero(max_u_exp);
  return it->second;
}

std::vector<FockState> enumerate_states(int m, int s, HalfExp max_u_exp, std::int64_t max_nodes) {
  require_m(m, "enumerate_states");
  const std::int64_t bound = max_u_exp.u;
  const ModeSet ms = modes_below(m, bound);
  std::vector<std::int64_t> neg_after(ms.modes.size() + 1, 0);  // negative exponents still available
  for (std::size_t k = ms.modes.size(); k-- > 0;) neg_after[k] = neg_after[k + 1] + std::min<std::int64_t>(ms.modes[k].e, 0);

  std::vector<FockState> out;
  FockState cur;
  cur.psi.assign(static_cast<std::size_t>(m), {});
  cur.psistar.assign(static_cast<std::size_t>(m), {});
  std::int64_t nodes = 0;
  std::function<void(std::size_t, std::int64_t, int)> rec = [&](std::size_t k, std::int64_t deg, int charge) {
    if (++nodes > max_nodes) throw ResourceLimit("state enumeration exceeded " + std::to_string(max_nodes) + " nodes");
    if (deg + neg_after[k] >= bound) return;
    if (k == ms.modes.size()) {
      if (charge == s) out.push_back(cur);
      return;
    }
    const Mode& md = ms.modes[k];
    std::vector<int>* list = nullptr;
    switch (md.kind) {
      case ModeKind::psi: list = &cur.psi[static_cast<std::size_t>(md.color - 1)]; break;
      case ModeKind::psistar: list = &cur.psistar[static_cast<std::size_t>(md.color - 1)]; break;
      case ModeKind::phi: list = &cur.phi; break;
      case ModeKind::phistar: list = &cur.phistar; break;
    }
    rec(k + 1, deg, charge);
    const int max_copies = md.fermion ? 1 : 1 << 20;
    int copies = 0;
    std::int64_t d = deg;
    int c = charge;
    while (copies < max_copies) {
      d += md.e;
      c += md.charge;
      if (d + neg_after[k + 1] >= bound) break;
      list->push_back(md.j);
      ++copies;
      rec(k + 1, d, c);
    }
    list->resize(list->size() - static_cast<std::size_t>(copies));
  };
  rec(0, 0, 0);
  // modes were visited by exponent; restore the increasing index order inside each list
  for (auto& st : out) {
    for (auto& l : st.psi) std::sort(l.begin(), l.end());
    for (auto& l : st.psistar) std::sort(l.begin(), l.end());
    std::sort(st.phi.begin(), st.phi.end());
    std::sort(st.phistar.begin(), st.phistar.end());
  }
  return out;
}

IdentityReport oracle_vs_quasiparticle(int m, int s, HalfExp max_u_exp, std::int64_t max_nodes) {
  const QSeries oracle = enumerate_charge_series(m, s, max_u_exp, max_nodes);
  const QSeries qp = fs_quasiparticle(m, s, max_u_exp);
  const QSeries fs = fs_char(m, s, max_u_exp);
  nlohmann::ordered_json params{{"m", m}, {"s", s}, {"bound_u", max_u_exp.u}};
  IdentityReport r = compare_series("oracle", params, oracle, qp);
  merge_into(r, compare_series("oracle", params, oracle, fs));
  return r;
}

}  // namespace qchar
