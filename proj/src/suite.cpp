#include "qchar/suite.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "qchar/charfock.hpp"
#include "qchar/errors.hpp"
#include "qchar/fockoracle.hpp"

namespace qchar::suite {

namespace {

using Json = nlohmann::ordered_json;

QSeries u_shift(const QSeries& x, std::int64_t e) { return x.shifted(HalfExp{e}); }

template <class F>
IdentityReport timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  IdentityReport r = f();
  r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

Json mo(int m, HalfExp order) { return Json{{"m", m}, {"order_q", order.u / 2}}; }
Json mso(int m, const char* key, int v, HalfExp order) { return Json{{"m", m}, {key, v}, {"order_q", order.u / 2}}; }

}  // namespace

Range Range::parse(const std::string& text) {
  auto to_int = [&](const std::string& t) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(t, &used);
    } catch (const std::exception&) {
      throw InvalidParameter("bad range '" + text + "'");
    }
    if (used != t.size()) throw InvalidParameter("bad range '" + text + "'");
    return v;
  };
  const auto dots = text.find("..");
  Range r;
  if (dots == std::string::npos) {
    r.lo = r.hi = to_int(text);
  } else {
    r.lo = to_int(text.substr(0, dots));
    r.hi = to_int(text.substr(dots + 2));
  }
  if (r.lo > r.hi) throw InvalidParameter("empty range '" + text + "'");
  return r;
}

std::vector<int> Range::values() const {
  std::vector<int> v;
  for (int x = lo; x <= hi; ++x) v.push_back(x);
  return v;
}

IdentityReport compare_charge(std::string identity, Json params, const ChargeSeries& lhs, const ChargeSeries& rhs) {
  IdentityReport r;
  r.identity = std::move(identity);
  r.params = std::move(params);
  r.order_u = std::min(lhs.order(), rhs.order()).u;
  const auto diff = first_difference(lhs, rhs);
  r.pass = !diff.has_value();
  if (diff) {
    r.first_diff_u = diff->second.u;
    r.lhs_coeff = lhs.row(diff->first).coeff(diff->second).get_str();
    r.rhs_coeff = rhs.row(diff->first).coeff(diff->second).get_str();
    r.params["first_diff_z"] = diff->first;
  }
  return r;
}

IdentityReport check_lemma11a(int m, int s, HalfExp order) {
  const std::int64_t sm = static_cast<std::int64_t>(s) * m;
  const QSeries lhs = u_shift(fs_char(m, s, order - HalfExp{sm}), sm) + u_shift(fs_char(m, -s, order + HalfExp{sm}), -sm);
  return compare_series("lemma11a", mso(m, "s", s, order), lhs, lemma11a_rhs(m, order));
}

IdentityReport check_lemma11b(int m, int s, HalfExp order) {
  return compare_series("lemma11b", mso(m, "s", s, order), fs_char(m, s, order), fs_char(m, m - 1 - s, order));
}

IdentityReport check_prop12(int m, int k, HalfExp order) {
  const Json p = mso(m, "k", k, order);
  const QSeries closed = prop12_closed(m, k, order);
  IdentityReport r = compare_series("prop12", p, closed, fs_char(m, (k + 1) * (m - 1), order));
  merge_into(r, compare_series("prop12", p, closed, fs_char(m, -k * (m - 1), order)));
  // the charge j(m-1) series is also the charge -(j-1)(m-1) one, so each step feeds the next
  QSeries h = fs_char(m, 0, order);
  for (int j = 0; j <= k; ++j) h = recurrence_step(m, j * (m - 1), h, order);
  merge_into(r, compare_series("prop12", p, closed, h));
  return r;
}

IdentityReport check_recurrence(int m, int s, HalfExp order) {
  const std::int64_t sm = static_cast<std::int64_t>(s) * m;
  const QSeries fs = fs_char(m, s, std::max(order, order - HalfExp{2 * sm}));
  return compare_series("recurrence", mso(m, "s", s, order), recurrence_step(m, s, fs, order),
                        fs_char(m, s + m - 1, order));
}

IdentityReport check_thm13a(int m, HalfExp order) {
  const Json p = mo(m, order);
  const QSeries basic = lchar_basic(m, order);
  const QSeries dp = dist_product(1, order);
  const QSeries phim = euler_phi(m, order);
  IdentityReport r = compare_series("thm13a", p, basic, mul(mul(dp, dp), invert(phim)));
  merge_into(r, compare_series("thm13a", p, basic, mul(fs_char(m, 0, order), phim)));
  merge_into(r, compare_series("thm13a", p, basic, mul(fs_char(m, m - 1, order), phim)));
  return r;
}

IdentityReport check_thm13b(int m, int k, HalfExp order) {
  const Json p = mso(m, "k", k, order);
  const QSeries fam = lchar_family(m, k, order);
  // k >= 0: q^{-km(m-1)/2} F_{-k(m-1)};  k < 0: q^{km(m-1)/2} F_{k(m-1)}
  const int sign = k >= 0 ? -1 : 1;
  const std::int64_t shift = static_cast<std::int64_t>(sign) * k * m * (m - 1);
  const int s = sign * k * (m - 1);
  const HalfExp inner = order - HalfExp{shift};
  const QSeries fs = fs_char(m, s, inner);
  const QSeries viaproof = u_shift(mul(fs, euler_phi(m, inner - std::min(HalfExp{0}, fs.min_exp()))), shift);
  IdentityReport r = compare_series("thm13b", p, fam, viaproof);
  merge_into(r, compare_series("thm13b", p, fam, lchar_via_fock({m, FamilyK{k}}, order)));
  return r;
}

IdentityReport check_prop21(int m, int s, HalfExp order, HalfExp oracle_bound, std::int64_t max_nodes) {
  Json p = mso(m, "s", s, order);
  p["oracle_bound_u"] = oracle_bound.u;
  const QSeries qp = fs_quasiparticle(m, s, order);
  const QSeries fs = fs_char(m, s, order);
  IdentityReport r = compare_series("prop21", p, qp, fs);
  if (oracle_bound.u > 0) {
    const QSeries oracle = enumerate_charge_series(m, s, oracle_bound, max_nodes);
    IdentityReport o = compare_series("prop21", p, oracle, qp);
    merge_into(o, compare_series("prop21", p, oracle, fs));
    // keep the quasiparticle order as the headline order
    const std::int64_t keep = r.order_u;
    merge_into(r, o);
    r.order_u = keep;
  }
  return r;
}

IdentityReport check_cor22(int m, HalfExp order) {
  auto [lhs, rhs] = cor22_sides(m, order);
  return compare_series("cor22", mo(m, order), lhs, rhs);
}

IdentityReport check_jtp(HalfExp order, ZWindow window) {
  auto [lhs, rhs] = jacobi_triple_sides(order, window);
  return compare_charge("jtp", Json{{"zmin", window.lo}, {"zmax", window.hi}, {"order_q", order.u / 2}}, lhs, rhs);
}

IdentityReport check_kp(HalfExp order, ZWindow window) {
  auto [lhs, rhs] = kp_identity_sides(order, window);
  return compare_charge("kp", Json{{"zmin", window.lo}, {"zmax", window.hi}, {"order_q", order.u / 2}}, lhs, rhs);
}

IdentityReport check_eq13(int m, int s, HalfExp order) {
  const ChargeSeries f = fock_char_product(m, order, ZWindow{s, s});
  return compare_series("eq13", mso(m, "s", s, order), coeff_z(f, s), fs_char(m, s, order));
}

IdentityReport check_gauss(HalfExp order) {
  const QSeries dp = dist_product(1, order);
  return compare_series("gauss", Json{{"order_q", order.u / 2}}, gauss_sum(order), mul(euler_phi(1, order), mul(dp, dp)));
}

const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names{"lemma11a", "lemma11b", "prop12", "recurrence", "thm13a", "thm13b",
                                              "prop21",   "cor22",    "jtp",    "kp",         "eq13",   "gauss"};
  return names;
}

std::vector<IdentityReport> run_family(const std::string& family, const GridSpec& g) {
  if (g.order_q < 1) throw InvalidParameter("order must be >= 1");
  const HalfExp order = HalfExp::from_q(g.order_q);
  std::vector<std::function<IdentityReport()>> tasks;
  auto over_ms = [&](auto check) {
    for (int m : g.m.values())
      for (int s : g.s.values()) tasks.push_back([=] { return check(m, s); });
  };
  auto over_mk = [&](auto check) {
    for (int m : g.m.values())
      for (int k : g.k.values()) tasks.push_back([=] { return check(m, k); });
  };
  auto over_m = [&](auto check) {
    for (int m : g.m.values()) tasks.push_back([=] { return check(m); });
  };
  const ZWindow win{-g.zwin, g.zwin};
  if (family == "lemma11a") {
    over_ms([=](int m, int s) { return check_lemma11a(m, s, order); });
  } else if (family == "lemma11b") {
    over_ms([=](int m, int s) { return check_lemma11b(m, s, order); });
  } else if (family == "prop12") {
    over_mk([=](int m, int k) { return check_prop12(m, k, order); });
  } else if (family == "recurrence") {
    over_ms([=](int m, int s) { return check_recurrence(m, s, order); });
  } else if (family == "thm13a") {
    over_m([=](int m) { return check_thm13a(m, order); });
  } else if (family == "thm13b") {
    over_mk([=](int m, int k) { return check_thm13b(m, k, order); });
  } else if (family == "prop21") {
    const HalfExp bound = HalfExp::from_q(g.qbound);
    const std::int64_t nodes = g.max_nodes;
    over_ms([=](int m, int s) { return check_prop21(m, s, order, bound, nodes); });
  } else if (family == "cor22") {
    over_m([=](int m) { return check_cor22(m, order); });
  } else if (family == "jtp") {
    tasks.push_back([=] { return check_jtp(order, win); });
  } else if (family == "kp") {
    tasks.push_back([=] { return check_kp(order, win); });
  } else if (family == "eq13") {
    over_ms([=](int m, int s) { return check_eq13(m, s, order); });
  } else if (family == "gauss") {
    tasks.push_back([=] { return check_gauss(order); });
  } else {
    throw InvalidParameter("unknown family '" + family + "'");
  }

  std::vector<IdentityReport> out(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
      try {
        out[i] = timed(tasks[i]);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(g.jobs, static_cast<int>(tasks.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace qchar::suite
