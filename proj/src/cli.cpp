#include "qchar/cli.hpp"

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "qchar/charfock.hpp"
#include "qchar/errors.hpp"
#include "qchar/exprdsl.hpp"
#include "qchar/fockoracle.hpp"
#include "qchar/suite.hpp"

namespace qchar::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
  std::string name;
  std::string expr;
  std::string m = "2";
  std::string s = "0";
  std::string k = "0";
  int j = 1;
  std::int64_t order = 200;
  int zwin = 10;
  int qbound = 20;
  std::int64_t nmax = 100;
  std::string format;
  std::string family;
  int jobs = 1;
  std::int64_t max_nodes = kDefaultMaxNodes;
  bool timing = false;
  bool dump = false;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

int single(const std::string& text, const char* flag) {
  const auto r = suite::Range::parse(text);
  if (r.lo != r.hi) throw UsageError(std::string(flag) + " takes a single value here");
  return r.lo;
}

HalfExp order_of(const Options& o) {
  if (o.order < 1) throw UsageError("--order must be >= 1");
  return HalfExp::from_q(o.order);
}

std::string report_line(const IdentityReport& r) {
  std::string line = (r.pass ? "pass " : "FAIL ") + r.identity + " " + r.params.dump() + " order_u=" + std::to_string(r.order_u);
  if (r.first_diff_u) line += " first_diff_u=" + std::to_string(*r.first_diff_u) + " lhs=" + *r.lhs_coeff + " rhs=" + *r.rhs_coeff;
  return line;
}

void print_reports(const std::vector<IdentityReport>& reports, const Options& o, std::ostream& out) {
  const std::string fmt = o.format.empty() ? "json" : o.format;
  if (fmt == "json") {
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(to_json(r, o.timing));
    out << arr.dump(2) << "\n";
  } else if (fmt == "text") {
    for (const auto& r : reports) out << report_line(r) << "\n";
  } else {
    out << "identity,params,order_u,verdict,first_diff_u_exp,lhs_coeff,rhs_coeff,ms\n";
    for (const auto& r : reports) {
      std::string params = r.params.dump();
      std::string quoted = "\"";
      for (char c : params) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
      quoted += "\"";
      out << r.identity << ',' << quoted << ',' << r.order_u << ',' << (r.pass ? "pass" : "fail") << ','
          << (r.first_diff_u ? std::to_string(*r.first_diff_u) : "") << ',' << r.lhs_coeff.value_or("") << ','
          << r.rhs_coeff.value_or("") << ',' << (o.timing ? r.ms : 0.0) << "\n";
    }
  }
}

int verdict(const std::vector<IdentityReport>& reports) {
  for (const auto& r : reports)
    if (!r.pass) return kExitFail;
  return kExitPass;
}

QSeries named_series(const Options& o, HalfExp order) {
  const std::string& n = o.name;
  auto m = [&] { return single(o.m, "--m"); };
  auto s = [&] { return single(o.s, "--s"); };
  auto k = [&] { return single(o.k, "--k"); };
  if (n == "fs") return fs_char(m(), s(), order);
  if (n == "qp") return fs_quasiparticle(m(), s(), order);
  if (n == "hs") return h_s(m(), s(), order);
  if (n == "L0") return lchar_basic(m(), order);
  if (n == "Lk") return lchar_family(m(), k(), order);
  if (n == "phi") return euler_phi(o.j, order);
  if (n == "distp") return dist_product(o.j, order);
  if (n == "gauss") return gauss_sum(order);
  throw UsageError("unknown series name '" + n + "' (fs qp hs L0 Lk phi distp gauss)");
}

int cmd_series(const Options& o, std::ostream& out) {
  const HalfExp order = order_of(o);
  if (o.name.empty() == o.expr.empty()) throw UsageError("series needs exactly one of --name or --expr");
  QSeries result;
  if (!o.expr.empty()) {
    const auto e = dsl::parse(o.expr);
    result = dsl::eval(*e, order);
  } else {
    result = named_series(o, order);
  }
  const std::string fmt = o.format.empty() ? "text" : o.format;
  if (fmt == "json") {
    out << to_json(result).dump() << "\n";
  } else if (fmt == "csv") {
    out << "u_exp,coeff\n";
    for (std::size_t i = 0; i < result.coeffs().size(); ++i) {
      if (sgn(result.coeffs()[i]) == 0) continue;
      out << result.min_exp().u + static_cast<std::int64_t>(i) << ',' << result.coeffs()[i].get_str() << "\n";
    }
  } else {
    out << to_text_lines(result);
  }
  return kExitPass;
}

int cmd_verify(const Options& o, std::ostream& out) {
  if (o.family.empty()) throw UsageError("verify needs --family");
  const auto& names = suite::family_names();
  if (std::find(names.begin(), names.end(), o.family) == names.end()) {
    std::string all;
    for (const auto& n : names) all += " " + n;
    throw UsageError("unknown family '" + o.family + "' (" + all.substr(1) + ")");
  }
  suite::GridSpec g;
  g.m = suite::Range::parse(o.m);
  g.s = suite::Range::parse(o.s);
  g.k = suite::Range::parse(o.k);
  g.order_q = order_of(o).u / 2;
  if (o.zwin < 0) throw UsageError("--zwin must be >= 0");
  g.zwin = o.zwin;
  g.qbound = o.qbound;
  g.jobs = o.jobs;
  g.max_nodes = o.max_nodes;
  const auto reports = suite::run_family(o.family, g);
  print_reports(reports, o, out);
  return verdict(reports);
}

int cmd_oracle(const Options& o, std::ostream& out) {
  const int m = single(o.m, "--m"), s = single(o.s, "--s");
  if (o.qbound < 1) throw UsageError("--qbound must be >= 1");
  const HalfExp bound = HalfExp::from_q(o.qbound);
  if (o.dump) {
    for (const auto& st : enumerate_states(m, s, bound, o.max_nodes)) out << st.dump(m) << "\n";
    return kExitPass;
  }
  const auto t0 = std::chrono::steady_clock::now();
  IdentityReport r = oracle_vs_quasiparticle(m, s, bound, o.max_nodes);
  r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  print_reports({r}, o, out);
  return verdict({r});
}

int cmd_asympt(const Options& o, std::ostream& out, bool order_given) {
  const int m = single(o.m, "--m");
  if (o.nmax < 1) throw UsageError("--nmax must be >= 1");
  const auto rows = asympt_report(m, o.nmax, order_given ? order_of(o).u / 2 : 0);
  const std::string fmt = o.format.empty() ? "csv" : o.format;
  auto ratio = [](const AsymptoticRow& r) {
    if (!r.log_ratio) return std::string();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", *r.log_ratio);
    return std::string(buf);
  };
  if (fmt == "json") {
    Json arr = Json::array();
    for (const auto& r : rows) {
      arr.push_back(Json{{"n", r.n}, {"a_n", r.a_n.get_str()},
                         {"log_ratio", r.log_ratio ? Json(std::stod(ratio(r))) : Json(nullptr)}});
    }
    out << arr.dump(2) << "\n";
  } else if (fmt == "text") {
    for (const auto& r : rows) out << r.n << "  " << r.a_n.get_str() << "  " << ratio(r) << "\n";
  } else {
    out << "n,a_n,log_ratio\n";
    for (const auto& r : rows) out << r.n << ',' << r.a_n.get_str() << ',' << ratio(r) << "\n";
  }
  return kExitPass;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Specialized characters of level-1 sl(m|1) modules as exact q-series", "qchar"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::string> formats{"json", "text", "csv"};

  auto* series = app.add_subcommand("series", "print a named series or a DSL expression");
  series->add_option("--name", o.name, "fs qp hs L0 Lk phi distp gauss");
  series->add_option("--expr", o.expr, "expression, e.g. \"distp(1)^2 / phi(2)\"");
  series->add_option("--j", o.j, "argument of phi and distp");

  auto* verify = app.add_subcommand("verify", "check an identity family over a grid");
  verify->add_option("--family", o.family, "lemma11a lemma11b prop12 recurrence thm13a thm13b prop21 cor22 jtp kp eq13 gauss");
  verify->add_option("--zwin", o.zwin, "z-window half width for jtp and kp");
  verify->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* oracle = app.add_subcommand("oracle", "Fock enumeration against the quasiparticle sum");
  oracle->add_flag("--dump", o.dump, "list the states instead");

  auto* asympt = app.add_subcommand("asympt", "coefficient growth of the basic character");
  asympt->add_option("--nmax", o.nmax, "rows n = 0..nmax-1");

  CLI::Option* order_opt = nullptr;
  for (auto* sub : {series, verify, oracle, asympt}) {
    sub->add_option("--m", o.m, "m, or a range a..b for verify");
    if (sub != asympt) {
      sub->add_option("--s", o.s, "charge s, or a range");
      sub->add_option("--k", o.k, "k, or a range");
    }
    auto* opt = sub->add_option("--order", o.order, "truncation order in q-units");
    if (sub == asympt) order_opt = opt;
    sub->add_option("--format", o.format)->check(CLI::IsMember(formats));
    if (sub == verify || sub == oracle) {
      sub->add_option("--qbound", o.qbound, "q-bound of the Fock enumeration");
      sub->add_option("--max-nodes", o.max_nodes, "resource cap of the Fock enumeration");
      sub->add_flag("--timing", o.timing, "record wall time in the reports");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*series) return cmd_series(o, out);
    if (*verify) return cmd_verify(o, out);
    if (*oracle) return cmd_oracle(o, out);
    return cmd_asympt(o, out, order_opt->count() > 0);
  } catch (const ParseError& e) {
    err << "error: " << dsl::render_error(e, o.expr) << "\n";
    return kExitUsage;
  } catch (const ResourceLimit& e) {
    err << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace qchar::cli
