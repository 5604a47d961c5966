#pragma once

// Command-line front end. `run` dispatches a validated RunConfig and writes
// one document; `run_command_line` parses argv with CLI11 first. Failures
// print a one-line JSON error document and return the ErrorCode value.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcluster/cluster.hpp"
#include "qcluster/dyck.hpp"
#include "qcluster/error.hpp"
#include "qcluster/families.hpp"
#include "qcluster/ffield.hpp"
#include "qcluster/io.hpp"
#include "qcluster/laurent.hpp"
#include "qcluster/strata.hpp"
#include "qcluster/verify.hpp"

namespace qcluster::cli {

enum class Format { Text, Json };

struct RunConfig {
  std::string command;
  std::optional<int> r, n, e1, e2, p, s, param;
  std::string side = "zp";
  std::string method = "recursion";
  std::string build = "reflection";
  std::string suite;
  bool list = false;
  bool closed = false;
  std::uint64_t family_budget = kDefaultFamilyBudget;
  std::uint64_t subspace_budget = ff::CountOptions{}.budget;
  ComputeLimits limits;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  Format format = Format::Text;
  std::string output;
  std::string module_in;
  std::string module_out;
};

/// Default worker count from QCLUSTER_WORKERS, else 1.
inline unsigned default_workers() {
  if (const char* env = std::getenv("QCLUSTER_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1 && v <= 1024) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

namespace detail {

inline int need(const std::optional<int>& v, const char* flag) {
  if (!v) fail(ErrorCode::InvalidParameter, std::string("missing required option --") + flag);
  return *v;
}

inline void check_r(int r) { require(r >= 2 && r <= 1000, ErrorCode::InvalidParameter, "r must lie in [2, 1000]"); }

inline void check_n(int n, int lo) {
  require(n >= lo && n <= 64, ErrorCode::InvalidParameter,
          "n must lie in [" + std::to_string(lo) + ", 64] for this command");
}

inline ff::StratumSide parse_side(const std::string& side) {
  if (side == "z") return ff::StratumSide::Z;
  if (side == "zp") return ff::StratumSide::ZPrime;
  if (side == "zbar") return ff::StratumSide::ZBar;
  if (side == "zpbar") return ff::StratumSide::ZBarPrime;
  fail(ErrorCode::InvalidParameter, "side must be one of z, zp, zbar, zpbar");
}

struct Document {
  io::json json;
  std::string text;
};

inline ff::FFModule module_for(const RunConfig& cfg, int p, int r, int n) {
  if (!cfg.module_in.empty()) {
    std::ifstream in(cfg.module_in);
    require(in.good(), ErrorCode::InvalidParameter, "cannot open module file " + cfg.module_in);
    io::json doc;
    try {
      in >> doc;
    } catch (const io::json::exception& e) {
      fail(ErrorCode::InvalidParameter, std::string("module file is not JSON: ") + e.what());
    }
    ff::FFModule m = io::module_from_json(doc);
    const DimVector d = dim_vector(r, n);
    require(m.p == p && m.r == r && m.d1 == d.d1 && m.d2 == d.d2, ErrorCode::InvalidParameter,
            "module file does not match --p/--r/--n");
    require(ff::endomorphism_dimension(m) == 1, ErrorCode::ConstructionFailed, "module file fails the rigidity certificate");
    return m;
  }
  const auto method = cfg.build == "random" ? ff::BuildMethod::RandomSearch : ff::BuildMethod::Reflection;
  require(cfg.build == "random" || cfg.build == "reflection", ErrorCode::InvalidParameter,
          "--build must be reflection or random");
  ff::FFModule m = ff::build_module(p, r, n, method, cfg.seed);
  if (!cfg.module_out.empty()) {
    std::ofstream out(cfg.module_out);
    require(out.good(), ErrorCode::InvalidParameter, "cannot write module file " + cfg.module_out);
    out << io::to_json(m).dump() << '\n';
  }
  return m;
}

inline Document cmd_cn(const RunConfig& cfg) {
  const int r = need(cfg.r, "r"), n = need(cfg.n, "n");
  check_r(r);
  require(n >= 1 && n <= 100000, ErrorCode::InvalidParameter, "n must lie in [1, 100000]");
  const BigInt c = c_sequence(r, n);
  return {{{"r", r}, {"n", n}, {"c", c.get_str()}}, "c_" + std::to_string(n) + " = " + c.get_str() + "\n"};
}

inline Document cmd_dyck(const RunConfig& cfg) {
  const int r = need(cfg.r, "r"), n = need(cfg.n, "n");
  check_r(r);
  check_n(n, 4);
  const DyckPath path = build_dyck(r, n);
  std::ostringstream text;
  text << "D_" << n << " for r=" << r << ": " << path.width() << " x " << path.height() << ", " << path.edge_count()
       << " edges\n";
  text << "word: " << path.word() << "\n";
  text << "v_index:";
  for (int j = 1; j <= path.marked_count(); ++j) text << ' ' << path.v_index(j);
  text << "\n";
  if (path.width() <= 200 && path.height() <= 100) text << render_staircase(path);
  return {io::to_json(path), text.str()};
}

inline Document cmd_families(const RunConfig& cfg) {
  const int r = need(cfg.r, "r"), n = need(cfg.n, "n");
  check_r(r);
  check_n(n, 4);
  const DyckPath path = build_dyck(r, n);
  io::json doc{{"r", r}, {"n", n}};
  std::ostringstream text;
  if (!cfg.list) {
    const std::uint64_t count = count_families(path, cfg.family_budget);
    doc["count"] = count;
    text << "families: " << count << "\n";
    return {doc, text.str()};
  }
  io::json list = io::json::array();
  std::uint64_t count = 0;
  for_each_family(
      path,
      [&](const Family& f) {
        ++count;
        list.push_back(io::to_json(f));
        text << '{';
        bool first = true;
        for (const auto& s : f.subpaths) {
          text << (first ? "" : ", ") << "alpha(" << s.i << "," << s.k << ")" << ':' << to_string(s.color);
          first = false;
        }
        for (int e : f.edges) {
          text << (first ? "" : ", ") << "alpha_" << e;
          first = false;
        }
        text << "}\n";
      },
      cfg.family_budget);
  doc["count"] = count;
  doc["families"] = std::move(list);
  text << "families: " << count << "\n";
  return {doc, text.str()};
}

inline Document cmd_xvar(const RunConfig& cfg) {
  const int r = need(cfg.r, "r"), n = need(cfg.n, "n");
  check_r(r);
  TorusElement x;
  if (cfg.method == "recursion") {
    check_n(n, 1);
    x = xvar_recursive(r, n, cfg.limits);
  } else if (cfg.method == "enum") {
    check_n(n, 4);
    // The family sum is q^{1/2} X_n.
    x = enum_xvar(r, n, {cfg.family_budget, cfg.workers}).shifted(-1);
  } else {
    fail(ErrorCode::InvalidParameter, "--method must be recursion or enum");
  }
  std::ostringstream text;
  for (auto it = x.terms().rbegin(); it != x.terms().rend(); ++it)
    text << "X1^" << it->first.x1 << " X2^" << it->first.x2 << ": " << to_pretty(it->second) << "\n";
  return {io::to_json(x), text.str()};
}

inline Document cmd_grtable(const RunConfig& cfg) {
  const int r = need(cfg.r, "r"), n = need(cfg.n, "n");
  check_r(r);
  check_n(n, 3);
  const GrTable table = gr_table(r, n, cfg.limits);
  std::ostringstream text;
  text << "M(" << n << ") for r=" << r << ", dimension vector (" << table.d1 << "," << table.d2 << ")\n";
  for (const auto& [e, poly] : table.entries)
    text << "(" << e.first << "," << e.second << "): " << to_pretty(poly.laurent()) << "\n";
  return {io::to_json(table), text.str()};
}

inline Document cmd_strata(const RunConfig& cfg) {
  const int r = need(cfg.r, "r"), n = need(cfg.n, "n"), e2 = need(cfg.e2, "e2");
  check_r(r);
  check_n(n, 3);
  const GrTable table = gr_table(r, n, cfg.limits);
  const StrataTable st = strata_from_gr(table, e2);
  if (cfg.p) require(*cfg.p >= 0 && *cfg.p <= st.d1, ErrorCode::InvalidParameter, "p must lie in [0, d1]");
  io::json doc = io::to_json(st);
  const auto& side = cfg.closed ? st.closed : st.open;
  const char* label = cfg.closed ? "Zbar'" : "Z'";
  std::ostringstream text;
  for (const auto& [p, poly] : side) {
    if (cfg.p && p != *cfg.p) continue;
    text << label << "_{" << p << "," << st.s() << "}: " << to_pretty(poly) << "\n";
  }
  if (cfg.p) {
    io::json filtered{{"e2", st.e2}, {"d1", st.d1}, {"d2", st.d2}, {"s", st.s()}, {"p", *cfg.p},
                      {"closed", cfg.closed}, {"poly", io::to_json(side.at(*cfg.p))}};
    doc = std::move(filtered);
  }
  return {doc, text.str()};
}

inline Document cmd_example13(const RunConfig& cfg) {
  const int r = cfg.r.value_or(10);
  check_r(r);
  const int p = cfg.p.value_or(r == 10 ? 5 : 1);
  require(p >= 0, ErrorCode::InvalidParameter, "p must be nonnegative");
  const QHalfLaurent poly = closed_zbar_M6(r, p);
  const BigInt chi = euler_char(poly);
  const std::int64_t s = static_cast<std::int64_t>(r) * r - 2;
  io::json doc{{"r", r}, {"p", p}, {"s", s}, {"poly", io::to_json(poly)}, {"chi", chi.get_str()}};
  return {doc, to_pretty(poly) + "\nchi = " + chi.get_str() + "\n"};
}

inline Document cmd_ffcount(const RunConfig& cfg) {
  const int p = need(cfg.p, "p"), r = need(cfg.r, "r"), n = need(cfg.n, "n");
  const int e1 = need(cfg.e1, "e1"), e2 = need(cfg.e2, "e2");
  ff::check_module_parameters(p, r, n);
  const ff::FFModule m = module_for(cfg, p, r, n);
  const BigInt count = ff::count_gr(m, e1, e2, {cfg.subspace_budget, cfg.workers});
  io::json doc{{"p", p}, {"r", r}, {"n", n}, {"e1", e1}, {"e2", e2}, {"count", count.get_str()}};
  return {doc, count.get_str() + "\n"};
}

inline Document cmd_ffstrata(const RunConfig& cfg) {
  const int p = need(cfg.p, "p"), r = need(cfg.r, "r"), n = need(cfg.n, "n");
  const int param = need(cfg.param, "param"), s = need(cfg.s, "s");
  ff::check_module_parameters(p, r, n);
  const ff::StratumSide side = parse_side(cfg.side);
  const ff::FFModule m = module_for(cfg, p, r, n);
  const BigInt count = ff::count_strata(m, side, param, s, {cfg.subspace_budget, cfg.workers});
  io::json doc{{"p", p}, {"r", r}, {"n", n}, {"side", cfg.side}, {"param", param}, {"s", s}, {"count", count.get_str()}};
  return {doc, count.get_str() + "\n"};
}

inline Document cmd_verify(const RunConfig& cfg, bool& all_passed) {
  all_passed = true;
  if (cfg.list) {
    io::json list = io::json::array();
    std::ostringstream text;
    for (const auto& s : verify::suites()) {
      list.push_back({{"name", s.name}, {"summary", s.summary}});
      text << s.name << "  " << s.summary << "\n";
    }
    return {{{"suites", list}}, text.str()};
  }
  require(!cfg.suite.empty(), ErrorCode::InvalidParameter, "verify needs --suite NAME (or --list)");
  std::vector<const verify::Suite*> chosen;
  if (cfg.suite == "all") {
    for (const auto& s : verify::suites()) chosen.push_back(&s);
  } else {
    const verify::Suite* s = verify::find_suite(cfg.suite);
    require(s != nullptr, ErrorCode::InvalidParameter, "unknown suite " + cfg.suite);
    chosen.push_back(s);
  }
  verify::SuiteParams params;
  params.r = cfg.r;
  params.n = cfg.n;
  params.p = cfg.p;
  params.seed = cfg.seed;
  params.workers = cfg.workers;
  params.budget = cfg.family_budget;
  io::json results = io::json::array();
  std::ostringstream text;
  for (const verify::Suite* s : chosen) {
    const verify::SuiteReport rep = s->run(params);
    all_passed = all_passed && rep.ok();
    io::json entry{{"suite", rep.name}, {"cases", rep.cases}, {"failures", rep.failures}, {"passed", rep.ok()}};
    if (!rep.ok()) entry["first_failure"] = rep.first_failure;
    results.push_back(std::move(entry));
    text << (rep.ok() ? "PASS " : "FAIL ") << rep.name << " (" << rep.cases << " cases";
    if (!rep.ok()) text << ", " << rep.failures << " failed; first: " << rep.first_failure;
    text << ")\n";
  }
  return {{{"results", results}, {"passed", all_passed}}, text.str()};
}

inline void emit(const RunConfig& cfg, const std::string& body, std::ostream& out) {
  if (cfg.output.empty()) {
    out << body;
    return;
  }
  std::ofstream file(cfg.output);
  require(file.good(), ErrorCode::InvalidParameter, "cannot write " + cfg.output);
  file << body;
}

}  // namespace detail

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"cn",      "dyck",      "families", "xvar",     "grtable",
                                                 "strata",  "example13", "ffcount",  "ffstrata", "verify"};
  return names;
}

/// Runs one command. Returns 0 on success, otherwise the ErrorCode value.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    require(cfg.workers >= 1, ErrorCode::InvalidParameter, "--workers must be at least 1");
    detail::Document doc;
    bool passed = true;
    if (cfg.command == "cn") doc = detail::cmd_cn(cfg);
    else if (cfg.command == "dyck") doc = detail::cmd_dyck(cfg);
    else if (cfg.command == "families") doc = detail::cmd_families(cfg);
    else if (cfg.command == "xvar") doc = detail::cmd_xvar(cfg);
    else if (cfg.command == "grtable") doc = detail::cmd_grtable(cfg);
    else if (cfg.command == "strata") doc = detail::cmd_strata(cfg);
    else if (cfg.command == "example13") doc = detail::cmd_example13(cfg);
    else if (cfg.command == "ffcount") doc = detail::cmd_ffcount(cfg);
    else if (cfg.command == "ffstrata") doc = detail::cmd_ffstrata(cfg);
    else if (cfg.command == "verify") doc = detail::cmd_verify(cfg, passed);
    else fail(ErrorCode::InvalidParameter, "unknown command '" + cfg.command + "'");
    detail::emit(cfg, cfg.format == Format::Json ? doc.json.dump() + "\n" : doc.text, out);
    if (!passed) fail(ErrorCode::VerificationFailed, "suite " + cfg.suite + " reported failures");
    return 0;
  } catch (const Error& e) {
    err << io::error_document(e).dump() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::bad_alloc&) {
    const Error e(ErrorCode::BudgetExceeded, "out of memory");
    err << io::error_document(e).dump() << '\n';
    return static_cast<int>(e.code());
  }
}

/// Parses argv (without the program name handling; args[0] is the program).
inline int run_command_line(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  cfg.workers = default_workers();
  CLI::App app{"Rank-2 quantum cluster variables, quiver Grassmannians and strata of the r-Kronecker quiver"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--output,-o", cfg.output, "Write the document to this file");
  app.add_option("--workers", cfg.workers, "Worker threads (default: QCLUSTER_WORKERS or 1)");

  auto add_r = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--r", cfg.r, "Number of arrows (r >= 2)");
    if (required) o->required();
  };
  auto add_n = [&](CLI::App* sub) { sub->add_option("--n", cfg.n, "Index n")->required(); };
  auto add_limits = [&](CLI::App* sub) {
    sub->add_option("--max-terms", cfg.limits.max_terms, "Recursion term cap");
    sub->add_option("--max-coeff-bits", cfg.limits.max_coeff_bits, "Recursion coefficient-size cap");
  };
  auto add_module = [&](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "Prime field size")->required();
    add_r(sub, true);
    add_n(sub);
    sub->add_option("--budget", cfg.subspace_budget, "Cap on enumerated subspaces");
    sub->add_option("--module", cfg.module_in, "Read the module matrices from this JSON file");
    sub->add_option("--write-module", cfg.module_out, "Write the constructed module to this JSON file");
    sub->add_option("--build", cfg.build, "Construction: reflection or random")->check(CLI::IsMember({"reflection", "random"}));
    sub->add_option("--seed", cfg.seed, "Seed for random construction");
  };

  std::vector<CLI::App*> subs;
  auto* cn = app.add_subcommand("cn", "The integer c_n");
  add_r(cn, true);
  add_n(cn);
  auto* dyck = app.add_subcommand("dyck", "The maximal Dyck path D_n");
  add_r(dyck, true);
  add_n(dyck);
  auto* fam = app.add_subcommand("families", "Count or list compatible families on D_n");
  add_r(fam, true);
  add_n(fam);
  fam->add_flag("--list", cfg.list, "List every family");
  fam->add_option("--budget", cfg.family_budget, "Cap on the number of families");
  auto* xvar = app.add_subcommand("xvar", "The quantum cluster variable X_n");
  add_r(xvar, true);
  add_n(xvar);
  xvar->add_option("--method", cfg.method, "recursion or enum")->check(CLI::IsMember({"recursion", "enum"}));
  xvar->add_option("--budget", cfg.family_budget, "Cap on the number of families (enum)");
  add_limits(xvar);
  auto* gr = app.add_subcommand("grtable", "Quiver Grassmannian polynomials of M(n)");
  add_r(gr, true);
  add_n(gr);
  add_limits(gr);
  auto* strata = app.add_subcommand("strata", "Open or closed strata polynomials for fixed e2");
  add_r(strata, true);
  add_n(strata);
  strata->add_option("--e2", cfg.e2, "Fixed e2")->required();
  strata->add_option("--p", cfg.p, "Report only this stratum");
  strata->add_flag("--closed", cfg.closed, "Closed strata instead of open ones");
  add_limits(strata);
  auto* ex = app.add_subcommand("example13", "Closed-strata polynomial for M(6) with s = r^2 - 2");
  add_r(ex, false);
  ex->add_option("--p", cfg.p, "Stratum parameter (default 5 for r = 10, else 1)");
  auto* ffc = app.add_subcommand("ffcount", "Count F_p-points of a quiver Grassmannian of M(n)");
  add_module(ffc);
  ffc->add_option("--e1", cfg.e1, "e1")->required();
  ffc->add_option("--e2", cfg.e2, "e2")->required();
  auto* ffs = app.add_subcommand("ffstrata", "Count F_p-points of a stratum of M(n)");
  add_module(ffs);
  ffs->add_option("--side", cfg.side, "z, zp, zbar or zpbar")->required()->check(CLI::IsMember({"z", "zp", "zbar", "zpbar"}));
  ffs->add_option("--param", cfg.param, "Stratum parameter p")->required();
  ffs->add_option("--s", cfg.s, "Stratum parameter s")->required();
  auto* ver = app.add_subcommand("verify", "Run self-check suites");
  ver->add_option("--suite", cfg.suite, "Suite name, or all");
  ver->add_flag("--list", cfg.list, "List the suites");
  ver->add_option("--r", cfg.r, "Restrict to this r");
  ver->add_option("--n", cfg.n, "Restrict to this n");
  ver->add_option("--p", cfg.p, "Restrict to this prime");
  ver->add_option("--seed", cfg.seed, "Seed for randomized suites");
  ver->add_option("--budget", cfg.family_budget, "Cap on the number of families");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    const Error wrapped(ErrorCode::InvalidParameter, e.what());
    err << io::error_document(wrapped).dump() << '\n';
    return static_cast<int>(wrapped.code());
  }
  for (CLI::App* sub : app.get_subcommands()) cfg.command = sub->get_name();
  cfg.format = format == "json" ? Format::Json : Format::Text;
  return run(cfg, out, err);
}

}  // namespace qcluster::cli
