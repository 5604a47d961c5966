#include <catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qcluster/cli.hpp"
#include "qcluster/io.hpp"
#include "qcluster/qcluster.hpp"

using namespace qcluster;
using qcluster::io::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "qcluster");
  std::ostringstream out, err;
  const int code = cli::run_command_line(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qcluster_test_" + name);
}

}  // namespace

TEST_CASE("example13 prints the polynomial and its Euler characteristic") {
  const Outcome o = invoke({"example13"});
  REQUIRE(o.code == 0);
  CHECK(o.out.rfind("q^73 + 2q^72 + 4q^71", 0) == 0);
  CHECK(o.out.find("- 5q^58") != std::string::npos);
  CHECK(o.out.find("\nchi = -27\n") != std::string::npos);
  const Outcome five = invoke({"example13", "--r", "5"});
  REQUIRE(five.code == 0);
  CHECK(five.out.find("chi = 25") != std::string::npos);
  CHECK(five.out.find("- q^16") != std::string::npos);
  const Outcome js = invoke({"example13", "--format", "json"});
  const json doc = json::parse(js.out);
  CHECK(doc["chi"] == "-27");
  CHECK(doc["s"] == 98);
  CHECK(io::laurent_from_json(doc["poly"]) == closed_zbar_M6(10, 5));
}

TEST_CASE("grtable as JSON") {
  const Outcome o = invoke({"grtable", "--r", "2", "--n", "4", "--format", "json"});
  REQUIRE(o.code == 0);
  const json doc = json::parse(o.out);
  CHECK(doc["d1"] == 2);
  CHECK(doc["d2"] == 1);
  REQUIRE(doc["entries"].size() == 4);
  for (const auto& e : doc["entries"]) {
    const QHalfLaurent p = io::laurent_from_json(e["poly"]);
    CHECK(p == gr_table(2, 4).entry(e["e1"].get<std::int64_t>(), e["e2"].get<std::int64_t>()).laurent());
  }
  const Outcome text = invoke({"grtable", "--r", "2", "--n", "4"});
  CHECK(text.out.find("(1,1): q + 1") != std::string::npos);
}

TEST_CASE("simple commands") {
  CHECK(invoke({"cn", "--r", "10", "--n", "5"}).out == "c_5 = 980\n");
  const Outcome d = invoke({"dyck", "--r", "3", "--n", "5"});
  CHECK(d.out.find("word: hhvhhvhv") != std::string::npos);
  CHECK(invoke({"families", "--r", "3", "--n", "5"}).out == "families: 365\n");
  const Outcome listed = invoke({"families", "--r", "2", "--n", "4", "--list", "--format", "json"});
  CHECK(json::parse(listed.out)["families"].size() == 5);
  CHECK(invoke({"ffcount", "--p", "2", "--r", "2", "--n", "4", "--e1", "1", "--e2", "1"}).out == "3\n");
  CHECK(invoke({"ffstrata", "--p", "2", "--r", "2", "--n", "4", "--side", "zp", "--param", "2", "--s", "0"}).out == "1\n");
  const Outcome strata = invoke({"strata", "--r", "2", "--n", "4", "--e2", "1", "--closed", "--p", "0", "--format", "json"});
  CHECK(io::laurent_from_json(json::parse(strata.out)["poly"]) == QHalfLaurent(1));
}

TEST_CASE("xvar by both methods agree") {
  const Outcome a = invoke({"xvar", "--r", "3", "--n", "5", "--format", "json"});
  const Outcome b = invoke({"xvar", "--r", "3", "--n", "5", "--method", "enum", "--format", "json"});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  CHECK(io::torus_from_json(json::parse(a.out)) == xvar_recursive(3, 5));
}

TEST_CASE("errors are one-line JSON documents with the code as exit status") {
  const Outcome o = invoke({"ffcount", "--p", "4", "--r", "2", "--n", "4", "--e1", "0", "--e2", "0"});
  CHECK(o.code == 2);
  CHECK(o.out.empty());
  REQUIRE(std::count(o.err.begin(), o.err.end(), '\n') == 1);
  const json doc = json::parse(o.err);
  CHECK(doc["error"] == "InvalidParameter");
  CHECK(doc["code"] == 2);
  CHECK(invoke({"verify", "--suite", "nonsense"}).code == 2);
  CHECK(invoke({"families", "--r", "3", "--n", "5", "--budget", "10"}).code == 10);
  CHECK(invoke({"xvar", "--r", "3", "--n", "6", "--max-terms", "5"}).code == 10);
  CHECK(invoke({"bogus"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"dyck", "--r", "3", "--n", "3"}).code == 2);
}

TEST_CASE("output does not depend on the worker count") {
  const Outcome one = invoke({"xvar", "--r", "4", "--n", "5", "--method", "enum", "--workers", "1"});
  const Outcome four = invoke({"xvar", "--r", "4", "--n", "5", "--method", "enum", "--workers", "4"});
  CHECK(one.out == four.out);
  CHECK(invoke({"ffcount", "--p", "2", "--r", "3", "--n", "5", "--e1", "3", "--e2", "1", "--workers", "3"}).out ==
        invoke({"ffcount", "--p", "2", "--r", "3", "--n", "5", "--e1", "3", "--e2", "1"}).out);
  CHECK(invoke({"grtable", "--r", "3", "--n", "5"}).out == invoke({"grtable", "--r", "3", "--n", "5"}).out);
}

TEST_CASE("verify") {
  const Outcome list = invoke({"verify", "--list"});
  for (const auto& s : verify::suites()) CHECK(list.out.find(s.name) != std::string::npos);
  const Outcome bridge = invoke({"verify", "--suite", "bridge", "--r", "2", "--n", "6"});
  CHECK(bridge.code == 0);
  CHECK(bridge.out.rfind("PASS bridge", 0) == 0);
  CHECK(invoke({"verify", "--suite", "dyck", "--format", "json"}).code == 0);
}

TEST_CASE("module files round-trip") {
  const auto path = temp_file("module.json");
  const Outcome w = invoke({"ffcount", "--p", "3", "--r", "2", "--n", "5", "--e1", "1", "--e2", "1", "--write-module", path.string()});
  REQUIRE(w.code == 0);
  const Outcome r = invoke({"ffcount", "--p", "3", "--r", "2", "--n", "5", "--e1", "1", "--e2", "1", "--module", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out == w.out);
  std::ifstream in(path);
  const ff::FFModule m = io::module_from_json(json::parse(in));
  CHECK(io::to_json(m) == io::to_json(ff::build_module(3, 2, 5)));
  std::filesystem::remove(path);

  const auto bad = temp_file("bad_module.json");
  std::ofstream(bad) << R"({"p":3,"r":2,"d1":3,"d2":2,"phis":[[[0,0,0],[0,0,0]],[[0,0,0],[0,0,0]]]})";
  CHECK(invoke({"ffcount", "--p", "3", "--r", "2", "--n", "5", "--e1", "1", "--e2", "1", "--module", bad.string()}).code != 0);
  std::filesystem::remove(bad);
}

TEST_CASE("--output writes to a file") {
  const auto path = temp_file("cn.txt");
  CHECK(invoke({"cn", "--r", "3", "--n", "5", "-o", path.string()}).out.empty());
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "c_5 = 21");
  std::filesystem::remove(path);
}

TEST_CASE("JSON round-trips") {
  const TorusElement x = xvar_recursive(3, 5);
  CHECK(io::torus_from_json(json::parse(io::to_json(x).dump())) == x);
  const QHalfLaurent p = closed_zbar_M6(5, 1).shifted(-3);
  CHECK(io::laurent_from_json(io::to_json(p)) == p);
  const ff::FFModule m = ff::build_module(2, 2, 6);
  CHECK(io::to_json(io::module_from_json(io::to_json(m))) == io::to_json(m));
}

TEST_CASE("the installed binary") {
  const char* bin = std::getenv("QCLUSTER_CLI");
  if (!bin) SKIP("QCLUSTER_CLI not set");
  const std::string cmd = std::string(bin) + " cn --r 4 --n 6 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::string output;
  char buf[256];
  while (fgets(buf, sizeof buf, pipe)) output += buf;
  CHECK(pclose(pipe) == 0);
  CHECK(output == "c_6 = 209\n");
  FILE* bad = popen((std::string(bin) + " ffcount --p 4 --r 2 --n 4 --e1 0 --e2 0 2>/dev/null").c_str(), "r");
  REQUIRE(bad);
  const int status = pclose(bad);
  CHECK(WEXITSTATUS(status) == 2);
}
