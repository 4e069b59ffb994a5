#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "tjl/abelian.hpp"
#include "tjl/data.hpp"
#include "tjl/harness.hpp"

using namespace tjl;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const char* exe = std::getenv("TJL_CLI");
  REQUIRE_MESSAGE(exe, "TJL_CLI must point at the tjl binary");
  std::string cmd = std::string(exe) + " " + args + " 2>/dev/null";
  Run r;
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, n);
  int st = pclose(f);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("reference tables parse and round trip") {
  ReferenceTable T = load_reference(-2);
  CHECK(T.rows.size() >= 40);
  const ReferenceRow* r = T.find(11);
  REQUIRE(r);
  REQUIRE(r->gen);
  CHECK(to_string(*r->gen) == "3+1t");
  REQUIRE(r->group("Y0(p)"));
  CHECK(*r->group("Y0(p)") == "(0, 0), (2, 3), (5, 1)");
  CHECK(r->group("nonexistent") == nullptr);
  ReferenceTable U = ReferenceTable::parse(T.serialize(), -2);
  CHECK(U.serialize() == T.serialize());
  CHECK(U.checksum() == T.checksum());
  CHECK(T.checksum() == crc32_of(T.serialize()));

  ReferenceTable W = load_reference(-491);
  CHECK(W.rows.size() == 34);
  int infinite = 0;
  for (auto& row : W.rows) infinite += row.infinite;
  CHECK(infinite > 0);
  CHECK(ReferenceTable::parse(W.serialize(), -491).serialize() == W.serialize());

  CHECK_THROWS(ReferenceTable::parse("Y0(p) (2, 1)\n", -2));
  CHECK_THROWS(ReferenceTable::parse("row 11 3+1t\nY0(p) (2\n", -2));
}

TEST_CASE("split-side levels") {
  auto L = split_side_levels(parse_quad("3+1t"));
  REQUIRE(L.size() == 4);
  CHECK(L[0] == std::make_pair(std::string("Y0(p)"), std::string("3+1t")));
  CHECK(L[3].second == "3*3+1t");
}

TEST_CASE("row status names") {
  for (auto s : {RowStatus::exact, RowStatus::odd_match, RowStatus::mismatch, RowStatus::skipped})
    CHECK(parse_row_status(to_string(s)) == s);
  CHECK_THROWS(parse_row_status("maybe"));
}

TEST_CASE("reproduction up to norm 20") {
  ReproOptions o;
  o.max_norm = 20;
  ReproReport r = reproduce_tables(o);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.ok());
  for (auto& row : r.rows) CHECK(row.status == RowStatus::exact);
  CHECK(r.rows[2].ratio == "2^6");
  // the content hash ignores runtimes and thread counts
  o.threads = 1;
  ReproReport r1 = reproduce_tables(o);
  CHECK(report_hash(r1) == report_hash(r));
  ReproReport back = report_from_json(report_to_json(r));
  CHECK(report_hash(back) == report_hash(r));
  CHECK(report_to_text(r).find("row 19 1+3t exact A_p=2^6") != std::string::npos);
}

TEST_CASE("empty and unavailable reports") {
  ReproOptions o;
  o.max_norm = 5;
  ReproReport r = reproduce_tables(o);
  CHECK(r.rows.empty());
  CHECK(report_to_json(r) == "{\"rows\":[]}");
  CHECK(report_from_json("{\"rows\":[]}").rows.empty());

  ReproOptions w;
  w.d = -491;
  w.max_norm = 1000;
  ReproReport q = reproduce_tables(w);
  CHECK(q.self_check_ok);
  CHECK(q.ok());
  for (auto& row : q.rows) {
    CHECK(row.status == RowStatus::skipped);
    CHECK(row.note == "no presentation");
  }
}

TEST_CASE("export") {
  ReproOptions o;
  o.max_norm = 12;
  ReproReport r = reproduce_tables(o);
  std::string path = "test_harness_report.json";
  export_report(r, path, "json");
  CHECK(report_hash(report_from_json(slurp(path))) == report_hash(r));
  export_report(r, "test_harness_report.txt", "text");
  CHECK(slurp("test_harness_report.txt") == report_to_text(r));
  CHECK_THROWS(export_report(r, path, "xml"));
  std::remove(path.c_str());
  std::remove("test_harness_report.txt");
}

TEST_CASE("command line: usage errors") {
  CHECK(cli("").status == 2);
  CHECK(cli("bogus").status == 2);
  CHECK(cli("homology").status == 2);
  CHECK(cli("homology --level 3+x").status == 2);
  CHECK(cli("scan --predicate eis7").status == 2);
  CHECK(cli("hecke --level 3+1t --prime 3+1t").status == 2);
  CHECK(cli("homology --d -491 --level 2").status == 2);
  CHECK(cli("--help").status == 0);
}

TEST_CASE("command line: computations") {
  auto h = cli("homology --level 3+1t --json");
  REQUIRE(h.status == 0);
  auto j = nlohmann::json::parse(h.out);
  CHECK(j["schema"] == 1);
  CHECK(j["level"] == "3+1t");
  CHECK(j["groups"]["H1"] == nlohmann::json::parse("[[0,0],[2,3],[5,1]]"));

  auto s = cli("scan --predicate eis3 --bound 617");
  CHECK(s.status == 0);
  CHECK(s.out == "163\n523\n");

  auto jl = cli("jl-ratio --p 3+4t --json");
  REQUIRE(jl.status == 0);
  CHECK(nlohmann::json::parse(jl.out)["ratios"]["A_p"] == "2^6");

  auto nf = cli("newforms --level 3*3-2t --S 3-2t --invert 2,5");
  CHECK(nf.status == 0);
  CHECK(nf.out.find("(0, 0), (3, 1)") != std::string::npos);

  auto hk = cli("hecke --level 1-1t*5+6t --prime 3-1t --mod 3");
  CHECK(hk.status == 0);
  CHECK(hk.out.find("charpoly mod 3:") != std::string::npos);

  auto dec = cli("decompose --level 1-9t --ell 3 --json");
  REQUIRE(dec.status == 0);
  auto jd = nlohmann::json::parse(dec.out);
  REQUIRE(jd["ideals"].size() == 1);
  CHECK(jd["ideals"][0]["congruence_image"] == "81");

  CHECK(cli("scattering-check --trials 10").status == 0);
  CHECK(cli("field --prime 3").out.find("split") != std::string::npos);
}

TEST_CASE("command line: reproduce end to end") {
  std::string path = "test_harness_cli.json";
  auto r = cli("reproduce --max-norm 20 --out " + path + " --format json");
  CHECK(r.status == 0);
  ReproReport rep = report_from_json(slurp(path));
  CHECK(rep.rows.size() == 3);
  CHECK(rep.ok());
  ReproOptions o;
  o.max_norm = 20;
  CHECK(report_hash(rep) == report_hash(reproduce_tables(o)));
  std::remove(path.c_str());
  CHECK(cli("reproduce --d -491").status == 0);
  CHECK(cli("reproduce --max-norm 5 --json").out == "{\"rows\":[]}\n");
}
