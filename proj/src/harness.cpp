#include "tjl/harness.hpp"

#include <omp.h>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "tjl/abelian.hpp"
#include "tjl/bianchi.hpp"
#include "tjl/data.hpp"
#include "tjl/eiscan.hpp"
#include "tjl/fp.hpp"
#include "tjl/hecke.hpp"
#include "tjl/jltor.hpp"
#include "tjl/scatter.hpp"

namespace tjl {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------- reference tables

const std::string* ReferenceRow::group(const std::string& name) const {
  for (auto& [n, g] : groups)
    if (n == name) return &g;
  return nullptr;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n"), b = s.find_last_not_of(" \t\r\n");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

long leading_number(const std::string& key) {
  size_t i = 0;
  while (i < key.size() && std::isdigit(static_cast<unsigned char>(key[i]))) ++i;
  if (i == 0) throw std::invalid_argument("row key must start with a norm: " + key);
  return std::stol(key.substr(0, i));
}

}  // namespace

ReferenceTable ReferenceTable::parse(const std::string& text, long d) {
  ReferenceTable T;
  T.d = d;
  std::istringstream in(text);
  std::string line;
  ReferenceRow* cur = nullptr;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      if (T.rows.empty()) T.header.push_back(t);
      continue;
    }
    if (t.rfind("row ", 0) == 0) {
      ReferenceRow r;
      std::string rest = trim(t.substr(4));
      size_t colon = rest.find(':');
      if (colon != std::string::npos) {
        r.key = trim(rest.substr(0, colon));
        std::istringstream ds(rest.substr(colon + 1));
        std::string tok;
        while (ds >> tok) {
          if (tok == "inf") {
            r.infinite = true;
            continue;
          }
          size_t caret = tok.find('^');
          long p = std::stol(tok.substr(0, caret));
          int e = caret == std::string::npos ? 1 : std::stoi(tok.substr(caret + 1));
          r.divisors.emplace_back(p, e);
        }
      } else {
        std::istringstream rs(rest);
        std::string g;
        rs >> r.key >> g;
        if (!g.empty()) r.gen = parse_quad(g);
      }
      r.norm = leading_number(r.key);
      T.rows.push_back(std::move(r));
      cur = &T.rows.back();
      continue;
    }
    if (!cur) throw std::invalid_argument("group line before any row: " + t);
    size_t sp = t.find(' ');
    if (sp == std::string::npos) throw std::invalid_argument("bad group line: " + t);
    std::string name = t.substr(0, sp), inv = trim(t.substr(sp + 1));
    FgAbGroup::parse(inv);  // validates
    cur->groups.emplace_back(name, inv);
  }
  return T;
}

std::string ReferenceTable::serialize() const {
  std::string s;
  for (auto& h : header) s += h + "\n";
  for (auto& r : rows) {
    s += "\n";
    if (!r.divisors.empty() || r.infinite || (r.groups.empty() && !r.gen)) {
      s += "row " + r.key + " :";
      if (r.infinite) s += " inf";
      for (auto [p, e] : r.divisors) s += " " + std::to_string(p) + (e > 1 ? "^" + std::to_string(e) : "");
      s += "\n";
      continue;
    }
    s += "row " + r.key + (r.gen ? " " + to_string(*r.gen) : "") + "\n";
    for (auto& [n, g] : r.groups) s += n + " " + g + "\n";
  }
  return s;
}

uint32_t ReferenceTable::checksum() const { return crc32_of(serialize()); }

const ReferenceRow* ReferenceTable::find(long norm, const QuadInt* gen) const {
  for (auto& r : rows)
    if (r.norm == norm && (!gen || (r.gen && *r.gen == *gen))) return &r;
  return nullptr;
}

ReferenceTable load_reference(long d) {
  return ReferenceTable::parse(data_file("reference_d" + std::to_string(d) + ".txt"), d);
}

std::vector<std::pair<std::string, std::string>> split_side_levels(const QuadInt& p) {
  std::string g = to_string(p);
  return {{"Y0(p)", g}, {"Y0(pi*p)", "1+1t*" + g}, {"Y0(pibar*p)", "1-1t*" + g}, {"Y0(3*p)", "3*" + g}};
}

// ---------------------------------------------------------------- reproduction

std::string to_string(RowStatus s) {
  switch (s) {
    case RowStatus::exact: return "exact";
    case RowStatus::odd_match: return "odd-match";
    case RowStatus::mismatch: return "mismatch";
    case RowStatus::skipped: return "skipped";
  }
  return "";
}

RowStatus parse_row_status(const std::string& s) {
  for (auto st : {RowStatus::exact, RowStatus::odd_match, RowStatus::mismatch, RowStatus::skipped})
    if (to_string(st) == s) return st;
  throw std::invalid_argument("unknown row status: " + s);
}

bool ReproReport::ok() const {
  if (!self_check_ok) return false;
  for (auto& r : rows)
    if (r.status == RowStatus::mismatch) return false;
  return true;
}

namespace {

RowStatus compare_groups(const FgAbGroup& expected, const FgAbGroup& computed) {
  if (expected.same_invariants(computed)) return RowStatus::exact;
  std::vector<Int> two{Int(2)};
  if (localize_away(expected, two).same_invariants(localize_away(computed, two))) return RowStatus::odd_match;
  return RowStatus::mismatch;
}

RowStatus worse(RowStatus a, RowStatus b) { return static_cast<int>(a) >= static_cast<int>(b) ? a : b; }

std::shared_ptr<const GroupPresentation> presentation_for(long d, const std::string& path) {
  if (!path.empty()) return std::make_shared<const GroupPresentation>(load_presentation(path));
  if (!has_bundled_presentation(d))
    throw std::invalid_argument("no presentation for d = " + std::to_string(d) + "; supply --presentation");
  return std::make_shared<const GroupPresentation>(bundled_presentation(d));
}

}  // namespace

ReproReport reproduce_tables(const ReproOptions& opt) {
  ReproReport rep;
  rep.d = opt.d;
  rep.max_norm = opt.max_norm;
  rep.deep = opt.deep;
  ReferenceTable T = load_reference(opt.d);
  std::string cfg = "d=" + std::to_string(opt.d) + ";max=" + std::to_string(opt.max_norm) +
                    ";deep=" + (opt.deep ? "1" : "0") + ";ref=" + hex32(T.checksum());
  bool have = has_bundled_presentation(opt.d);
  std::shared_ptr<const GroupPresentation> P;
  if (have) {
    P = presentation_for(opt.d, "");
    cfg += ";pres=" + P->hash();
  }
  rep.config_hash = hex32(crc32_of(cfg));

  if (opt.d == -491) {
    // every finite row must list 13
    bool ok = true;
    int finite = 0;
    for (auto& r : T.rows) {
      if (r.infinite) continue;
      ++finite;
      bool has13 = false;
      for (auto [p, e] : r.divisors) has13 |= p == 13;
      ok &= has13;
    }
    rep.self_check_ok = ok;
    rep.self_check = std::string(ok ? "13 divides" : "13 is missing from") + " the odd part of all " +
                     std::to_string(finite) + " finite rows";
  }

  std::vector<const ReferenceRow*> todo;
  for (auto& r : T.rows)
    if (r.norm <= opt.max_norm) todo.push_back(&r);
  rep.rows.resize(todo.size());
  if (todo.empty()) return rep;
  std::unique_ptr<HomologyCache> cache;
  if (P) cache = std::make_unique<HomologyCache>(P);

  int threads = opt.threads > 0 ? opt.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (size_t i = 0; i < todo.size(); ++i) {
    const ReferenceRow& ref = *todo[i];
    ReproRow& row = rep.rows[i];
    row.key = ref.key;
    row.norm = ref.norm;
    row.gen = ref.gen ? to_string(*ref.gen) : "";
    if (!cache || !ref.gen) {
      row.status = RowStatus::skipped;
      row.note = "no presentation";
      continue;
    }
    if (ref.norm > 100 && !opt.deep) {
      row.status = RowStatus::skipped;
      row.note = "needs --deep";
      continue;
    }
    auto t0 = std::chrono::steady_clock::now();
    try {
      std::map<std::string, Int> orders;
      bool finite = true;
      for (auto& [name, level] : split_side_levels(*ref.gen)) {
        GroupCheck gc;
        gc.name = name;
        gc.level = level;
        const std::string* e = ref.group(name);
        auto H = cache->get(level);
        gc.computed = H->H1().to_string();
        if (e) {
          gc.expected = *e;
          gc.status = compare_groups(FgAbGroup::parse(*e), H->H1());
        } else {
          gc.status = RowStatus::skipped;
        }
        row.status = worse(row.status, gc.status);
        finite &= H->H1().is_finite();
        if (H->H1().is_finite()) orders[name] = H->H1().order();
        row.groups.push_back(std::move(gc));
      }
      const std::string* qb = ref.group("YB0(p)");
      if (finite && qb) {
        FgAbGroup B = FgAbGroup::parse(*qb);
        if (B.is_finite()) {
          Rational A = Rational(B.order() * orders["Y0(pi*p)"] * orders["Y0(pi*p)"] * orders["Y0(pibar*p)"] *
                                orders["Y0(pibar*p)"]) /
                       Rational(orders["Y0(3*p)"] * ipow(orders["Y0(p)"], 4));
          row.ratio = rational_string(A);
        }
      }
      if (row.status == RowStatus::odd_match) row.note = "2-part differs (orbifold prime)";
    } catch (const std::exception& ex) {
      row.status = RowStatus::skipped;
      row.note = std::string("error: ") + ex.what();
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (opt.row_budget_seconds > 0 && row.seconds > opt.row_budget_seconds)
      row.note += (row.note.empty() ? "" : "; ") + std::string("over time budget");
  }
  return rep;
}

namespace {

json report_json(const ReproReport& r, bool with_times) {
  if (r.rows.empty() && r.self_check.empty()) return json{{"rows", json::array()}};
  json j;
  j["schema"] = 1;
  j["d"] = r.d;
  j["max_norm"] = r.max_norm;
  j["deep"] = r.deep;
  j["config_hash"] = r.config_hash;
  j["self_check"] = r.self_check;
  j["self_check_ok"] = r.self_check_ok;
  j["rows"] = json::array();
  for (auto& row : r.rows) {
    json jr;
    jr["key"] = row.key;
    jr["norm"] = row.norm;
    jr["gen"] = row.gen;
    jr["status"] = to_string(row.status);
    jr["ratio"] = row.ratio;
    jr["note"] = row.note;
    jr["seconds"] = with_times ? row.seconds : 0.0;
    jr["groups"] = json::array();
    for (auto& g : row.groups)
      jr["groups"].push_back({{"name", g.name},
                              {"level", g.level},
                              {"expected", g.expected},
                              {"computed", g.computed},
                              {"status", to_string(g.status)}});
    j["rows"].push_back(jr);
  }
  return j;
}

}  // namespace

std::string report_hash(const ReproReport& r) { return hex32(crc32_of(report_json(r, false).dump())); }

std::string report_to_json(const ReproReport& r) { return report_json(r, true).dump(); }

std::string report_to_text(const ReproReport& r) {
  std::ostringstream s;
  s << "# reproduction d=" << r.d << " max_norm=" << r.max_norm << (r.deep ? " deep" : "") << " config "
    << r.config_hash << "\n";
  if (!r.self_check.empty()) s << "# self-check " << (r.self_check_ok ? "ok" : "FAILED") << ": " << r.self_check << "\n";
  for (auto& row : r.rows) {
    s << "row " << row.key << (row.gen.empty() ? "" : " " + row.gen) << " " << to_string(row.status);
    if (!row.ratio.empty()) s << " A_p=" << row.ratio;
    if (!row.note.empty()) s << " [" << row.note << "]";
    s << "\n";
    for (auto& g : row.groups) {
      s << "  " << g.name << " " << g.computed << "  " << to_string(g.status);
      if (g.status != RowStatus::exact && !g.expected.empty()) s << " (table: " << g.expected << ")";
      s << "\n";
    }
  }
  return s.str();
}

ReproReport report_from_json(const std::string& text) {
  json j = json::parse(text);
  ReproReport r;
  r.d = j.value("d", -2L);
  r.max_norm = j.value("max_norm", 0L);
  r.deep = j.value("deep", false);
  r.config_hash = j.value("config_hash", std::string());
  r.self_check = j.value("self_check", std::string());
  r.self_check_ok = j.value("self_check_ok", true);
  for (auto& jr : j.at("rows")) {
    ReproRow row;
    row.key = jr.at("key");
    row.norm = jr.at("norm");
    row.gen = jr.value("gen", std::string());
    row.status = parse_row_status(jr.at("status"));
    row.ratio = jr.value("ratio", std::string());
    row.note = jr.value("note", std::string());
    row.seconds = jr.value("seconds", 0.0);
    for (auto& g : jr.value("groups", json::array()))
      row.groups.push_back({g.at("name"), g.at("level"), g.at("expected"), g.at("computed"),
                            parse_row_status(g.at("status"))});
    r.rows.push_back(std::move(row));
  }
  return r;
}

void export_report(const ReproReport& r, const std::string& path, const std::string& format) {
  std::string body;
  if (format == "json")
    body = report_to_json(r) + "\n";
  else if (format == "text")
    body = report_to_text(r);
  else
    throw std::invalid_argument("unknown report format: " + format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
}

// ---------------------------------------------------------------- command line

namespace {

json group_json(const FgAbGroup& G) {
  json a = json::array();
  a.push_back({0, G.free_rank()});
  for (auto& [d, m] : G.prime_power_counts()) {
    if (fits_long(d))
      a.push_back({to_long(d), m});
    else
      a.push_back({d.get_str(), m});
  }
  return a;
}

std::string field_name(long d) { return "Q(sqrt(" + std::to_string(d) + "))"; }

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ';' || c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct Common {
  long d = -2;
  std::string presentation;
  bool json = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--d", c.d, "field discriminant data (negative squarefree)")->capture_default_str();
  sub->add_option("--presentation", c.presentation, "presentation file (JSON)");
  sub->add_flag("--json", c.json, "JSON output");
}

// thrown for mathematical failures that should give exit status 1
struct Mismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int cmd_field(const Common& c, long prime) {
  FieldSpec F = FieldSpec::make(c.d);
  std::vector<long> ps;
  if (prime > 0) {
    if (!is_prime(prime)) throw std::invalid_argument("--prime must be a rational prime");
    ps.push_back(prime);
  } else {
    for (long p = 2; p <= 20; ++p)
      if (is_prime(p)) ps.push_back(p);
  }
  json j{{"schema", 1}, {"field", field_name(c.d)}, {"d", c.d}, {"theta", F.theta_convention()},
         {"class_number", F.class_number}, {"euclidean", F.euclidean}, {"w", F.w}};
  j["primes"] = json::array();
  for (long p : ps) {
    json jp{{"p", p}, {"factors", json::array()}};
    for (auto& pf : prime_factor(F, p))
      jp["factors"].push_back({{"gen", to_string(pf.ideal.gen)},
                               {"norm", pf.ideal.norm.get_str()},
                               {"residue_size", pf.residue_size},
                               {"splitting", to_string(pf.splitting)}});
    j["primes"].push_back(jp);
  }
  if (c.json) {
    std::cout << j.dump() << "\n";
    return 0;
  }
  std::cout << "field " << field_name(c.d) << ", " << F.theta_convention() << ", class number " << F.class_number
            << ", w = " << F.w << (F.euclidean ? ", norm-Euclidean" : "") << "\n";
  for (auto& jp : j["primes"]) {
    std::cout << jp["p"].get<long>() << ":";
    for (auto& f : jp["factors"])
      std::cout << " (" << f["gen"].get<std::string>() << ") norm " << f["norm"].get<std::string>() << " "
                << f["splitting"].get<std::string>() << ";";
    std::cout << "\n";
  }
  return 0;
}

int cmd_homology(const Common& c, const std::string& level) {
  HomologyCache cache(presentation_for(c.d, c.presentation));
  auto H = cache.get(level);
  CongruenceData C = congruence_quotient(*H);
  EssentialData E = essential_homology(*H, C);
  json j{{"schema", 1}, {"field", field_name(c.d)}, {"level", to_string(H->level().gen)}};
  j["norm"] = H->level().norm.get_str();
  j["index"] = H->cosets().size();
  j["groups"] = {{"H1", group_json(H->H1())}, {"H1_E", group_json(E.group)}};
  j["orders"] = {{"congruence", C.image_order.get_str()},
                 {"h_lif", E.h_lif.get_str()},
                 {"dual_essential_torsion", E.dual_torsion_order.get_str()}};
  if (c.json) {
    std::cout << j.dump() << "\n";
    return 0;
  }
  std::cout << "level (" << to_string(H->level().gen) << "), norm " << H->level().norm << ", index "
            << H->cosets().size() << "\n";
  std::cout << "H1    " << H->H1().to_string() << "\n";
  std::cout << "H1^E  " << E.group.to_string() << "\n";
  std::cout << "|H1,cong| = " << C.image_order << ", h_lif = " << E.h_lif << ", |H1^E*,tors| = " << E.dual_torsion_order
            << "\n";
  return 0;
}

int cmd_hecke(const Common& c, const std::string& level, const std::string& prime, bool use_u, long mod) {
  HomologyCache cache(presentation_for(c.d, c.presentation));
  auto H = cache.get(level);
  const FieldSpec& F = cache.field();
  QuadInt q = parse_quad(prime);
  bool divides = F.divides(q, H->level().gen);
  if (use_u && !divides) throw std::invalid_argument("--u needs the prime to divide the level");
  if (!use_u && divides) throw std::invalid_argument("the prime divides the level; use --u");
  AbHom T = use_u ? hecke_U(*H, q) : hecke_T(*H, q);
  json j{{"schema", 1}, {"field", field_name(c.d)}, {"level", to_string(H->level().gen)}, {"prime", to_string(q)},
         {"operator", use_u ? "U" : "T"}};
  j["groups"] = {{"H1", group_json(H->H1())}};
  json rows = json::array();
  for (int i = 0; i < T.matrix().rows(); ++i) {
    json r = json::array();
    for (int k = 0; k < T.matrix().cols(); ++k) r.push_back(T.matrix()(i, k).get_str());
    rows.push_back(r);
  }
  j["matrix"] = rows;
  std::string fac;
  if (mod > 0) {
    if (!is_prime(mod)) throw std::invalid_argument("--mod must be prime");
    std::vector<int> idx;
    const FgAbGroup& G = H->H1();
    for (int k = 0; k < G.num_generators(); ++k)
      if (G.modulus(k) == 0 || G.modulus(k) % mod == 0) idx.push_back(k);
    fp::Mat m(idx.size(), std::vector<long>(idx.size()));
    for (size_t a = 0; a < idx.size(); ++a)
      for (size_t b = 0; b < idx.size(); ++b) m[a][b] = to_long(fmod(T.matrix()(idx[a], idx[b]), Int(mod)));
    json jf = json::array();
    if (!idx.empty())
      for (auto& [g, e] : fp::factor(fp::charpoly(m, mod), mod)) {
        std::string term = "(" + fp::to_string(g, mod) + ")" + (e > 1 ? "^" + std::to_string(e) : "");
        fac += (fac.empty() ? "" : " ") + term;
        jf.push_back({{"factor", fp::to_string(g, mod)}, {"multiplicity", e}});
      }
    j["mod"] = mod;
    j["charpoly"] = jf;
    j["dimension"] = idx.size();
  }
  if (c.json) {
    std::cout << j.dump() << "\n";
    return 0;
  }
  std::cout << (use_u ? "U_" : "T_") << to_string(q) << " on H1(" << to_string(H->level().gen)
            << ") = " << H->H1().to_string() << ", rows are images of the canonical generators\n";
  std::cout << T.matrix().to_string() << "\n";
  if (mod > 0) std::cout << "charpoly mod " << mod << ": " << (fac.empty() ? "1" : fac) << "\n";
  return 0;
}

QuadIdeal product_of(const FieldSpec& F, const std::string& gens) {
  QuadIdeal r = make_ideal(F, QuadInt(1));
  for (auto& g : split_list(gens)) r = ideal_mul(F, r, parse_level(F, g));
  return r;
}

std::vector<Int> int_list(const std::string& s) {
  std::vector<Int> out;
  for (auto& t : split_list(s)) out.push_back(Int(t));
  return out;
}

int cmd_newforms(const Common& c, const std::string& level, const std::string& S, const std::string& invert) {
  HomologyCache cache(presentation_for(c.d, c.presentation));
  const FieldSpec& F = cache.field();
  QuadIdeal sigma = parse_level(F, level), s = product_of(F, S);
  FgAbGroup N = newform_space(cache, sigma, s, int_list(invert));
  json j{{"schema", 1}, {"field", field_name(c.d)}, {"level", to_string(sigma.gen)}, {"S", to_string(s.gen)},
         {"invert", invert}};
  j["groups"] = {{"newforms", group_json(N)}};
  if (c.json)
    std::cout << j.dump() << "\n";
  else
    std::cout << "newforms at (" << to_string(sigma.gen) << ") relative to (" << to_string(s.gen) << "): "
              << N.to_string() << "\n";
  return 0;
}

int cmd_jl_ratio(const Common& c, const std::string& pstr) {
  HomologyCache cache(presentation_for(c.d, c.presentation));
  const FieldSpec& F = cache.field();
  QuadInt p = canonical_generator(F, parse_quad(pstr));
  ReferenceTable T = load_reference(c.d);
  long n = to_long(F.norm(p));
  const ReferenceRow* row = T.find(n, &p);
  std::string note;
  if (!row) {
    QuadInt pc = canonical_generator(F, F.conj(p));
    row = T.find(n, &pc);
    if (row) note = "quaternionic order taken from the conjugate row";
  }
  if (!row || !row->group("YB0(p)")) throw std::invalid_argument("no reference row for p = " + to_string(p));
  FgAbGroup B = FgAbGroup::parse(*row->group("YB0(p)"));
  if (!B.is_finite()) throw std::domain_error("quaternionic homology is infinite for p = " + to_string(p));
  Rational A = jl_ratio(cache, p, B.order());
  json j{{"schema", 1}, {"field", field_name(c.d)}, {"level", to_string(p)}};
  j["groups"] = {{"YB0(p)", group_json(B)}};
  j["ratios"] = {{"A_p", rational_string(A)}};
  if (!note.empty()) j["note"] = note;
  if (c.json)
    std::cout << j.dump() << "\n";
  else
    std::cout << "A_p = " << rational_string(A) << " for p = (" << to_string(p) << "), N(p) = " << n
              << (note.empty() ? "" : " (" + note + ")") << "\n";
  return 0;
}

int cmd_decompose(const Common& c, const std::string& level, long ell, const std::string& probes, long bound) {
  HomologyCache cache(presentation_for(c.d, c.presentation));
  const FieldSpec& F = cache.field();
  auto H = cache.get(level);
  std::vector<QuadInt> pr;
  for (auto& g : split_list(probes)) pr.push_back(parse_quad(g));
  if (pr.empty()) pr = default_probes(*H, bound);
  auto ideals = hecke_decompose(*H, ell, pr);
  CongruenceData C = congruence_quotient(*H);
  json j{{"schema", 1}, {"field", field_name(c.d)}, {"level", to_string(H->level().gen)}, {"ell", ell}};
  j["groups"] = {{"H1", group_json(H->H1())}};
  j["ideals"] = json::array();
  for (auto& m : ideals) {
    json jm;
    jm["residue_field"] = "F_" + std::to_string(ell) + (m.residue_degree > 1 ? "^" + std::to_string(m.residue_degree) : "");
    jm["localized"] = group_json(m.localized);
    jm["localized_string"] = m.localized.to_string();
    jm["congruence_image"] = (C.primes.empty() ? Int(1) : (C.projection * m.inclusion).image_order()).get_str();
    jm["eisenstein"] = m.eisenstein;
    jm["ambiguous"] = m.ambiguous;
    json ev = json::object();
    for (auto& [q, g] : m.eigen) ev[to_string(q)] = fp::to_string(g, ell);
    jm["eigen"] = ev;
    json lr = json::array();
    for (auto& q : m.level_raising) lr.push_back(to_string(q));
    jm["level_raising"] = lr;
    j["ideals"].push_back(jm);
  }
  (void)F;
  if (c.json) {
    std::cout << j.dump() << "\n";
    return 0;
  }
  std::cout << "H1(" << to_string(H->level().gen) << ") = " << H->H1().to_string() << "; " << ideals.size()
            << " maximal ideal(s) of residue characteristic " << ell << "\n";
  for (auto& jm : j["ideals"]) {
    std::cout << "  " << jm["residue_field"].get<std::string>() << "  localized " << jm["localized_string"].get<std::string>()
              << "  congruence image " << jm["congruence_image"].get<std::string>()
              << (jm["eisenstein"].get<bool>() ? "  Eisenstein" : "") << (jm["ambiguous"].get<bool>() ? "  (ambiguous)" : "")
              << "\n    ";
    bool first = true;
    for (auto& [q, g] : jm["eigen"].items()) {
      std::cout << (first ? "" : "; ") << "T_" << q << ": " << g.get<std::string>();
      first = false;
    }
    std::cout << "\n";
  }
  return 0;
}

int cmd_scan(const Common& c, const std::string& pred, long bound) {
  auto P = eiscan::parse_predicate(pred);
  auto qs = eiscan::scan(P, bound);
  for (long q : qs) std::cout << q << "\n";
  if (c.json) std::cout << json{{"schema", 1}, {"predicate", pred}, {"bound", bound}, {"primes", qs}}.dump() << "\n";
  return 0;
}

int cmd_scattering(const Common& c, int trials, uint64_t seed) {
  bool ok = true;
  json j{{"schema", 1}, {"identities", json::array()}};
  for (auto& r : scatter::verify_identities()) {
    ok &= r.holds;
    j["identities"].push_back({{"name", r.name}, {"holds", r.holds}, {"residual", r.residual}});
    if (!c.json) std::cout << (r.holds ? "pass  " : "FAIL  ") << r.name << (r.holds ? "" : "  residual " + r.residual) << "\n";
  }
  auto K = scatter::kronecker_det_checks(trials, seed);
  ok &= K.passed == K.trials;
  j["kronecker"] = {{"trials", K.trials}, {"passed", K.passed}, {"failures", K.failures}};
  if (!c.json) std::cout << (K.passed == K.trials ? "pass  " : "FAIL  ") << "Kronecker determinant checks " << K.passed
                         << "/" << K.trials << "\n";
  int rc_ok = 0;
  std::vector<std::string> bad;
  for (int t = 0; t < trials; ++t) {
    scatter::RootCountModel m;
    if (t == 0) {
      m.Y = std::exp(1.0);
      m.T = 2 * M_PI;
      m.knots = {{0.0, 0.0}, {10.0, 0.0}};
    } else {
      m = scatter::random_root_model(seed * 1000003ULL + t);
    }
    auto r = scatter::root_count(m);
    if (r.enumerated == r.formula)
      ++rc_ok;
    else
      bad.push_back("model " + std::to_string(t) + ": " + std::to_string(r.enumerated) + " vs " + std::to_string(r.formula));
  }
  ok &= rc_ok == trials;
  j["root_count"] = {{"trials", trials}, {"passed", rc_ok}, {"failures", bad}};
  j["ok"] = ok;
  if (c.json)
    std::cout << j.dump() << "\n";
  else
    std::cout << (rc_ok == trials ? "pass  " : "FAIL  ") << "root count model " << rc_ok << "/" << trials << "\n";
  return ok ? 0 : 1;
}

int cmd_reproduce(const Common& c, const ReproOptions& opt, const std::string& out, const std::string& format) {
  ReproReport r = reproduce_tables(opt);
  if (!out.empty()) export_report(r, out, format);
  if (c.json)
    std::cout << report_to_json(r) << "\n";
  else
    std::cout << report_to_text(r);
  return r.ok() ? 0 : 1;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"torsion homology of Bianchi congruence subgroups"};
  app.require_subcommand(1);
  Common c;
  std::function<int()> action;

  auto* field = app.add_subcommand("field", "field data and prime splitting");
  add_common(field, c);
  long prime = 0;
  field->add_option("--prime", prime, "rational prime to factor");
  field->callback([&] { action = [&] { return cmd_field(c, prime); }; });

  std::string level, qstr, S, invert, probes, pstr, pred, out, format = "json";
  bool use_u = false;
  long mod = 0, ell = 3, bound = 617, probe_bound = 30;

  auto* hom = app.add_subcommand("homology", "H_1 of Gamma_0(n)");
  add_common(hom, c);
  hom->add_option("--level", level, "level generator(s), e.g. 3*3+1t")->required();
  hom->callback([&] { action = [&] { return cmd_homology(c, level); }; });

  auto* hk = app.add_subcommand("hecke", "Hecke operator matrix");
  add_common(hk, c);
  hk->add_option("--level", level)->required();
  hk->add_option("--prime", qstr)->required();
  hk->add_flag("--u", use_u, "U_q for q dividing the level");
  hk->add_option("--mod", mod, "factor the characteristic polynomial over F_L");
  hk->callback([&] { action = [&] { return cmd_hecke(c, level, qstr, use_u, mod); }; });

  auto* nf = app.add_subcommand("newforms", "cokernel of the level-raising transfers");
  add_common(nf, c);
  nf->add_option("--level", level)->required();
  nf->add_option("--S", S, "generators of S, comma separated");
  nf->add_option("--invert", invert, "rational primes to invert, e.g. 2,5");
  nf->callback([&] { action = [&] { return cmd_newforms(c, level, S, invert); }; });

  auto* jl = app.add_subcommand("jl-ratio", "the ratio A_p against the quaternionic reference column");
  add_common(jl, c);
  jl->add_option("--p", pstr)->required();
  jl->callback([&] { action = [&] { return cmd_jl_ratio(c, pstr); }; });

  auto* dec = app.add_subcommand("decompose", "maximal-ideal decomposition of the ell-primary torsion");
  add_common(dec, c);
  dec->add_option("--level", level)->required();
  dec->add_option("--ell", ell)->capture_default_str();
  dec->add_option("--probes", probes, "probe primes, comma separated");
  dec->add_option("--probe-bound", probe_bound, "norm bound for default probes")->capture_default_str();
  dec->callback([&] { action = [&] { return cmd_decompose(c, level, ell, probes, probe_bound); }; });

  auto* sc = app.add_subcommand("scan", "Eisenstein and phantom-class predicates");
  add_common(sc, c);
  sc->add_option("--predicate", pred)->required()->check(CLI::IsMember({"eis3", "phantom3", "eis5", "phantom5"}));
  sc->add_option("--bound", bound)->capture_default_str();
  sc->callback([&] { action = [&] { return cmd_scan(c, pred, bound); }; });

  auto* st = app.add_subcommand("scattering-check", "symbolic scattering-matrix identities");
  add_common(st, c);
  int trials = 100;
  uint64_t seed = 1;
  st->add_option("--trials", trials)->capture_default_str();
  st->add_option("--seed", seed)->capture_default_str();
  st->callback([&] { action = [&] { return cmd_scattering(c, trials, seed); }; });

  auto* rp = app.add_subcommand("reproduce", "recompute the reference tables");
  add_common(rp, c);
  ReproOptions opt;
  rp->add_option("--max-norm", opt.max_norm)->capture_default_str();
  rp->add_flag("--deep", opt.deep, "include rows of norm > 100");
  rp->add_option("--budget", opt.row_budget_seconds, "per-row time budget in seconds (reported)");
  rp->add_option("--threads", opt.threads, "worker threads");
  rp->add_option("--out", out, "report file");
  rp->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  rp->callback([&] {
    action = [&] {
      opt.d = c.d;
      return cmd_reproduce(c, opt, out, format);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return action ? action() : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace tjl
