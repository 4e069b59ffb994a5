#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "tjl/abelian.hpp"
#include "tjl/eiscan.hpp"
#include "tjl/harness.hpp"
#include "tjl/hecke.hpp"
#include "tjl/jltor.hpp"
#include "tjl/scatter.hpp"

using namespace tjl;

namespace {

std::shared_ptr<const GroupPresentation> pres() {
  static auto P = std::make_shared<const GroupPresentation>(bundled_presentation(-2));
  return P;
}
HomologyCache& cache() {
  static HomologyCache C(pres());
  return C;
}
const FieldSpec& F() { return pres()->field; }
QuadInt q(const char* s) { return parse_quad(s); }
QuadIdeal lv(const std::string& s) { return parse_level(F(), s); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

bool squarefree(const QuadIdeal& n) {
  for (auto& [p, e] : factor_ideal(F(), n))
    if (e > 1) return false;
  return true;
}

std::vector<QuadIdeal> levels_up_to(long bound, bool only_squarefree) {
  std::vector<QuadIdeal> out;
  for (auto& n : ideals_up_to(F(), bound))
    if (n.norm > 1 && (!only_squarefree || squarefree(n))) out.push_back(n);
  return out;
}

std::string join(const std::vector<std::string>& v, const std::string& sep = ", ") {
  std::string s;
  for (auto& x : v) s += (s.empty() ? "" : sep) + x;
  return s;
}

// ---------------------------------------------------------------- criteria

Outcome table_reproduction() {
  ReproOptions o;
  o.max_norm = 97;
  ReproReport r = reproduce_tables(o);
  const std::set<long> wanted{11, 17, 19, 41, 43, 59, 97};
  int exact = 0, warn = 0, bad = 0;
  double worst = 0;
  std::vector<std::string> notes;
  for (auto& row : r.rows) {
    if (!wanted.count(row.norm)) continue;
    worst = std::max(worst, row.seconds);
    if (row.status == RowStatus::exact)
      ++exact;
    else if (row.status == RowStatus::odd_match) {
      ++warn;
      notes.push_back("warning: 2-part differs at " + row.key);
    } else {
      ++bad;
      notes.push_back(to_string(row.status) + " at " + row.key + (row.note.empty() ? "" : " (" + row.note + ")"));
    }
  }
  std::ostringstream s;
  s << exact << " exact, " << warn << " odd-part matches, " << bad << " failures over 7 primes; slowest row "
    << static_cast<int>(worst * 1000) << " ms";
  if (!notes.empty()) s << "; " << join(notes, "; ");
  return {bad == 0 && exact + warn == 7, s.str()};
}

Outcome jl_ratios() {
  ReferenceTable T = load_reference(-2);
  std::vector<std::string> got;
  bool ok = true;
  for (long n : {19L, 41L, 43L, 59L}) {
    const ReferenceRow* row = T.find(n);
    if (!row || !row->gen || !row->group("YB0(p)")) return {false, "reference row missing for norm " + std::to_string(n)};
    Int B = FgAbGroup::parse(*row->group("YB0(p)")).order();
    std::string a = rational_string(jl_ratio(cache(), *row->gen, B));
    got.push_back(std::to_string(n) + ": " + a);
    ok &= a == "2^6";
  }
  return {ok, "A_p " + join(got)};
}

Outcome composite_identity() {
  int pairs = 0, failures = 0;
  std::vector<std::string> bad;
  for (auto& n : levels_up_to(300, true)) {
    auto Hn = cache().get(n);
    for (auto& [pf, e] : factor_ideal(F(), n)) {
      QuadInt qq = pf.ideal.gen;
      auto Hm = cache().get(ideal_div(F(), n, pf.ideal));
      Degeneracy D = degeneracy(*Hn, *Hm, qq);
      AbHom Tq = hecke_T(*Hm, qq);
      ++pairs;
      if (!(D.push() * D.transfer() == composite_expected(D, Tq, pf.ideal.norm))) {
        ++failures;
        if (bad.size() < 5) bad.push_back(to_string(n.gen) + " at " + to_string(qq));
      }
    }
  }
  return {failures == 0 && pairs > 0,
          std::to_string(pairs - failures) + "/" + std::to_string(pairs) + " (level, q) pairs" +
              (bad.empty() ? "" : "; failing " + join(bad))};
}

Outcome hecke_eigenvalues() {
  // five eigenvalues at level (1-t)p, N(p) = 97
  auto H97 = cache().get("1-1t*5+6t");
  auto ms = hecke_decompose(*H97, 3, {q("1+1t"), q("3+1t"), q("3-1t"), q("3+2t"), q("3-2t")});
  const std::vector<std::string> expect{"x-1", "x", "x+1", "x", "x"};
  bool first = false;
  std::string found97;
  for (auto& m : ms) {
    std::vector<std::string> ev;
    for (auto& [p, g] : m.eigen) ev.push_back(fp::to_string(g, 3));
    if (!m.eisenstein && ev == expect) {
      first = true;
      found97 = m.localized.to_string();
    }
  }
  // the F_9 ideal at level (1-t)p, N(p) = 59
  auto H59 = cache().get("1-1t*3-5t");
  auto ms59 = hecke_decompose(*H59, 3, {q("1+1t"), q("t"), q("3+2t"), q("3-2t"), q("3+1t"), q("3-1t")});
  bool second = false;
  std::string got59;
  for (auto& m : ms59) {
    if (m.residue_degree != 2) continue;
    for (auto& [p, g] : m.eigen)
      if (p == q("1+1t")) {
        got59 = fp::to_string(g, 3);
        second |= got59 == "x^2+x-1";
      }
  }
  return {first && second, "N=97 eigenvalues (1, 0, -1, 0, 0) " + std::string(first ? "found on " + found97 : "not found") +
                               "; N=59 F_9 ideal T_1+1t minimal polynomial " + (got59.empty() ? "absent" : got59)};
}

Outcome newform_cokernel() {
  FgAbGroup N = newform_space(cache(), lv("3*3-2t"), lv("3-2t"), {Int(2), Int(5)});
  return {N.same_invariants(FgAbGroup::from_invariants({Int(3)}, 0)), "coker over Z[1/10] = " + N.to_string()};
}

Outcome congruence_orders() {
  int n_ok = 0, total = 0;
  std::vector<std::string> bad;
  for (auto& n : levels_up_to(300, false)) {
    auto H = cache().get(n);
    CongruenceData C = congruence_quotient(*H);
    Int expect = 1;
    for (auto& p : C.primes) expect *= p.ideal.norm - 1;
    ++total;
    if (C.relations_killed && odd_part(C.image_order) == odd_part(expect))
      ++n_ok;
    else if (bad.size() < 5)
      bad.push_back(to_string(n.gen));
  }
  return {n_ok == total, std::to_string(n_ok) + "/" + std::to_string(total) + " levels" +
                             (bad.empty() ? "" : "; failing " + join(bad))};
}

Outcome ihara_surjectivity() {
  int pairs = 0, good = 0;
  std::vector<std::string> bad;
  for (auto& n : levels_up_to(100, true)) {
    auto Hn = cache().get(n);
    EssentialData En = essential_homology(*Hn, congruence_quotient(*Hn));
    for (auto& [pf, e] : factor_ideal(F(), n)) {
      auto Hm = cache().get(ideal_div(F(), n, pf.ideal));
      EssentialData Em = essential_homology(*Hm, congruence_quotient(*Hm));
      Degeneracy D = degeneracy(*Hn, *Hm, pf.ideal.gen);
      const FgAbGroup& M = Hm->H1();
      AbHom z = AbHom::zero(Em.group, M);
      FgAbGroup E2 = direct_sum({Em.group, Em.group});
      AbHom incl = AbHom::from_sum(E2, {Em.group, Em.group},
                                   {AbHom::into_sum(D.pair, {M, M}, {Em.inclusion, z}),
                                    AbHom::into_sum(D.pair, {M, M}, {z, Em.inclusion})});
      ++pairs;
      std::string where = to_string(n.gen) + " at " + to_string(pf.ideal.gen);
      try {
        AbHom psi = (D.push() * En.inclusion).corestricted(incl);
        FgAbGroup coker = psi.cokernel().first;
        if (coker.is_finite() && localize_away(coker, {Int(2), Int(3)}).is_trivial())
          ++good;
        else if (bad.size() < 5)
          bad.push_back(where + " coker " + coker.to_string());
      } catch (const std::exception& ex) {
        if (bad.size() < 5) bad.push_back(where + ": " + ex.what());
      }
    }
  }
  return {good == pairs && pairs > 0, std::to_string(good) + "/" + std::to_string(pairs) +
                                          " pairs with cokernel supported on {2, 3}" +
                                          (bad.empty() ? "" : "; failing " + join(bad, "; "))};
}

Outcome eisenstein_localizations() {
  struct Case {
    const char* p;
    long ell;
    const char* group;
    long cong;
  };
  bool ok = true;
  std::vector<std::string> got;
  for (Case c : {Case{"1-9t", 3, "(0, 0), (3, 1), (729, 1)", 81}, Case{"13+9t", 5, "(0, 0), (25, 1)", 5},
                 Case{"3-11t", 5, "(0, 0), (25, 1), (125, 1)", 125}}) {
    auto H = cache().get(c.p);
    auto ms = hecke_decompose(*H, c.ell, default_probes(*H, 30));
    CongruenceData C = congruence_quotient(*H);
    const MaximalIdealData* eis = nullptr;
    for (auto& m : ms)
      if (m.eisenstein) eis = &m;
    if (!eis) {
      ok = false;
      got.push_back(std::string(c.p) + ": no Eisenstein ideal");
      continue;
    }
    Int cong = (C.projection * eis->inclusion).image_order();
    bool good = eis->localized.to_string() == c.group && cong == c.cong;
    ok &= good;
    got.push_back("N=" + F().norm(q(c.p)).get_str() + " ell=" + std::to_string(c.ell) + ": " +
                  eis->localized.to_string() + ", congruence part of order " + cong.get_str());
  }
  return {ok, join(got, "; ")};
}

Outcome scans() {
  auto t0 = std::chrono::steady_clock::now();
  using eiscan::Predicate;
  auto e3 = eiscan::scan(Predicate::eis3, 617), p3 = eiscan::scan(Predicate::phantom3, 617);
  auto e5 = eiscan::scan(Predicate::eis5, 617), p5 = eiscan::scan(Predicate::phantom5, 617);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto show = [](const std::vector<long>& v) {
    std::string s;
    for (long x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
    return "{" + s + "}";
  };
  bool ok = e3 == std::vector<long>{163, 523} && p3.size() >= 2 && p3[0] == 89 && p3[1] == 179 &&
            e5 == std::vector<long>{251, 331} && !p5.empty() && p5[0] == 419 && secs <= 10;
  std::ostringstream s;
  s << "eis3 " << show(e3) << ", phantom3 " << show(p3) << ", eis5 " << show(e5) << ", phantom5 " << show(p5) << " in "
    << static_cast<int>(secs * 1000) << " ms";
  return {ok, s.str()};
}

Outcome phantom_complex() {
  std::vector<QuadInt> probes{q("3+1t"), q("3-1t"), q("3+2t"), q("3-2t"), q("1+3t"), q("1-3t")};
  LevelComplex L = level_complex(cache(), lv("3*9-2t"), lv("9-2t"), probes);
  if (!L.is_complex) return {false, "d1 d0 != 0"};
  auto ms = decompose_module(L.middle, L.middle_ops, 3);
  std::vector<std::string> got;
  bool found = false;
  for (auto& m : ms) {
    got.push_back(m.localized.to_string() + (m.eisenstein ? " Eisenstein" : ""));
    if (m.eisenstein && !m.localized.is_trivial()) found = true;
  }
  return {found, "middle homology " + L.middle.to_string() + "; 3-primary blocks: " + (got.empty() ? "none" : join(got, "; "))};
}

Outcome scattering() {
  auto t0 = std::chrono::steady_clock::now();
  int ids = 0, ids_ok = 0;
  for (auto& r : scatter::verify_identities()) {
    ++ids;
    ids_ok += r.holds;
  }
  auto K = scatter::kronecker_det_checks(100, 1);
  int rc = 0;
  for (uint64_t s = 1; s <= 100; ++s) {
    auto r = scatter::root_count(scatter::random_root_model(s));
    rc += r.enumerated == r.formula;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream s;
  s << ids_ok << "/" << ids << " identities, " << K.passed << "/" << K.trials << " Kronecker trials, " << rc
    << "/100 root counts in " << static_cast<int>(secs * 1000) << " ms";
  return {ids_ok == ids && K.passed == 100 && K.trials == 100 && rc == 100 && secs <= 5, s.str()};
}

Outcome square_property() {
  std::vector<std::string> got;
  bool ok = true;
  int checked = 0;
  for (long p : {5L, 7L, 13L, 23L, 29L, 31L, 37L, 47L}) {
    auto H = cache().get(make_ideal(F(), QuadInt(p)));
    if (!H->H1().is_finite()) {
      got.push_back(std::to_string(p) + ": infinite");
      continue;
    }
    Int n = H->H1().order();
    bool sq = square_away_from_2_3(n);
    ok &= sq;
    ++checked;
    got.push_back(std::to_string(p) + (sq ? ": square" : ": NOT square (" + n.get_str() + ")"));
  }
  return {ok && checked > 0, join(got)};
}

Outcome property_suites() {
  std::mt19937_64 rng(11);
  // Smith form against the determinantal-divisor oracle
  int snf_ok = 0, snf_n = 10000;
  for (int t = 0; t < snf_n; ++t) {
    int m = 1 + static_cast<int>(rng() % 5), n = 1 + static_cast<int>(rng() % 5);
    IntMatrix M = oracle::random_matrix(rng, m, n, -9, 9, t % 3 == 0 ? 0.4 : 1.0);
    IntVec expect = oracle::minor_oracle(M);
    FgAbGroup G = FgAbGroup::from_relations(M);
    IntVec tors = oracle::nontrivial(expect);
    snf_ok += snf(M).diagonal == expect && G.torsion_invariants() == tors &&
              G.free_rank() == n - static_cast<int>(expect.size());
  }
  // Euclidean division decreases the norm
  int div_ok = 0, div_n = 10000;
  std::uniform_int_distribution<long> c(-200, 200);
  for (int t = 0; t < div_n; ++t) {
    QuadInt a(c(rng), c(rng)), b;
    do b = QuadInt(c(rng) / 10, c(rng) / 10);
    while (b.is_zero());
    auto [qq, r] = euclid_divmod(F(), a, b);
    div_ok += F().mul(qq, b) + r == a && F().norm(r) < F().norm(b);
  }
  // words for matrices
  const auto& P = *pres();
  int w_ok = 0, w_n = 1000;
  std::uniform_int_distribution<int> g(0, static_cast<int>(P.generators.size()) - 1), sgn(0, 1);
  for (int t = 0; t < w_n; ++t) {
    Word w;
    for (int k = 0; k < 1 + t % 30; ++k) w.push_back({g(rng), sgn(rng) ? 1L : -1L});
    Mat2 m = P.eval(w);
    w_ok += same_projective(F(), P.eval(word_for_matrix(P, m)), m);
  }
  // Hecke operators commute
  int pairs = 0, comm = 0;
  for (const char* s : {"3+1t", "1-9t", "1-1t*5+6t", "1-1t*3-5t", "3*9-2t", "13+9t", "5"}) {
    auto H = cache().get(s);
    auto ops = probe_operators(*H, default_probes(*H, 30));
    for (size_t i = 0; i < ops.size(); ++i)
      for (size_t j = i + 1; j < ops.size(); ++j) {
        ++pairs;
        comm += commute(ops[i].op, ops[j].op);
      }
  }
  std::ostringstream s;
  s << "SNF " << snf_ok << "/" << snf_n << ", division " << div_ok << "/" << div_n << ", words " << w_ok << "/" << w_n
    << ", Hecke commutativity " << comm << "/" << pairs;
  return {snf_ok == snf_n && div_ok == div_n && w_ok == w_n && comm == pairs, s.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> all{
      {1, "table reproduction", table_reproduction},
      {2, "JL ratio", jl_ratios},
      {3, "composite-map oracle", composite_identity},
      {4, "Hecke eigenvalues", hecke_eigenvalues},
      {5, "newform cokernel", newform_cokernel},
      {6, "congruence homology", congruence_orders},
      {7, "Ihara surjectivity", ihara_surjectivity},
      {8, "Eisenstein localizations", eisenstein_localizations},
      {9, "scans", scans},
      {10, "phantom-class complex", phantom_complex},
      {11, "scattering identities", scattering},
      {12, "square property", square_property},
      {13, "property suites", property_suites},
  };
  int failed = 0;
  for (auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("%s criterion %d (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
