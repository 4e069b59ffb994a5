#include "tjl/jltor.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace tjl {

namespace {

struct DlogTable {
  ResidueRing R;
  std::vector<long> log;  // residue code -> discrete log, -1 for zero
  long order = 1;
};

const DlogTable& dlog_table(const FieldSpec& F, const QuadInt& q) {
  static std::mutex mu;
  static std::map<std::pair<long, std::string>, std::unique_ptr<DlogTable>> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto key = std::make_pair(F.d, to_string(q));
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  auto t = std::make_unique<DlogTable>();
  t->R = ResidueRing(F, q);
  long n = t->R.size();
  t->order = n - 1;
  for (long g = 1; g < n; ++g) {
    if (!t->R.is_unit(g)) continue;
    std::vector<long> log(n, -1);
    long x = t->R.one(), k = 0;
    do {
      log[x] = k++;
      x = t->R.mul(x, g);
    } while (x != t->R.one() && k <= n);
    if (k == n - 1) {
      t->log = std::move(log);
      break;
    }
  }
  if (t->log.empty()) throw std::domain_error("residue ring is not a field: " + to_string(q));
  return *cache.emplace(key, std::move(t)).first->second;
}

Int pow_int(const Int& b, long e) { return ipow(b, static_cast<unsigned long>(e)); }

Rational rpow(const Int& b, long e) {
  if (e >= 0) return Rational(pow_int(b, e));
  return Rational(Int(1), pow_int(b, -e));
}

// order of the subgroup of G generated by rows given in canonical coordinates of G
Int subgroup_order(const FgAbGroup& G, const std::vector<IntVec>& rows) {
  int k = G.num_generators();
  SparseMatrix rels;
  rels.cols = k;
  for (int j = 0; j < k; ++j)
    if (G.modulus(j) != 0) rels.add_row({{j, G.modulus(j)}});
  for (const auto& r : rows) {
    SparseRow sr;
    for (int j = 0; j < k; ++j)
      if (r[j] != 0) sr.push_back({j, r[j]});
    if (!sr.empty()) rels.add_row(sr);
  }
  return G.order() / FgAbGroup::from_relations(rels).order();
}

std::vector<PrimeFactor> distinct_primes(const FieldSpec& F, const QuadIdeal& n) {
  std::vector<PrimeFactor> out;
  for (auto& [pf, e] : factor_ideal(F, n)) out.push_back(pf);
  return out;
}

QuadIdeal ideal_of_primes(const FieldSpec& F, const std::vector<PrimeFactor>& ps) {
  QuadIdeal r = make_ideal(F, QuadInt(1));
  for (auto& p : ps) r = ideal_mul(F, r, p.ideal);
  return r;
}

// primes of sigma not dividing s; sigma must be squarefree and divisible by s
std::vector<PrimeFactor> level_difference(const FieldSpec& F, const QuadIdeal& sigma, const QuadIdeal& s) {
  if (!ideal_divides(F, s, sigma)) throw std::invalid_argument("S does not divide sigma");
  for (auto& [pf, e] : factor_ideal(F, sigma))
    if (e > 1) throw std::invalid_argument("sigma must be squarefree");
  return distinct_primes(F, ideal_div(F, sigma, s));
}

// homomorphism between direct sums given by blocks; block(k, l) maps part k to part l, or nullptr for zero
AbHom block_map(const FgAbGroup& src, const std::vector<FgAbGroup>& sparts, const FgAbGroup& tgt,
                const std::vector<FgAbGroup>& tparts, const std::function<const AbHom*(size_t, size_t)>& block) {
  IntMatrix m(src.num_generators(), tgt.num_generators());
  for (int i = 0; i < src.num_generators(); ++i) {
    IntVec amb = src.lift(i);
    std::vector<IntVec> x;
    int off = 0;
    for (auto& P : sparts) {
      x.push_back(P.reduce(IntVec(amb.begin() + off, amb.begin() + off + P.num_generators())));
      off += P.num_generators();
    }
    IntVec out;
    for (size_t l = 0; l < tparts.size(); ++l) {
      IntVec y(tparts[l].num_generators());
      for (size_t k = 0; k < sparts.size(); ++k) {
        const AbHom* f = block(k, l);
        if (!f) continue;
        IntVec z = f->apply(x[k]);
        for (size_t j = 0; j < y.size(); ++j) y[j] += z[j];
      }
      out.insert(out.end(), y.begin(), y.end());
    }
    m.set_row(i, tgt.coords(out));
  }
  return AbHom(src, tgt, m);
}

AbHom hom_power(const AbHom& f, long e) {
  AbHom r = AbHom::identity(f.source()), b = f;
  while (e > 0) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

// g(T) with coefficients lifted to 0..l-1
AbHom poly_eval(const fp::Poly& g, const AbHom& T) {
  AbHom r = AbHom::zero(T.source(), T.source());
  for (int k = fp::deg(g); k >= 0; --k) r = r * T + AbHom::scalar(T.source(), Int(g[k]));
  return r;
}

fp::Mat mod_matrix(const AbHom& T, long l) {
  const IntMatrix& M = T.matrix();
  fp::Mat m(M.rows(), std::vector<long>(M.cols()));
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) m[i][j] = to_long(fmod(M(i, j), Int(l)));
  return m;
}

int composition_length(const FgAbGroup& B, long l) {
  int L = 0;
  for (const auto& d : B.moduli()) L += valuation(d, Int(l));
  return L;
}

}  // namespace

long congruence_log(const FieldSpec& F, const PrimeFactor& q, const Mat2& g) {
  const DlogTable& t = dlog_table(F, q.ideal.gen);
  long a = t.R.reduce(g.a), d = t.R.reduce(g.d);
  long x = t.R.mul(a, t.R.inv(d));
  long v = t.log[x];
  if (v < 0) throw std::domain_error("congruence character evaluated on a non-unit");
  return v;
}

CongruenceData congruence_quotient(const HomologyData& H) {
  const FieldSpec& F = H.field();
  CongruenceData C;
  C.level = H.level();
  C.primes = distinct_primes(F, H.level());
  size_t np = C.primes.size();
  IntMatrix rel(static_cast<int>(np), static_cast<int>(np));
  for (size_t k = 0; k < np; ++k) rel(k, k) = C.primes[k].ideal.norm - 1;
  C.target = FgAbGroup::from_relations(rel);
  int ns = H.num_schreier();
  std::vector<std::vector<long>> chi(np, std::vector<long>(ns));
  for (int c = 0; c < ns; ++c) {
    Mat2 g = H.schreier_matrix(c);
    for (size_t k = 0; k < np; ++k) chi[k][c] = congruence_log(F, C.primes[k], g);
  }
  for (const auto& row : H.relations().rows)
    for (size_t k = 0; k < np; ++k) {
      Int s = 0;
      for (const auto& e : row) s += e.val * chi[k][e.col];
      if (s % (C.primes[k].ideal.norm - 1) != 0) C.relations_killed = false;
    }
  if (!C.relations_killed) throw std::domain_error("congruence character does not factor through H_1");
  const FgAbGroup& G = H.H1();
  IntMatrix m(G.num_generators(), C.target.num_generators());
  for (int j = 0; j < G.num_generators(); ++j) {
    IntVec l = G.lift(j);
    IntVec amb(np);
    for (int c = 0; c < ns; ++c)
      if (l[c] != 0)
        for (size_t k = 0; k < np; ++k) amb[k] += l[c] * chi[k][c];
    m.set_row(j, C.target.coords(amb));
  }
  C.projection = AbHom(G, C.target, m);
  C.image_order = np ? C.projection.image_order() : Int(1);
  return C;
}

Int h_lif(const HomologyData& H, const CongruenceData& C) {
  const FgAbGroup& G = H.H1();
  if (C.primes.empty()) return 1;
  std::vector<IntVec> tors;
  for (int j = 0; j < G.num_generators(); ++j)
    if (G.modulus(j) != 0) tors.push_back(C.projection.matrix().row(j));
  return C.image_order / subgroup_order(C.target, tors);
}

Int h_lif_direct(const HomologyData& H, const CongruenceData& C) {
  const FieldSpec& F = H.field();
  const FgAbGroup& G = H.H1();
  size_t np = C.primes.size();
  if (np == 0) return 1;
  // evaluate the characters on each lifted generator as a product of Schreier matrices
  std::vector<IntVec> all, tors;
  for (int j = 0; j < G.num_generators(); ++j) {
    IntVec l = G.lift(j);
    IntVec v(np);
    for (int c = 0; c < H.num_schreier(); ++c) {
      if (l[c] == 0) continue;
      Mat2 g = H.schreier_matrix(c);
      for (size_t k = 0; k < np; ++k) v[k] += l[c] * congruence_log(F, C.primes[k], g);
    }
    all.push_back(v);
    if (G.modulus(j) != 0) tors.push_back(v);
  }
  IntMatrix rel(static_cast<int>(np), static_cast<int>(np));
  for (size_t k = 0; k < np; ++k) rel(k, k) = C.primes[k].ideal.norm - 1;
  FgAbGroup raw = FgAbGroup::from_relations(rel);
  auto to_raw = [&](const std::vector<IntVec>& vs) {
    std::vector<IntVec> out;
    for (auto& v : vs) out.push_back(raw.coords(v));
    return out;
  };
  return subgroup_order(raw, to_raw(all)) / subgroup_order(raw, to_raw(tors));
}

EssentialData essential_homology(const HomologyData& H, const CongruenceData& C) {
  EssentialData E;
  const FgAbGroup& G = H.H1();
  if (C.primes.empty()) {
    E.group = G;
    E.inclusion = AbHom::identity(G);
  } else {
    auto [K, inc] = C.projection.kernel();
    E.group = K;
    E.inclusion = inc;
  }
  E.h_lif = h_lif(H, C);
  E.torsion_order = E.group.torsion_order();
  E.dual_torsion_order = G.torsion_order() * E.h_lif / C.image_order;
  return E;
}

FgAbGroup newform_space(HomologyCache& cache, const QuadIdeal& sigma, const QuadIdeal& s,
                        const std::vector<Int>& invert, Exec ex) {
  const FieldSpec& F = cache.field();
  auto Hn = cache.get(sigma);
  auto qs = level_difference(F, sigma, s);
  if (qs.empty()) return localize_away(Hn->H1(), invert);
  std::vector<FgAbGroup> parts;
  std::vector<AbHom> maps;
  for (auto& q : qs) {
    auto Hm = cache.get(ideal_div(F, sigma, q.ideal));
    parts.push_back(Hm->H1());
    maps.push_back(degeneracy_transfer1(*Hm, *Hn, q.ideal.gen, ex));
    parts.push_back(Hm->H1());
    maps.push_back(degeneracy_transfer2(*Hm, *Hn, q.ideal.gen, ex));
  }
  FgAbGroup sum = direct_sum(parts);
  AbHom t = AbHom::from_sum(sum, parts, maps);
  return localize_away(t.cokernel().first, invert);
}

TorsionInvariants torsion_invariants(HomologyCache& cache, const QuadIdeal& sigma, const QuadIdeal& s,
                                     bool torsion_only) {
  const FieldSpec& F = cache.field();
  auto qs = level_difference(F, sigma, s);
  TorsionInvariants T;
  size_t d = qs.size();
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    std::vector<PrimeFactor> extra;
    for (size_t k = 0; k < d; ++k)
      if (mask >> k & 1) extra.push_back(qs[k]);
    QuadIdeal R = ideal_mul(F, s, ideal_of_primes(F, extra));
    long missing = static_cast<long>(d - extra.size());
    int e = (missing % 2 ? -1 : 1) * (1 << missing);
    auto H = cache.get(R);
    if (!H->H1().is_finite() && !torsion_only)
      throw std::domain_error("H_1 is infinite at level " + to_string(R.gen));
    CongruenceData C = congruence_quotient(*H);
    T.h_tors *= rpow(H->H1().torsion_order(), e);
    T.h_cong *= rpow(C.image_order, e);
    T.h_lif *= rpow(h_lif(*H, C), e);
    T.terms.emplace_back(R, e);
  }
  T.h_E = T.h_tors / T.h_cong;
  return T;
}

Rational jl_ratio(HomologyCache& cache, const QuadInt& p, const Int& quaternionic_order, bool torsion_only) {
  const FieldSpec& F = cache.field();
  auto threes = prime_factor(F, 3);
  if (threes.size() != 2) throw std::invalid_argument("the ratio needs 3 to split");
  QuadIdeal P = make_ideal(F, p);
  QuadIdeal sigma = ideal_mul(F, P, make_ideal(F, QuadInt(3)));
  TorsionInvariants T = torsion_invariants(cache, sigma, P, torsion_only);
  return Rational(quaternionic_order) / T.h_tors;
}

std::string rational_string(const Rational& r) {
  if (r == 0) return "0";
  Rational a = abs(r);
  std::map<Int, int> f;
  for (auto& [q, e] : factor_integer(a.get_num())) f[q] += e;
  for (auto& [q, e] : factor_integer(a.get_den())) f[q] -= e;
  std::string s = r < 0 ? "-" : "";
  bool first = true;
  for (auto& [q, e] : f) {
    if (e == 0) continue;
    if (!first) s += "*";
    first = false;
    s += q.get_str();
    if (e != 1) s += "^" + std::to_string(e);
  }
  return first ? s + "1" : s;
}

VolCongReport vol_cong_invariance(const FieldSpec& F, const QuadIdeal& sigma, const QuadIdeal& s,
                                  const QuadIdeal& s2) {
  auto qs = level_difference(F, sigma, s);
  auto qs2 = level_difference(F, sigma, s2);
  if (qs.size() % 2 != qs2.size() % 2) throw std::invalid_argument("|S| and |S'| differ in parity");
  auto expand = [&](const QuadIdeal& S, std::map<std::string, long>& ex, Rational& val) {
    auto all = distinct_primes(F, sigma);
    auto inS = distinct_primes(F, S);
    auto rest = level_difference(F, sigma, S);
    auto A = [](const PrimeFactor& q) { return "A(" + to_string(q.ideal.gen) + ")"; };
    auto B = [](const PrimeFactor& q) { return "B(" + to_string(q.ideal.gen) + ")"; };
    size_t d = rest.size();
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      long missing = static_cast<long>(d) - std::popcount(mask);
      long w = (missing % 2 ? -1 : 1) * (1L << missing);
      // h_cong / vol at R: V0^-1 prod_S (A/B) prod_{R \ S} (B/A)
      ex["V0"] -= w;
      for (auto& q : inS) {
        ex[A(q)] += w;
        ex[B(q)] -= w;
      }
      for (size_t k = 0; k < d; ++k)
        if (mask >> k & 1) {
          ex[B(rest[k])] += w;
          ex[A(rest[k])] -= w;
        }
    }
    std::erase_if(ex, [](const auto& kv) { return kv.second == 0; });
    val = 1;
    for (auto& q : all) {
      auto ia = ex.find(A(q)), ib = ex.find(B(q));
      if (ia != ex.end()) val *= rpow(q.ideal.norm + 1, ia->second);
      if (ib != ex.end()) val *= rpow(q.ideal.norm - 1, ib->second);
    }
  };
  VolCongReport R;
  expand(s, R.lhs, R.lhs_value);
  expand(s2, R.rhs, R.rhs_value);
  R.equal = R.lhs == R.rhs;
  return R;
}

bool square_away_from_2_3(const Int& n) {
  Int m = strip_primes(n, {Int(2), Int(3)});
  return mpz_perfect_square_p(m.get_mpz_t()) != 0;
}

std::vector<ProbeOperator> probe_operators(const HomologyData& H, const std::vector<QuadInt>& primes, Exec ex) {
  const FieldSpec& F = H.field();
  std::vector<ProbeOperator> out;
  for (const auto& q : primes) {
    ProbeOperator P;
    P.prime = q;
    P.norm = F.norm(q);
    P.is_u = F.divides(q, H.level().gen);
    P.op = P.is_u ? hecke_U(H, q, ex) : hecke_T(H, q, ex);
    out.push_back(std::move(P));
  }
  return out;
}

std::vector<QuadInt> default_probes(const HomologyData& H, long bound) {
  const FieldSpec& F = H.field();
  std::vector<QuadInt> out;
  for (auto& pf : primes_up_to(F, bound))
    if (!F.divides(pf.ideal.gen, H.level().gen)) out.push_back(pf.ideal.gen);
  return out;
}

std::string MaximalIdealData::eigen_string() const {
  std::string s;
  for (auto& [q, g] : eigen) {
    if (!s.empty()) s += "; ";
    s += "T_" + to_string(q) + ": " + fp::to_string(g, ell);
  }
  return s;
}

std::vector<MaximalIdealData> decompose_module(const FgAbGroup& G, const std::vector<ProbeOperator>& probes, long ell) {
  if (ell < 2 || !is_prime(ell)) throw std::invalid_argument("ell must be prime");
  const Int L(ell);
  // the ell-primary torsion as a subgroup P0 -> G
  std::vector<int> idx;
  std::vector<int> val;
  for (int j = 0; j < G.num_generators(); ++j)
    if (G.modulus(j) != 0 && G.modulus(j) % L == 0) {
      idx.push_back(j);
      val.push_back(valuation(G.modulus(j), L));
    }
  if (idx.empty()) return {};
  int k = static_cast<int>(idx.size());
  IntMatrix rel(k, k);
  for (int i = 0; i < k; ++i) rel(i, i) = ipow(L, val[i]);
  FgAbGroup P0 = FgAbGroup::from_relations(rel);
  IntMatrix inc(P0.num_generators(), G.num_generators());
  for (int i = 0; i < P0.num_generators(); ++i) {
    IntVec l = P0.lift(i);
    IntVec x(G.num_generators());
    for (int r = 0; r < k; ++r) x[idx[r]] = l[r] * (G.modulus(idx[r]) / ipow(L, val[r]));
    inc.set_row(i, x);
  }
  AbHom incl0(P0, G, inc);

  struct Block {
    FgAbGroup B;
    AbHom incl;  // B -> P0
    std::vector<AbHom> ops;
    std::vector<fp::Poly> factors;
  };
  std::vector<Block> blocks(1);
  blocks[0].B = P0;
  blocks[0].incl = AbHom::identity(P0);
  for (auto& p : probes) blocks[0].ops.push_back(p.op.restricted_to(incl0));

  for (size_t t = 0; t < probes.size(); ++t) {
    std::vector<Block> next;
    for (auto& blk : blocks) {
      auto fac = fp::factor(fp::charpoly(mod_matrix(blk.ops[t], ell), ell), ell);
      if (fac.size() == 1) {
        blk.factors.push_back(fac[0].first);
        next.push_back(std::move(blk));
        continue;
      }
      int len = composition_length(blk.B, ell);
      for (auto& [g, m] : fac) {
        AbHom e = hom_power(poly_eval(g, blk.ops[t]), len);
        auto [K, i] = e.kernel();
        if (K.is_trivial()) continue;
        Block nb;
        nb.B = K;
        nb.incl = blk.incl * i;
        for (auto& op : blk.ops) nb.ops.push_back(op.restricted_to(i));
        nb.factors = blk.factors;
        nb.factors.push_back(g);
        next.push_back(std::move(nb));
      }
    }
    blocks = std::move(next);
  }

  std::vector<MaximalIdealData> out;
  Int sum_order = 1;
  for (auto& blk : blocks) {
    MaximalIdealData m;
    m.ell = ell;
    m.localized = blk.B;
    m.inclusion = incl0 * blk.incl;
    int degree = 1, nonlinear = 0;
    m.eisenstein = true;
    for (size_t t = 0; t < probes.size(); ++t) {
      const fp::Poly& g = blk.factors[t];
      m.eigen.emplace_back(probes[t].prime, g);
      degree = std::lcm(degree, fp::deg(g));
      if (fp::deg(g) > 1) ++nonlinear;
      if (probes[t].is_u) continue;
      long c = to_long(fmod(probes[t].norm + 1, L));
      if (g != fp::Poly{fp::reduce(-c, ell), 1}) m.eisenstein = false;
      fp::Poly lr = fp::from_ints({-c * c, 0, 1}, ell);
      if (fp::mod(lr, g, ell).empty()) m.level_raising.push_back(probes[t].prime);
    }
    m.residue_degree = degree;
    m.ambiguous = nonlinear >= 2;
    sum_order *= blk.B.order();
    out.push_back(std::move(m));
  }
  if (sum_order != P0.order()) throw std::logic_error("eigenspace decomposition does not reconstruct the primary part");
  return out;
}

std::vector<MaximalIdealData> hecke_decompose(const HomologyData& H, long ell, const std::vector<QuadInt>& probes,
                                              Exec ex) {
  return decompose_module(H.H1(), probe_operators(H, probes, ex), ell);
}

LevelComplex level_complex(HomologyCache& cache, const QuadIdeal& sigma, const QuadIdeal& s,
                           const std::vector<QuadInt>& probes, Exec ex) {
  const FieldSpec& F = cache.field();
  auto qs = level_difference(F, sigma, s);
  if (qs.empty() || qs.size() > 2) throw std::invalid_argument("level complex needs 1 or 2 primes in sigma \\ S");
  for (const auto& r : probes)
    if (F.divides(r, sigma.gen)) throw std::invalid_argument("probe divides the level: " + to_string(r));
  LevelComplex LC;
  auto Hs = cache.get(sigma);
  auto HS = cache.get(s);
  auto push_pair = [&](const HomologyData& Hn, const HomologyData& Hm, const QuadInt& q) {
    return std::make_pair(degeneracy_push1(Hn, Hm, ex), degeneracy_push2(Hn, Hm, q, ex));
  };
  auto hecke_on = [&](const HomologyData& H) {
    std::vector<AbHom> ops;
    for (const auto& r : probes) ops.push_back(hecke_T(H, r, ex));
    return ops;
  };

  std::vector<FgAbGroup> c0parts{Hs->H1()};
  std::vector<FgAbGroup> c1parts;
  std::vector<std::shared_ptr<const HomologyData>> c1levels;
  std::vector<AbHom> d0blocks;
  for (auto& q : qs) {
    auto Hm = cache.get(ideal_div(F, sigma, q.ideal));
    auto [p1, p2] = push_pair(*Hs, *Hm, q.ideal.gen);
    for (int c = 0; c < 2; ++c) {
      c1parts.push_back(Hm->H1());
      c1levels.push_back(Hm);
    }
    d0blocks.push_back(p1);
    d0blocks.push_back(p2);
  }
  FgAbGroup C0 = Hs->H1(), C1 = direct_sum(c1parts);
  AbHom d0 = block_map(C0, c0parts, C1, c1parts, [&](size_t, size_t l) { return &d0blocks[l]; });
  LC.terms = {C0, C1};
  LC.d = {d0};

  // Hecke operators on C_1, block diagonal
  std::vector<std::vector<AbHom>> ops1;
  for (auto& H : c1levels) ops1.push_back(hecke_on(*H));
  std::vector<AbHom> T1;
  for (size_t r = 0; r < probes.size(); ++r)
    T1.push_back(block_map(C1, c1parts, C1, c1parts,
                           [&](size_t k, size_t l) { return k == l ? &ops1[k][r] : nullptr; }));

  FgAbGroup K;
  AbHom incK;
  if (qs.size() == 1) {
    K = C1;
    incK = AbHom::identity(C1);
    auto [Q, pr] = d0.cokernel();
    LC.homology = {d0.kernel().first, Q};
  } else {
    // C_2 = H(S)^4 indexed by (i, j): i from q1, j from q2
    std::vector<FgAbGroup> c2parts(4, HS->H1());
    FgAbGroup C2 = direct_sum(c2parts);
    auto Hq2 = c1levels[0];  // level S*q2, carries q2
    auto Hq1 = c1levels[2];  // level S*q1, carries q1
    auto [a1, a2] = push_pair(*Hq2, *HS, qs[1].ideal.gen);  // Psi_{q2, j}
    auto [b1, b2] = push_pair(*Hq1, *HS, qs[0].ideal.gen);  // Psi_{q1, i}
    AbHom nb1 = b1.scaled(-1), nb2 = b2.scaled(-1);
    const AbHom* A[2] = {&a1, &a2};
    const AbHom* NB[2] = {&nb1, &nb2};
    AbHom d1 = block_map(C1, c1parts, C2, c2parts, [&](size_t k, size_t l) -> const AbHom* {
      size_t i = l / 2, j = l % 2;
      if (k < 2) return k == i ? A[j] : nullptr;
      return (k - 2) == j ? NB[i] : nullptr;
    });
    LC.terms.push_back(C2);
    LC.d.push_back(d1);
    LC.is_complex = (d1 * d0).is_zero();
    if (!LC.is_complex) throw std::logic_error("level complex: d1 d0 != 0");
    auto kk = d1.kernel();
    K = kk.first;
    incK = kk.second;
    AbHom d0K = d0.corestricted(incK);
    LC.homology = {d0.kernel().first, d0K.cokernel().first, d1.cokernel().first};
  }
  AbHom d0K = d0.corestricted(incK);
  auto [M, prM] = d0K.cokernel();
  LC.middle = M;
  for (size_t r = 0; r < probes.size(); ++r) {
    ProbeOperator P;
    P.prime = probes[r];
    P.norm = F.norm(probes[r]);
    P.op = T1[r].restricted_to(incK).induced_on(prM);
    LC.middle_ops.push_back(std::move(P));
  }
  return LC;
}

}  // namespace tjl
