#include "doctest.h"
#include "tjl/hecke.hpp"

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
}  // namespace

TEST_CASE("cache shares levels") {
  auto a = cache().get("3+1t");
  auto b = cache().get(parse_level(F(), "3+1t"));
  CHECK(a.get() == b.get());
}

TEST_CASE("coset representatives") {
  auto H = cache().get("3+1t");
  HeckeContext all(*H, q("1+1t"), false), upper(*H, q("1+1t"), true);
  CHECK(all.reps().size() == 4);
  CHECK(upper.reps().size() == 3);
  for (auto& d : all.reps()) CHECK(F().norm(mat_det(F(), d)) == 3);
}

TEST_CASE("Hecke operators commute") {
  for (const char* lv : {"3+1t", "5+6t", "1-1t*3+1t"}) {
    auto H = cache().get(lv);
    std::vector<AbHom> ops;
    for (const char* p : {"t", "1+1t", "1-1t", "3+2t", "5"})
      if (!F().divides(q(p), H->level().gen)) ops.push_back(hecke_T(*H, q(p)));
    for (size_t i = 0; i < ops.size(); ++i)
      for (size_t j = i + 1; j < ops.size(); ++j) CHECK(commute(ops[i], ops[j]));
  }
}

TEST_CASE("serial and parallel kernels agree") {
  auto H = cache().get("5+6t");
  CHECK(hecke_T(*H, q("1+1t"), Exec::serial) == hecke_T(*H, q("1+1t"), Exec::parallel));
  auto Hn = cache().get("1-1t*5+6t");
  CHECK(degeneracy_push2(*Hn, *H, q("1-1t"), Exec::serial) == degeneracy_push2(*Hn, *H, q("1-1t"), Exec::parallel));
}

TEST_CASE("T_q is 1 + N(q) on the congruence quotient at level 11") {
  // H_1(3+1t) has odd part Z/5, an Eisenstein class: T_q acts by 1 + N(q)
  auto H = cache().get("3+1t");
  for (const char* p : {"1+1t", "1-1t", "3+2t"}) {
    AbHom T = hecke_T(*H, q(p));
    Int Nq = F().norm(q(p));
    AbHom E = (T - AbHom::scalar(H->H1(), Nq + 1)).scaled(16);
    CHECK(E.is_zero());
  }
}

TEST_CASE("Atkin-Lehner involutions") {
  for (const char* lv : {"1-1t*3+1t", "3*3+1t", "1+1t*5+6t"}) {
    auto H = cache().get(lv);
    QuadInt p = factor_ideal(F(), H->level()).front().first.ideal.gen;
    AbHom w = atkin_lehner(*H, p);
    CHECK(w * w == AbHom::identity(H->H1()));
  }
}

TEST_CASE("composite of degeneracy maps") {
  struct Case {
    const char* n;
    const char* qq;
    const char* m;
  };
  for (Case c : {Case{"1-1t*3+1t", "1-1t", "3+1t"}, Case{"1+1t*3-2t", "1+1t", "3-2t"}, Case{"5*3+1t", "5", "3+1t"},
                 Case{"1+1t*3+1t", "3+1t", "1+1t"}}) {
    auto Hn = cache().get(c.n);
    auto Hm = cache().get(c.m);
    Degeneracy D = degeneracy(*Hn, *Hm, q(c.qq));
    AbHom Tq = hecke_T(*Hm, q(c.qq));
    CHECK(D.push() * D.transfer() == composite_expected(D, Tq, F().norm(q(c.qq))));
    // the second degeneracy map factors through the Atkin-Lehner involution
    CHECK(D.push2 == D.push1 * atkin_lehner(*Hn, q(c.qq)));
  }
}

TEST_CASE("U operators commute with T operators") {
  auto H = cache().get("1-1t*3+1t");
  AbHom U = hecke_U(*H, q("1-1t"));
  CHECK(commute(U, hecke_T(*H, q("t"))));
  CHECK(commute(U, hecke_T(*H, q("3+2t"))));
  CHECK_THROWS(hecke_U(*H, q("3+2t")));
  CHECK_THROWS(hecke_T(*H, q("1-1t")));
}
