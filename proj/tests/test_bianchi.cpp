#include <random>

#include "doctest.h"
#include "tjl/bianchi.hpp"
#include "tjl/hecke.hpp"

using namespace tjl;

namespace {
std::shared_ptr<const GroupPresentation> pres() {
  static auto P = std::make_shared<const GroupPresentation>(bundled_presentation(-2));
  return P;
}
HomologyData level(const std::string& s) { return HomologyData(pres(), parse_level(pres()->field, s)); }

Word random_word(std::mt19937_64& rng, int ngens, int len) {
  std::uniform_int_distribution<int> g(0, ngens - 1), e(0, 1);
  Word w;
  for (int i = 0; i < len; ++i) w.push_back({g(rng), e(rng) ? 1L : -1L});
  return w;
}
}  // namespace

TEST_CASE("bundled presentation") {
  const auto& P = *pres();
  CHECK(has_bundled_presentation(-2));
  CHECK_FALSE(has_bundled_presentation(-491));
  CHECK_NOTHROW(P.validate());
  for (auto& r : P.relators) CHECK(is_scalar(P.eval(r)));
  for (auto& g : P.generators) CHECK(P.field.is_unit(mat_det(P.field, g)));
  // serialization round trip keeps the hash
  auto Q = presentation_from_json(P.to_json());
  CHECK(Q.hash() == P.hash());
  CHECK(Q.abelianization() == P.abelianization());
}

TEST_CASE("malformed presentations are rejected") {
  CHECK_THROWS(presentation_from_json("{}"));
  CHECK_THROWS(presentation_from_json("not json"));
  auto P = bundled_presentation(-2);
  P.relators.push_back({{0, 1}});
  CHECK_THROWS(P.validate());
}

TEST_CASE("words") {
  Word w{{0, 2}, {1, -1}, {1, 1}, {2, 1}};
  CHECK(word_simplify(w) == Word{{0, 2}, {2, 1}});
  CHECK(word_simplify(Word{{0, 1}, {0, -1}}).empty());
  CHECK(word_expand(Word{{0, 3}}).size() == 3);
  CHECK(word_simplify(word_inverse(w)) == word_inverse(word_simplify(w)));
}

TEST_CASE("word round trip on >= 10^3 products") {
  const auto& P = *pres();
  std::mt19937_64 rng(7);
  int ok = 0, n = 1200;
  for (int i = 0; i < n; ++i) {
    Mat2 g = P.eval(random_word(rng, static_cast<int>(P.generators.size()), 1 + i % 25));
    Word w = word_for_matrix(P, g);
    if (same_projective(P.field, P.eval(w), g)) ++ok;
  }
  CHECK(ok == n);
}

TEST_CASE("coset table") {
  const auto& P = *pres();
  for (const char* s : {"1", "3+1t", "1+1t", "3", "2", "5+6t"}) {
    QuadIdeal n = parse_level(P.field, s);
    CosetTable T(P, n);
    CHECK(T.size() == proj_line_size(P.field, n));
    std::mt19937_64 rng(1);
    for (int k = 0; k < 30; ++k) {
      long p = static_cast<long>(rng() % T.size());
      // base * transversal(p) lands on p
      CHECK(T.act_word(T.proj_line().base(), T.transversal(p)) == p);
      Word w = random_word(rng, T.num_gens(), 6);
      CHECK(T.act_word(T.act_word(p, w), word_inverse(w)) == p);
    }
  }
}

TEST_CASE("first homology at small levels") {
  CHECK(level("1").H1().to_string() == pres()->abelianization());
  CHECK(level("3+1t").H1().to_string() == "(0, 0), (2, 3), (5, 1)");
  CHECK(level("3-2t").H1().to_string() == "(0, 0), (2, 4), (8, 1)");
  CHECK(level("1-9t").H1().to_string() == "(0, 0), (2, 3), (3, 1), (729, 1)");
  // conjugate levels have isomorphic homology
  CHECK(level("3+1t").H1().same_invariants(level("3-1t").H1()));
  CHECK(level("5+6t").H1().same_invariants(level("5-6t").H1()));
}

TEST_CASE("Schreier rewriting respects products") {
  auto H = level("3+1t");
  const auto& F = H.field();
  std::mt19937_64 rng(3);
  int checked = 0;
  for (int k = 0; k < 400 && checked < 40; ++k) {
    Mat2 a = pres()->eval(random_word(rng, static_cast<int>(pres()->generators.size()), 8));
    Mat2 b = pres()->eval(random_word(rng, static_cast<int>(pres()->generators.size()), 8));
    if (!H.in_gamma0(a) || !H.in_gamma0(b)) continue;
    IntVec ab = H.reduce(mat_mul(F, a, b)), sa = H.reduce(a), sb = H.reduce(b);
    IntVec sum(sa.size());
    for (size_t i = 0; i < sa.size(); ++i) sum[i] = sa[i] + sb[i];
    CHECK(ab == H.H1().reduce(sum));
    ++checked;
  }
  CHECK(checked > 0);
  Mat2 outside{QuadInt(1), QuadInt(0), QuadInt(1), QuadInt(1)};
  CHECK_FALSE(H.in_gamma0(outside));
  CHECK_THROWS(H.reduce(outside));
}
