#include <random>
#include <set>

#include "doctest.h"
#include "tjl/quadring.hpp"

using namespace tjl;

namespace {
FieldSpec F2 = FieldSpec::make(-2);
QuadInt q(const char* s) { return parse_quad(s); }
}  // namespace

TEST_CASE("parse and print") {
  CHECK(to_string(q("3+1t")) == "3+1t");
  CHECK(to_string(q("3-5t")) == "3-5t");
  CHECK(q("t") == QuadInt(0, 1));
  CHECK(q("-2t") == QuadInt(0, -2));
  CHECK(q("7") == QuadInt(7, 0));
  CHECK(q(" 1 + 3t ") == QuadInt(1, 3));
  CHECK_THROWS(parse_quad("3+x"));
  CHECK_THROWS(parse_quad(""));
}

TEST_CASE("field data") {
  CHECK(F2.w == 2);
  CHECK(F2.class_number == 1);
  CHECK(F2.euclidean);
  CHECK(F2.norm(q("1+1t")) == 3);
  CHECK(F2.mul(q("1+1t"), q("1-1t")) == QuadInt(3, 0));
  auto F3 = FieldSpec::make(-3);
  CHECK(F3.units().size() == 6);
  CHECK(FieldSpec::make(-1).units().size() == 4);
  CHECK(FieldSpec::make(-491).class_number == 0);
  CHECK_FALSE(FieldSpec::make(-491).euclidean);
}

TEST_CASE("prime splitting") {
  auto f3 = prime_factor(F2, 3);
  REQUIRE(f3.size() == 2);
  CHECK(f3[0].ideal.gen == q("1+1t"));
  CHECK(f3[1].ideal.gen == q("1-1t"));
  CHECK(f3[0].splitting == Splitting::split);
  auto f11 = prime_factor(F2, 11);
  CHECK(f11[0].ideal.gen == q("3+1t"));
  auto f5 = prime_factor(F2, 5);
  REQUIRE(f5.size() == 1);
  CHECK(f5[0].splitting == Splitting::inert);
  CHECK(f5[0].residue_size == 25);
  auto f2 = prime_factor(F2, 2);
  CHECK(f2[0].splitting == Splitting::ramified);
  for (long p : {2L, 3L, 5L, 7L, 11L, 17L, 19L, 97L, 163L, 617L}) {
    QuadInt prod(1);
    Int nprod = 1;
    auto fs = prime_factor(F2, p);
    for (auto& P : fs) {
      prod = F2.mul(prod, P.ideal.gen);
      nprod *= P.ideal.norm;
      if (P.splitting == Splitting::ramified) {
        prod = F2.mul(prod, P.ideal.gen);
        nprod *= P.ideal.norm;
      }
    }
    CHECK(make_ideal(F2, prod).gen == QuadInt(p));
    CHECK(nprod == Int(p) * p);
  }
}

TEST_CASE("euclidean division") {
  auto [qq, r] = euclid_divmod(F2, QuadInt(5), q("1+1t"));
  CHECK(qq == q("2-2t"));
  CHECK(r == QuadInt(-1));
  auto [q1, r1] = euclid_divmod(F2, q("3+7t"), q("3+7t"));
  CHECK(q1 == QuadInt(1));
  CHECK(r1.is_zero());
  CHECK_THROWS(euclid_divmod(F2, QuadInt(1), QuadInt(0)));
  CHECK_THROWS(euclid_divmod(FieldSpec::make(-491), QuadInt(1), QuadInt(2)));
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> d(-1000000, 1000000);
  for (long dd : {-1L, -2L, -3L, -7L, -11L}) {
    auto F = FieldSpec::make(dd);
    for (int i = 0; i < 10000; ++i) {
      QuadInt a(d(rng), d(rng)), b(d(rng) / (1 + i % 1000), d(rng) / (1 + i % 997));
      if (b.is_zero()) continue;
      auto [qq2, rr] = F.divmod(a, b);
      CHECK(F.mul(qq2, b) + rr == a);
      CHECK(F.norm(rr) < F.norm(b));
    }
  }
}

TEST_CASE("canonical generator") {
  CHECK(canonical_generator(F2, q("-1-1t")) == q("1+1t"));
  CHECK(canonical_generator(F2, q("1+1t")) == q("1+1t"));
  CHECK(canonical_generator(F2, q("-3+5t")) == q("3-5t"));
  CHECK_THROWS(canonical_generator(F2, QuadInt(0)));
  std::mt19937_64 rng(5);
  for (long dd : {-1L, -2L, -3L, -7L, -11L}) {
    auto F = FieldSpec::make(dd);
    for (int i = 0; i < 500; ++i) {
      QuadInt x(static_cast<long>(rng() % 201) - 100, static_cast<long>(rng() % 201) - 100);
      if (x.is_zero()) continue;
      QuadInt c = canonical_generator(F, x);
      CHECK(canonical_generator(F, c) == c);
      for (auto& u : F.units()) CHECK(canonical_generator(F, F.mul(u, x)) == c);
    }
  }
}

namespace {
// all unimodular pairs modulo n, classified by scaling with units of O/n
long brute_p1(const FieldSpec& F, const QuadIdeal& n) {
  ResidueRing R(F, n.gen);
  long N = R.size();
  std::vector<long> units;
  for (long x = 0; x < N; ++x)
    if (R.is_unit(x)) units.push_back(x);
  std::set<std::pair<long, long>> seen;
  long classes = 0;
  for (long x = 0; x < N; ++x)
    for (long y = 0; y < N; ++y) {
      // unimodular: ideal (x, y, n) = 1
      QuadInt g = F.gcd(F.gcd(R.lift(x), R.lift(y)), n.gen);
      if (F.norm(g) != 1 || seen.count({x, y})) continue;
      ++classes;
      for (long u : units) seen.insert({R.mul(u, x), R.mul(u, y)});
    }
  return classes;
}
}  // namespace

TEST_CASE("projective line") {
  CHECK(ProjLine(F2, make_ideal(F2, QuadInt(1))).size() == 1);
  CHECK(ProjLine(F2, make_ideal(F2, q("3+1t"))).size() == 12);
  CHECK(ProjLine(F2, make_ideal(F2, QuadInt(3))).size() == 16);
  CHECK(ProjLine(F2, make_ideal(F2, q("1+1t"))).size() == 4);
  for (const auto& n : ideals_up_to(F2, 60)) {
    ProjLine P(F2, n);
    CHECK(P.size() == proj_line_size(F2, n));
    if (n.norm <= 25) CHECK(P.size() == brute_p1(F2, n));
  }
  // multiplicativity over coprime pairs
  auto ids = ideals_up_to(F2, 40);
  for (size_t i = 0; i < ids.size(); ++i)
    for (size_t j = i; j < ids.size(); ++j) {
      if (F2.norm(F2.gcd(ids[i].gen, ids[j].gen)) != 1) continue;
      auto prod = ideal_mul(F2, ids[i], ids[j]);
      CHECK(ProjLine(F2, prod).size() == ProjLine(F2, ids[i]).size() * ProjLine(F2, ids[j]).size());
    }
  // index is a bijection and normalization idempotent
  auto n = make_ideal(F2, F2.mul(q("1+1t"), q("3+1t")));
  ProjLine P(F2, n);
  ResidueRing R(F2, n.gen);
  std::set<long> hit;
  for (long x = 0; x < R.size(); ++x)
    for (long y = 0; y < R.size(); ++y) {
      long i;
      try {
        i = P.index(R.lift(x), R.lift(y));
      } catch (const std::domain_error&) {
        continue;
      }
      hit.insert(i);
      // scaling by a unit does not move the point
      CHECK(P.index(F2.mul(QuadInt(-1), R.lift(x)), F2.mul(QuadInt(-1), R.lift(y))) == i);
      CHECK(P.index(F2.mul(QuadInt(5), R.lift(x)), F2.mul(QuadInt(5), R.lift(y))) == i);
    }
  CHECK(static_cast<long>(hit.size()) == P.size());
  CHECK(P.index(QuadInt(0), QuadInt(1)) == P.base());
}

TEST_CASE("residue ring inverses") {
  for (const char* g : {"3+1t", "5", "1+1t", "3"}) {
    ResidueRing R(F2, q(g));
    for (long x = 0; x < R.size(); ++x)
      if (R.is_unit(x)) CHECK(R.mul(x, R.inv(x)) == R.one());
  }
}

TEST_CASE("levels and ideals") {
  auto n = parse_level(F2, "3*3+2t");
  CHECK(n.norm == 9 * 17);
  auto fs = factor_ideal(F2, n);
  CHECK(fs.size() == 3);
  CHECK(ideal_divides(F2, make_ideal(F2, q("1+1t")), n));
  CHECK(ideal_div(F2, n, make_ideal(F2, QuadInt(3))).norm == 17);
  auto ids = ideals_up_to(F2, 12);
  std::vector<long> norms;
  for (auto& i : ids) norms.push_back(i.norm.get_si());
  CHECK(norms == std::vector<long>{1, 2, 3, 3, 4, 6, 6, 8, 9, 9, 9, 11, 11, 12, 12});
}
