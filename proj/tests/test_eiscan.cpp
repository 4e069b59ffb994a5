#include "doctest.h"
#include "tjl/eiscan.hpp"
#include "tjl/integer.hpp"

using namespace tjl::eiscan;

TEST_CASE("finite field arithmetic") {
  for (long q : {7L, 11L, 19L}) {
    for (int deg : {1, 2}) {
      FiniteField F(q, deg);
      long n = F.size();
      // every nonzero element satisfies x^(n-1) = 1 and has an inverse
      for (long a = 0; a < q; ++a)
        for (long b = 0; b < (deg == 2 ? q : 1); ++b) {
          FiniteField::Elem x{a, b};
          if (F.is_zero(x)) continue;
          CHECK(F.pow(x, n - 1) == FiniteField::Elem{1, 0});
          CHECK(F.mul(x, F.inv(x)) == FiniteField::Elem{1, 0});
        }
    }
  }
  FiniteField F2(7, 2);
  FiniteField::Elem w{0, 1}, r;
  CHECK(F2.mul(w, w) == F2.from_int(F2.nonresidue()));
  // every element of F_q is a square in F_{q^2}
  for (long a = 1; a < 7; ++a) CHECK(F2.sqrt(F2.from_int(a), r));
  CHECK_THROWS(FiniteField(9, 1));
  CHECK_THROWS(FiniteField(7, 3));
}

TEST_CASE("fifth powers") {
  FiniteField F(11, 1);
  int fifth = 0;
  for (long a = 1; a < 11; ++a) fifth += fifth_power_test(F, F.from_int(a));
  CHECK(fifth == 2);  // the subgroup of index 5
  CHECK_THROWS(fifth_power_test(FiniteField(7, 1), FiniteField(7, 1).from_int(2)));
}

TEST_CASE("quartic roots are roots") {
  for (long q : {41L, 89L, 251L, 331L, 419L}) {
    for (int deg : {1, 2}) {
      FiniteField F(q, deg);
      for (auto& z : quartic_roots(F)) {
        // z^4 - 72 z^3 + 794 z^2 + 72 z + 1
        auto z2 = F.mul(z, z), z3 = F.mul(z2, z), z4 = F.mul(z3, z);
        auto val = F.add(F.add(F.sub(z4, F.mul(F.from_int(72), z3)), F.mul(F.from_int(794), z2)),
                         F.add(F.mul(F.from_int(72), z), F.from_int(1)));
        CHECK(F.is_zero(val));
      }
    }
  }
}

TEST_CASE("binary forms agree with brute force") {
  for (long n = 1; n < 3000; ++n) {
    CHECK(represent(n, 1, 162) == represent_bruteforce(n, 1, 162));
    CHECK(represent(n, 81, 2) == represent_bruteforce(n, 81, 2));
  }
}

TEST_CASE("scans") {
  CHECK(scan(Predicate::eis3, 617) == std::vector<long>{163, 523});
  auto ph3 = scan(Predicate::phantom3, 617);
  REQUIRE(ph3.size() >= 2);
  CHECK(std::vector<long>(ph3.begin(), ph3.begin() + 2) == std::vector<long>{89, 179});
  CHECK(scan(Predicate::eis5, 617) == std::vector<long>{251, 331});
  auto ph5 = scan(Predicate::phantom5, 617);
  REQUIRE(!ph5.empty());
  CHECK(ph5.front() == 419);
  CHECK_THROWS(scan(Predicate::eis3, 1));
  for (long q : scan(Predicate::eis3, 2000)) CHECK(tjl::is_prime(q));
}

TEST_CASE("predicate names") {
  for (auto p : {Predicate::eis3, Predicate::phantom3, Predicate::eis5, Predicate::phantom5})
    CHECK(parse_predicate(to_string(p)) == p);
  CHECK_THROWS(parse_predicate("eis7"));
}
