#pragma once
#include <string>
#include <utility>
#include <vector>

namespace tjl::eiscan {

// F_q (degree 1) or F_{q^2} = F_q[w]/(w^2 - n) with n the least non-residue
class FiniteField {
 public:
  FiniteField(long q, int degree);
  struct Elem {
    long a = 0, b = 0;  // a + b w
    bool operator==(const Elem& o) const { return a == o.a && b == o.b; }
    bool operator!=(const Elem& o) const { return !(*this == o); }
  };
  long characteristic() const { return q_; }
  int degree() const { return deg_; }
  long size() const { return deg_ == 1 ? q_ : q_ * q_; }
  long nonresidue() const { return n_; }
  Elem from_int(long x) const;
  Elem add(const Elem& x, const Elem& y) const;
  Elem sub(const Elem& x, const Elem& y) const;
  Elem mul(const Elem& x, const Elem& y) const;
  Elem pow(Elem x, long e) const;
  Elem inv(const Elem& x) const;
  bool is_zero(const Elem& x) const { return x.a == 0 && x.b == 0; }
  // a square root in this field, if there is one
  bool sqrt(const Elem& x, Elem& r) const;
  std::string to_string(const Elem& x) const;

 private:
  long q_;
  int deg_;
  long n_ = 0;
};

// x^((size-1)/5) = 1; throws unless 5 divides size - 1
bool fifth_power_test(const FiniteField& F, const FiniteField::Elem& x);

// roots of z^4 - 72 z^3 + 794 z^2 + 72 z + 1 in F
std::vector<FiniteField::Elem> quartic_roots(const FiniteField& F);

// all (a, b) with a, b >= 0 and A a^2 + B b^2 = n, by exhaustive enumeration
std::vector<std::pair<long, long>> represent_bruteforce(long n, long A, long B);
// the same by a loop over b with an integer square-root test
std::vector<std::pair<long, long>> represent(long n, long A, long B);

enum class Predicate { eis3, phantom3, eis5, phantom5 };
Predicate parse_predicate(const std::string& s);
std::string to_string(Predicate p);
bool satisfies(Predicate p, long q);
// rational primes q <= bound satisfying the predicate, ascending
std::vector<long> scan(Predicate p, long bound);

}  // namespace tjl::eiscan
