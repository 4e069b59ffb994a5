#pragma once
#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tjl {

using Int = mpz_class;

inline Int iabs(const Int& x) { return x < 0 ? Int(-x) : x; }
inline Int igcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}
inline Int ilcm(const Int& a, const Int& b) {
  Int g;
  mpz_lcm(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}
// floor division and matching nonnegative remainder (for b > 0)
inline Int fdiv(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}
inline Int fmod(const Int& a, const Int& b) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}
inline bool is_prime(const Int& n) { return n > 1 && mpz_probab_prime_p(n.get_mpz_t(), 30) > 0; }
inline bool is_prime(long n) { return is_prime(Int(n)); }
inline long to_long(const Int& x) { return x.get_si(); }
inline bool fits_long(const Int& x) { return x.fits_slong_p(); }

// prime -> exponent
std::map<Int, int> factor_integer(Int n);
// p-adic valuation, n != 0
int valuation(Int n, const Int& p);
// n with all primes in S removed
Int strip_primes(Int n, const std::vector<Int>& S);
// odd part
Int odd_part(Int n);
Int ipow(const Int& b, unsigned long e);
// extended gcd on machine integers: returns g, sets x,y with a x + b y = g
long ext_gcd(long a, long b, long& x, long& y);
long mod_pow(long b, long e, long m);

}  // namespace tjl
