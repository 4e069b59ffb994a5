#include "tjl/integer.hpp"

#include <algorithm>
#include <random>

namespace tjl {

namespace {

Int rho(const Int& n) {
  if (n % 2 == 0) return 2;
  std::mt19937_64 rng(0x7a1c5eedULL);
  while (true) {
    Int c = Int(static_cast<unsigned long>(rng() % 1000003)) + 1;
    Int y = Int(static_cast<unsigned long>(rng() % 1000003)) + 2, x, q = 1, g = 1, ys;
    unsigned long r = 1, m = 128;
    auto f = [&](const Int& v) { Int t = v * v + c; return Int(t % n); };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = (q * iabs(Int(x - y))) % n;
        }
        g = igcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = igcd(iabs(Int(x - ys)), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_rec(const Int& n, std::map<Int, int>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out[n]++;
    return;
  }
  Int d = rho(n);
  factor_rec(d, out);
  factor_rec(Int(n / d), out);
}

}  // namespace

std::map<Int, int> factor_integer(Int n) {
  std::map<Int, int> out;
  n = iabs(n);
  if (n == 0) return out;
  for (unsigned long p = 2; p < 10000 && Int(p) * p <= n; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      out[Int(p)]++;
      n /= p;
    }
  }
  factor_rec(n, out);
  return out;
}

int valuation(Int n, const Int& p) {
  int v = 0;
  n = iabs(n);
  while (n != 0 && n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

Int strip_primes(Int n, const std::vector<Int>& S) {
  n = iabs(n);
  for (const auto& p : S)
    while (n != 0 && n % p == 0) n /= p;
  return n;
}

Int odd_part(Int n) { return strip_primes(std::move(n), {Int(2)}); }

Int ipow(const Int& b, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

long ext_gcd(long a, long b, long& x, long& y) {
  long x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    long q = a / b, t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1; x0 = x1; x1 = t;
    t = y0 - q * y1; y0 = y1; y1 = t;
  }
  if (a < 0) { a = -a; x0 = -x0; y0 = -y0; }
  x = x0;
  y = y0;
  return a;
}

long mod_pow(long b, long e, long m) {
  __int128 r = 1, x = ((b % m) + m) % m;
  while (e > 0) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return static_cast<long>(r);
}

}  // namespace tjl
