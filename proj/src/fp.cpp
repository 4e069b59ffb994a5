#include "tjl/fp.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace tjl::fp {

long reduce(long a, long l) {
  a %= l;
  return a < 0 ? a + l : a;
}

long mulmod(long a, long b, long l) { return static_cast<long>(static_cast<__int128>(a) * b % l); }

long inv(long a, long l) {
  long x, y;
  long g = ext_gcd(reduce(a, l), l, x, y);
  if (g != 1) throw std::domain_error("not invertible mod l");
  return reduce(x, l);
}

long powmod(long a, const Int& e, long l) {
  Int r;
  Int b(reduce(a, l)), m(l);
  mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r.get_si();
}

int deg(const Poly& f) { return static_cast<int>(f.size()) - 1; }

Poly trim(Poly f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
  return f;
}

Poly monic(const Poly& f, long l) {
  if (f.empty()) return f;
  return scale(f, inv(f.back(), l), l);
}

Poly add(const Poly& f, const Poly& g, long l) {
  Poly r(std::max(f.size(), g.size()), 0);
  for (size_t i = 0; i < f.size(); ++i) r[i] = f[i];
  for (size_t i = 0; i < g.size(); ++i) r[i] = reduce(r[i] + g[i], l);
  return trim(r);
}

Poly sub(const Poly& f, const Poly& g, long l) {
  Poly r(std::max(f.size(), g.size()), 0);
  for (size_t i = 0; i < f.size(); ++i) r[i] = f[i];
  for (size_t i = 0; i < g.size(); ++i) r[i] = reduce(r[i] - g[i], l);
  return trim(r);
}

Poly mul(const Poly& f, const Poly& g, long l) {
  if (f.empty() || g.empty()) return {};
  Poly r(f.size() + g.size() - 1, 0);
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    for (size_t j = 0; j < g.size(); ++j) r[i + j] = reduce(r[i + j] + mulmod(f[i], g[j], l), l);
  }
  return trim(r);
}

Poly scale(const Poly& f, long c, long l) {
  Poly r(f.size());
  for (size_t i = 0; i < f.size(); ++i) r[i] = mulmod(f[i], reduce(c, l), l);
  return trim(r);
}

void divmod(const Poly& f, const Poly& g, long l, Poly& q, Poly& r) {
  if (g.empty()) throw std::domain_error("polynomial division by zero");
  r = f;
  q.assign(std::max(0, deg(f) - deg(g) + 1), 0);
  long li = inv(g.back(), l);
  for (int k = deg(r); k >= deg(g); --k) {
    long c = mulmod(r[k], li, l);
    if (c == 0) continue;
    q[k - deg(g)] = c;
    for (int j = 0; j <= deg(g); ++j) r[k - deg(g) + j] = reduce(r[k - deg(g) + j] - mulmod(c, g[j], l), l);
  }
  r = trim(r);
  q = trim(q);
}

Poly mod(const Poly& f, const Poly& g, long l) {
  Poly q, r;
  divmod(f, g, l, q, r);
  return r;
}

Poly gcd(Poly f, Poly g, long l) {
  f = trim(f);
  g = trim(g);
  while (!g.empty()) {
    Poly r = mod(f, g, l);
    f = std::move(g);
    g = std::move(r);
  }
  return monic(f, l);
}

Poly powmod(const Poly& b, const Int& e, const Poly& m, long l) {
  Poly r{1};
  r = mod(r, m, l);
  Poly x = mod(b, m, l);
  size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    r = mod(mul(r, r, l), m, l);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = mod(mul(r, x, l), m, l);
  }
  return r;
}

Poly derivative(const Poly& f, long l) {
  Poly r;
  for (size_t i = 1; i < f.size(); ++i) r.push_back(mulmod(f[i], reduce(static_cast<long>(i), l), l));
  return trim(r);
}

Poly from_ints(const std::vector<long>& c, long l) {
  Poly r;
  for (long x : c) r.push_back(reduce(x, l));
  return trim(r);
}

namespace {

Poly exact_quo(const Poly& f, const Poly& g, long l) {
  Poly q, r;
  divmod(f, g, l, q, r);
  if (!r.empty()) throw std::logic_error("inexact polynomial division");
  return q;
}

void squarefree(const Poly& f, long l, int mult, std::vector<std::pair<Poly, int>>& out) {
  if (deg(f) < 1) return;
  Poly c = gcd(f, derivative(f, l), l);
  Poly w = exact_quo(f, c, l);
  int i = 1;
  while (deg(w) > 0) {
    Poly y = gcd(w, c, l);
    Poly z = exact_quo(w, y, l);
    if (deg(z) > 0) out.emplace_back(z, i * mult);
    ++i;
    w = y;
    c = exact_quo(c, y, l);
  }
  if (deg(c) > 0) {
    Poly root;  // c is a polynomial in x^l; coefficients are fixed by Frobenius
    for (size_t k = 0; k < c.size(); k += static_cast<size_t>(l)) root.push_back(c[k]);
    squarefree(trim(root), l, mult * static_cast<int>(l), out);
  }
}

void equal_degree(const Poly& g, int d, long l, std::mt19937_64& rng, std::vector<Poly>& out) {
  if (deg(g) == d) {
    out.push_back(g);
    return;
  }
  std::uniform_int_distribution<long> U(0, l - 1);
  Int e = (ipow(Int(l), d) - 1) / 2;
  for (;;) {
    Poly a(deg(g));
    for (auto& x : a) x = U(rng);
    a = trim(a);
    if (deg(a) < 1) continue;
    Poly b;
    if (l == 2) {
      Poly t = a, s = a;
      for (int k = 1; k < d; ++k) {
        t = mod(mul(t, t, l), g, l);
        s = add(s, t, l);
      }
      b = s;
    } else {
      b = sub(powmod(a, e, g, l), Poly{1}, l);
    }
    Poly h = gcd(b, g, l);
    if (deg(h) > 0 && deg(h) < deg(g)) {
      equal_degree(h, d, l, rng, out);
      equal_degree(exact_quo(g, h, l), d, l, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<std::pair<Poly, int>> factor(const Poly& f0, long l) {
  Poly f = monic(trim(f0), l);
  if (f.empty()) throw std::domain_error("cannot factor zero");
  std::vector<std::pair<Poly, int>> sq, out;
  squarefree(f, l, 1, sq);
  std::mt19937_64 rng(12345);
  for (auto& [g0, m] : sq) {
    Poly g = g0;
    Poly h{0, 1};
    for (int i = 1; 2 * i <= deg(g); ++i) {
      h = powmod(h, Int(l), g, l);
      Poly d = gcd(sub(h, Poly{0, 1}, l), g, l);
      if (deg(d) > 0) {
        std::vector<Poly> parts;
        equal_degree(d, i, l, rng, parts);
        for (auto& p : parts) out.emplace_back(p, m);
        g = exact_quo(g, d, l);
        h = mod(h, g, l);
      }
    }
    if (deg(g) > 0) out.emplace_back(g, m);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.first.size() != y.first.size()) return x.first.size() < y.first.size();
    return std::lexicographical_compare(x.first.rbegin(), x.first.rend(), y.first.rbegin(), y.first.rend());
  });
  // merge repeated factors coming from different squarefree layers
  std::vector<std::pair<Poly, int>> merged;
  for (auto& p : out) {
    if (!merged.empty() && merged.back().first == p.first)
      merged.back().second += p.second;
    else
      merged.push_back(p);
  }
  return merged;
}

std::string to_string(const Poly& f, long l) {
  if (f.empty()) return "0";
  std::string s;
  for (int k = deg(f); k >= 0; --k) {
    long c = f[k];
    if (c == 0) continue;
    if (2 * c > l) c -= l;
    bool neg = c < 0;
    long a = neg ? -c : c;
    if (s.empty())
      s += neg ? "-" : "";
    else
      s += neg ? "-" : "+";
    if (a != 1 || k == 0) s += std::to_string(a);
    if (k >= 1) s += "x";
    if (k >= 2) s += "^" + std::to_string(k);
  }
  return s;
}

Mat mat_mul(const Mat& a, const Mat& b, long l) {
  size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
  Mat r(n, std::vector<long>(m, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (size_t j = 0; j < m; ++j) r[i][j] = reduce(r[i][j] + mulmod(a[i][t], b[t][j], l), l);
    }
  return r;
}

Mat mat_eval(const Poly& f, const Mat& a, long l) {
  size_t n = a.size();
  Mat r(n, std::vector<long>(n, 0));
  for (int k = deg(f); k >= 0; --k) {
    r = mat_mul(r, a, l);
    for (size_t i = 0; i < n; ++i) r[i][i] = reduce(r[i][i] + f[k], l);
  }
  return r;
}

int rank(Mat a, long l) {
  int rk = 0;
  size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (size_t c = 0; c < cols && rk < static_cast<int>(rows); ++c) {
    size_t p = rk;
    while (p < rows && reduce(a[p][c], l) == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rk]);
    long iv = inv(a[rk][c], l);
    for (size_t i = 0; i < rows; ++i) {
      if (i == static_cast<size_t>(rk) || reduce(a[i][c], l) == 0) continue;
      long u = mulmod(reduce(a[i][c], l), iv, l);
      for (size_t j = c; j < cols; ++j) a[i][j] = reduce(a[i][j] - mulmod(u, a[rk][j], l), l);
    }
    ++rk;
  }
  return rk;
}

Poly charpoly(const Mat& a0, long l) {
  size_t n = a0.size();
  Mat a = a0;
  for (auto& row : a)
    for (auto& x : row) x = reduce(x, l);
  // similarity reduction to upper Hessenberg form
  for (size_t j = 0; j + 2 < n; ++j) {
    size_t i = j + 1;
    while (i < n && a[i][j] == 0) ++i;
    if (i == n) continue;
    if (i != j + 1) {
      std::swap(a[i], a[j + 1]);
      for (size_t r = 0; r < n; ++r) std::swap(a[r][i], a[r][j + 1]);
    }
    long iv = inv(a[j + 1][j], l);
    for (size_t k = j + 2; k < n; ++k) {
      long u = mulmod(a[k][j], iv, l);
      if (u == 0) continue;
      for (size_t c = 0; c < n; ++c) a[k][c] = reduce(a[k][c] - mulmod(u, a[j + 1][c], l), l);
      for (size_t r = 0; r < n; ++r) a[r][j + 1] = reduce(a[r][j + 1] + mulmod(u, a[r][k], l), l);
    }
  }
  std::vector<Poly> p(n + 1);
  p[0] = {1};
  for (size_t m = 1; m <= n; ++m) {
    p[m] = mul(Poly{reduce(-a[m - 1][m - 1], l), 1}, p[m - 1], l);
    long prod = 1;
    for (size_t i = m - 1; i-- > 0;) {
      prod = mulmod(prod, a[i + 1][i], l);
      long c = mulmod(prod, a[i][m - 1], l);
      if (c != 0) p[m] = sub(p[m], scale(p[i], c, l), l);
    }
  }
  return p[n];
}

Poly minpoly(const Mat& a, long l) {
  size_t n = a.size();
  if (n == 0) return {1};
  // find the first power of a dependent on the lower ones
  std::vector<std::vector<long>> basis;  // echelon rows over n*n coordinates, with combination tails
  std::vector<size_t> pivots;
  Mat pw(n, std::vector<long>(n, 0));
  for (size_t i = 0; i < n; ++i) pw[i][i] = 1;
  for (size_t k = 0; k <= n; ++k) {
    std::vector<long> v;
    for (auto& row : pw)
      for (long x : row) v.push_back(reduce(x, l));
    std::vector<long> comb(n + 1, 0);
    comb[k] = 1;
    for (size_t b = 0; b < basis.size(); ++b) {
      long c = v[pivots[b]];
      if (c == 0) continue;
      for (size_t j = 0; j < v.size(); ++j) v[j] = reduce(v[j] - mulmod(c, basis[b][j], l), l);
      for (size_t j = 0; j <= n; ++j) comb[j] = reduce(comb[j] - mulmod(c, basis[b][v.size() + j], l), l);
    }
    size_t piv = 0;
    while (piv < v.size() && v[piv] == 0) ++piv;
    if (piv == v.size()) return monic(trim(comb), l);
    long iv = inv(v[piv], l);
    std::vector<long> row;
    for (long x : v) row.push_back(mulmod(x, iv, l));
    for (long x : comb) row.push_back(mulmod(x, iv, l));
    basis.push_back(row);
    pivots.push_back(piv);
    pw = mat_mul(pw, a, l);
  }
  throw std::logic_error("minimal polynomial search failed");
}

}  // namespace tjl::fp
