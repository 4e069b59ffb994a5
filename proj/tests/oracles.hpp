#pragma once
#include <functional>
#include <random>

#include "tjl/abelian.hpp"

namespace tjl::oracle {

inline Int det_bareiss(std::vector<std::vector<Int>> a) {
  int n = static_cast<int>(a.size());
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int s = k + 1;
      while (s < n && a[s][k] == 0) ++s;
      if (s == n) return 0;
      std::swap(a[k], a[s]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

// invariant factors from gcds of k x k minors
inline IntVec minor_oracle(const IntMatrix& M) {
  int m = M.rows(), n = M.cols();
  IntVec out;
  Int prev = 1;
  for (int k = 1; k <= std::min(m, n); ++k) {
    Int g = 0;
    std::vector<int> rs(k), cs(k);
    std::function<void(int, int, std::vector<int>&, int, std::vector<std::vector<int>>&)> choose =
        [&](int start, int left, std::vector<int>& cur, int lim, std::vector<std::vector<int>>& acc) {
          if (left == 0) {
            acc.push_back(cur);
            return;
          }
          for (int i = start; i <= lim - left; ++i) {
            cur.push_back(i);
            choose(i + 1, left - 1, cur, lim, acc);
            cur.pop_back();
          }
        };
    std::vector<std::vector<int>> rsets, csets;
    std::vector<int> cur;
    choose(0, k, cur, m, rsets);
    choose(0, k, cur, n, csets);
    for (auto& R : rsets)
      for (auto& C : csets) {
        std::vector<std::vector<Int>> a(k, std::vector<Int>(k));
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) a[i][j] = M(R[i], C[j]);
        g = igcd(g, det_bareiss(a));
      }
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

inline IntMatrix random_matrix(std::mt19937_64& rng, int m, int n, int lo, int hi, double density = 1.0) {
  IntMatrix M(m, n);
  std::uniform_int_distribution<int> d(lo, hi);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      if (u(rng) < density) M(i, j) = d(rng);
  return M;
}

inline IntVec nontrivial(const IntVec& v) {
  IntVec o;
  for (auto& x : v)
    if (x > 1) o.push_back(x);
  return o;
}

}  // namespace tjl::oracle
