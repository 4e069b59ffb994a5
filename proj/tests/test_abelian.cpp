#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tjl/abelian.hpp"

using namespace tjl;
using namespace tjl::oracle;

TEST_CASE("snf examples") {
  auto s = snf(IntMatrix::from_rows({{2, 4}, {6, 8}}));
  CHECK(s.diagonal == IntVec{2, 4});
  auto I = snf(IntMatrix::identity(4));
  CHECK(I.diagonal == IntVec{1, 1, 1, 1});
  CHECK(I.cokernel_free_rank() == 0);
  auto z = snf(IntMatrix(1, 1));
  CHECK(z.rank() == 0);
  CHECK(z.cokernel_free_rank() == 1);
  auto G = FgAbGroup::from_relations(IntMatrix(1, 1));
  CHECK(G.to_string() == "(0, 1)");
}

TEST_CASE("dense snf transforms and chain") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 500; ++t) {
    int m = 1 + static_cast<int>(rng() % 6), n = 1 + static_cast<int>(rng() % 6);
    IntMatrix M = random_matrix(rng, m, n, -9, 9);
    auto s = snf(M);
    IntMatrix D = s.U * M * s.V;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) CHECK(D(i, j) == ((i == j && i < s.rank()) ? s.diagonal[i] : Int(0)));
    for (int i = 1; i < s.rank(); ++i) CHECK(s.diagonal[i] % s.diagonal[i - 1] == 0);
  }
}

TEST_CASE("snf against minor oracle on >= 10^4 matrices") {
  std::mt19937_64 rng(2);
  int count = 0;
  for (int t = 0; t < 10200; ++t) {
    int m, n;
    if (t % 50 == 0) {
      m = 8;
      n = 1 + static_cast<int>(rng() % 8);
    } else {
      m = 1 + static_cast<int>(rng() % 5);
      n = 1 + static_cast<int>(rng() % 5);
    }
    IntMatrix M = random_matrix(rng, m, n, -9, 9, (t % 3 == 0) ? 0.4 : 1.0);
    IntVec oracle = minor_oracle(M);
    auto s = snf(M);
    CHECK(s.diagonal == oracle);
    auto sp = sparse_smith(SparseMatrix::from_dense(M));
    IntVec d;
    for (auto& [c, v] : sp.torsion) d.push_back(v);
    CHECK(d == nontrivial(oracle));
    CHECK(static_cast<int>(sp.free_cols.size()) == n - static_cast<int>(oracle.size()));
    ++count;
  }
  CHECK(count >= 10000);
}

TEST_CASE("cokernel order equals |det|") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 300; ++t) {
    int n = 1 + static_cast<int>(rng() % 7);
    IntMatrix M = random_matrix(rng, n, n, -20, 20);
    std::vector<std::vector<Int>> a(n, std::vector<Int>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a[i][j] = M(i, j);
    Int det = abs(det_bareiss(a));
    auto G = FgAbGroup::from_relations(M);
    if (det == 0)
      CHECK(G.free_rank() > 0);
    else
      CHECK(G.order() == det);
  }
}

TEST_CASE("coordinates and lifts") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    int m = 1 + static_cast<int>(rng() % 12), n = 1 + static_cast<int>(rng() % 10);
    IntMatrix M = random_matrix(rng, m, n, -4, 4, 0.5);
    auto G = FgAbGroup::from_relations(M);
    // relations map to zero
    for (int i = 0; i < m; ++i) {
      auto c = G.coords(M.row(i));
      for (auto& x : c) CHECK(x == 0);
    }
    // lifts are sections
    for (int j = 0; j < G.num_generators(); ++j) {
      auto c = G.coords(G.lift(j));
      for (int k = 0; k < G.num_generators(); ++k) CHECK(c[k] == (k == j ? 1 : 0));
    }
    // coords is additive
    IntVec a(n), b(n), ab(n);
    for (int i = 0; i < n; ++i) {
      a[i] = static_cast<long>(rng() % 21) - 10;
      b[i] = static_cast<long>(rng() % 21) - 10;
      ab[i] = a[i] + b[i];
    }
    auto ca = G.coords(a), cb = G.coords(b), cab = G.coords(ab);
    IntVec sum(G.num_generators());
    for (int k = 0; k < G.num_generators(); ++k) sum[k] = ca[k] + cb[k];
    CHECK(G.reduce(sum) == cab);
  }
}

TEST_CASE("hnf and membership") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 200; ++t) {
    int m = 1 + static_cast<int>(rng() % 6), n = 1 + static_cast<int>(rng() % 6);
    IntMatrix M = random_matrix(rng, m, n, -9, 9);
    auto h = hnf(M);
    CHECK(h.U * M == h.H);
    IntVec v(n);
    IntVec coef(m);
    for (int i = 0; i < m; ++i) coef[i] = static_cast<long>(rng() % 7) - 3;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) v[j] += coef[i] * M(i, j);
    IntVec c;
    REQUIRE(in_row_lattice(h, v, &c));
    IntVec back(n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) back[j] += c[i] * M(i, j);
    CHECK(back == v);
  }
  auto h = hnf(IntMatrix::from_rows({{2, 0}, {0, 3}}));
  CHECK_FALSE(in_row_lattice(h, {1, 0}));
  CHECK(in_row_lattice(h, {4, 9}));
}

TEST_CASE("kernel and cokernel examples") {
  auto Z9 = FgAbGroup::from_invariants({9}, 0);
  auto f = AbHom(Z9, Z9, IntMatrix::from_rows({{3}}));
  auto [K, inc] = f.kernel();
  auto [C, pr] = f.cokernel();
  CHECK(K.to_string() == "(0, 0), (3, 1)");
  CHECK(C.to_string() == "(0, 0), (3, 1)");
  CHECK((f * inc).is_zero());
  CHECK((pr * f).is_zero());
  auto Z6 = FgAbGroup::from_invariants({6}, 0), Z10 = FgAbGroup::from_invariants({10}, 0);
  auto z = AbHom::zero(Z6, Z10);
  CHECK(z.cokernel().first.to_string() == "(0, 0), (2, 1), (5, 1)");
  // malformed: Z/2 -> Z, 1 -> 1
  auto Z2 = FgAbGroup::from_invariants({2}, 0), Z = FgAbGroup::from_invariants({}, 1);
  CHECK_THROWS_AS(AbHom(Z2, Z, IntMatrix::from_rows({{1}})), std::domain_error);
  CHECK_NOTHROW(AbHom(Z, Z2, IntMatrix::from_rows({{1}})));
}

TEST_CASE("kernel orders by brute force") {
  std::mt19937_64 rng(7);
  auto random_group = [&]() {
    IntVec t;
    Int ord = 1;
    int k = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < k; ++i) {
      long d = 2 + static_cast<long>(rng() % 9);
      if (ord * d > 200) break;
      ord *= d;
      t.push_back(d);
    }
    return FgAbGroup::from_invariants(t, 0);
  };
  for (int trial = 0; trial < 300; ++trial) {
    auto S = random_group(), T = random_group();
    // random homomorphism: pick images then scale rows to respect orders
    IntMatrix m(S.num_generators(), T.num_generators());
    for (int i = 0; i < S.num_generators(); ++i)
      for (int j = 0; j < T.num_generators(); ++j) {
        Int tj = T.modulus(j), si = S.modulus(i);
        Int step = tj / igcd(si, tj);  // si * x == 0 mod tj iff step | x
        m(i, j) = step * static_cast<long>(rng() % 10);
      }
    AbHom f(S, T, m);
    long ker = 0, total = 0;
    std::vector<long> idx(S.num_generators(), 0);
    while (true) {
      IntVec x(idx.begin(), idx.end());
      auto y = f.apply(x);
      bool zero = std::all_of(y.begin(), y.end(), [](const Int& v) { return v == 0; });
      ker += zero;
      ++total;
      int p = 0;
      while (p < S.num_generators() && ++idx[p] == S.modulus(p).get_si()) idx[p++] = 0;
      if (p == S.num_generators()) break;
    }
    CHECK(total == S.order().get_si());
    auto [K, inc] = f.kernel();
    CHECK(K.order() == ker);
    Int im = S.order() / K.order();
    CHECK(f.image_order() == im);
    CHECK(f.cokernel().first.order() * im == T.order());
    CHECK((f * inc).is_zero());
  }
}

TEST_CASE("primary parts and localization") {
  auto Z12 = FgAbGroup::from_invariants({12}, 0);
  CHECK(primary_part(Z12, 2).to_string() == "(0, 0), (4, 1)");
  auto G = FgAbGroup::from_invariants({2, 2, 2, 5}, 0);
  CHECK(localize_away(G, {2}).to_string() == "(0, 0), (5, 1)");
  auto row = FgAbGroup::parse("(0, 0), (2, 3), (5, 1)");
  CHECK(row.to_string() == "(0, 0), (2, 3), (5, 1)");
  CHECK(localize_away(row, {2}).to_string() == "(0, 0), (5, 1)");
  auto H = FgAbGroup::parse("(0,2),(2,9),(4,1),(8,1),(64,1)");
  CHECK(H.to_string() == "(0, 2), (2, 9), (4, 1), (8, 1), (64, 1)");
  CHECK(H.free_rank() == 2);
  CHECK_THROWS(H.order());
  // primary part plus localization reconstructs torsion
  auto M = FgAbGroup::parse("(0,1),(2,2),(3,1),(9,2),(5,1)");
  CHECK(primary_part(M, 3).order() * localize_away(M, {3}).torsion_order() == M.torsion_order());
}

TEST_CASE("direct sums and block maps") {
  auto A = FgAbGroup::from_invariants({4}, 0), B = FgAbGroup::from_invariants({6}, 0);
  auto S = direct_sum({A, B});
  CHECK(S.to_string() == "(0, 0), (2, 1), (3, 1), (4, 1)");
  auto idA = AbHom::identity(A);
  auto toA = AbHom(B, A, IntMatrix::from_rows({{2}}));
  auto f = AbHom::from_sum(S, {A, B}, {idA, toA});
  CHECK(f.cokernel().first.is_trivial());
  auto g = AbHom::into_sum(S, {A, B}, {idA, AbHom(A, B, IntMatrix::from_rows({{3}}))});
  CHECK(g.kernel().first.is_trivial());
  CHECK((f * g) == AbHom::scalar(A, 7));
}

TEST_CASE("induced and restricted maps") {
  auto G = FgAbGroup::from_invariants({2, 4}, 1);
  auto T = AbHom(G, G, IntMatrix::from_rows({{1, 2, 0}, {0, 3, 0}, {1, 0, 5}}));
  auto two = AbHom::scalar(G, 2);
  auto [C, pr] = two.cokernel();
  auto Tc = T.induced_on(pr);
  CHECK(Tc * pr == pr * T);
  auto [K, inc] = two.kernel();
  auto Tk = T.restricted_to(inc);
  CHECK(inc * Tk == T * inc);
}
