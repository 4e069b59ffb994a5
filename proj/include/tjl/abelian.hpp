#pragma once
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tjl/integer.hpp"

namespace tjl {

using IntVec = std::vector<Int>;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(int r, int c) : r_(r), c_(c), a_(static_cast<size_t>(r) * c) {}
  static IntMatrix identity(int n);
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);
  int rows() const { return r_; }
  int cols() const { return c_; }
  Int& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
  const Int& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }
  IntVec row(int i) const;
  void set_row(int i, const IntVec& v);
  IntMatrix operator*(const IntMatrix& o) const;
  IntMatrix operator+(const IntMatrix& o) const;
  IntMatrix operator-(const IntMatrix& o) const;
  bool operator==(const IntMatrix& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
  IntMatrix transpose() const;
  bool is_zero() const;
  std::string to_string() const;

 private:
  int r_ = 0, c_ = 0;
  std::vector<Int> a_;
};

struct SparseEntry {
  int col;
  Int val;
};
using SparseRow = std::vector<SparseEntry>;  // sorted by column, no zeros

struct SparseMatrix {
  int cols = 0;
  std::vector<SparseRow> rows;
  void add_row(SparseRow r);
  // accumulate a list of (col, val) pairs with repeats into a row
  static SparseRow make_row(std::vector<std::pair<int, long>> entries);
  IntMatrix to_dense() const;
  static SparseMatrix from_dense(const IntMatrix& m);
  size_t nnz() const;
};

// U * M = H with H in row echelon form, pivots positive, entries above pivots reduced
struct HermiteForm {
  IntMatrix H, U;
  int rank = 0;
  std::vector<int> pivot_cols;
};
HermiteForm hnf(const IntMatrix& M);
// is v in the row lattice of the HNF; if so optionally return coefficients w.r.t. the rows of H
bool in_row_lattice(const HermiteForm& hf, const IntVec& v, IntVec* coeffs = nullptr);

// U * M * V = D (dense, small matrices)
struct SmithForm {
  IntVec diagonal;  // nonzero diagonal entries, d1 | d2 | ...
  int rows = 0, cols = 0;
  IntMatrix U, V;
  int rank() const { return static_cast<int>(diagonal.size()); }
  int cokernel_free_rank() const { return cols - rank(); }
  IntVec invariant_factors() const;  // entries > 1
};
SmithForm snf(const IntMatrix& M);

// column operation log of the sparse elimination; a_dst -= k * a_src
struct ColumnStep {
  int src;
  std::vector<std::pair<int, Int>> ops;
};
struct ColumnLog {
  std::vector<ColumnStep> steps;
  void forward(IntVec& a) const;
  void backward(IntVec& b) const;
  size_t size() const;
};

struct SparseSmithResult {
  std::vector<std::pair<int, Int>> torsion;  // (column, d) with d > 1, chain order
  std::vector<int> free_cols;
  int unit_pivots = 0;
  ColumnLog log;
};
// cokernel structure of the row lattice of M inside Z^cols
SparseSmithResult sparse_smith(SparseMatrix M);

class FgAbGroup {
 public:
  FgAbGroup() = default;
  static FgAbGroup from_relations(const SparseMatrix& rels);
  static FgAbGroup from_relations(const IntMatrix& rels);
  static FgAbGroup from_invariants(const IntVec& torsion, int free_rank);
  static FgAbGroup parse(const std::string& s);  // "(0,r),(d,m),..."

  int ambient_rank() const { return n_; }
  int num_generators() const { return static_cast<int>(mods_.size()); }
  int free_rank() const;
  IntVec torsion_invariants() const;
  const Int& modulus(int j) const { return mods_[j]; }  // 0 for a free generator
  const IntVec& moduli() const { return mods_; }
  Int torsion_order() const;
  bool is_finite() const { return free_rank() == 0; }
  Int order() const;  // throws if infinite
  bool is_trivial() const { return mods_.empty(); }

  IntVec coords(IntVec ambient) const;  // canonical, reduced
  IntVec coords_sparse(const std::vector<std::pair<int, Int>>& ambient) const;
  IntVec reduce(IntVec canonical) const;
  IntVec lift(int j) const;  // ambient vector of canonical generator j
  IntVec lift_vector(const IntVec& canonical) const;

  // (prime power, multiplicity), ascending
  std::vector<std::pair<Int, int>> prime_power_counts() const;
  std::string to_string() const;
  bool same_invariants(const FgAbGroup& o) const;

 private:
  int n_ = 0;
  IntVec mods_;  // torsion in chain order, then zeros for free
  std::vector<int> cols_;
  std::shared_ptr<const ColumnLog> log_;
};

FgAbGroup primary_part(const FgAbGroup& G, const Int& p);
FgAbGroup localize_away(const FgAbGroup& G, const std::vector<Int>& S);
FgAbGroup direct_sum(const std::vector<FgAbGroup>& parts);
// invariant string of a group given by invariant factors
std::string invariant_string(const std::vector<std::pair<Int, int>>& prime_powers, int free_rank);

class AbHom {
 public:
  AbHom() = default;
  // rows: image of each canonical source generator in canonical target coordinates
  AbHom(FgAbGroup src, FgAbGroup tgt, IntMatrix m);
  static AbHom zero(const FgAbGroup& s, const FgAbGroup& t);
  static AbHom identity(const FgAbGroup& g);
  static AbHom scalar(const FgAbGroup& g, const Int& k);
  // homomorphism out of a direct sum given componentwise
  static AbHom from_sum(const FgAbGroup& sum, const std::vector<FgAbGroup>& parts, const std::vector<AbHom>& maps);
  // homomorphism into a direct sum given componentwise
  static AbHom into_sum(const FgAbGroup& sum, const std::vector<FgAbGroup>& parts, const std::vector<AbHom>& maps);

  const FgAbGroup& source() const { return src_; }
  const FgAbGroup& target() const { return tgt_; }
  const IntMatrix& matrix() const { return m_; }
  IntVec apply(const IntVec& x) const;
  bool certificate() const;

  AbHom operator*(const AbHom& f) const;  // this after f
  AbHom operator+(const AbHom& o) const;
  AbHom operator-(const AbHom& o) const;
  AbHom scaled(const Int& k) const;
  bool operator==(const AbHom& o) const;
  bool is_zero() const;

  std::pair<FgAbGroup, AbHom> kernel() const;
  std::pair<FgAbGroup, AbHom> cokernel() const;
  Int image_order() const;  // requires finite source or target
  // the map induced on a quotient: p : G -> Q surjective, this : G -> G commuting
  AbHom induced_on(const AbHom& proj) const;
  // restriction to a subgroup given by an inclusion i : K -> G, landing in K
  AbHom restricted_to(const AbHom& incl) const;
  // the same map with target K, given i : K -> target containing the image
  AbHom corestricted(const AbHom& incl) const;

 private:
  FgAbGroup src_, tgt_;
  IntMatrix m_;
};

// solves f(x) = y for a fixed f, reusing one Hermite form
class PreimageSolver {
 public:
  explicit PreimageSolver(const AbHom& f);
  bool solve(const IntVec& y, IntVec& x) const;

 private:
  AbHom f_;
  HermiteForm hf_;
};

}  // namespace tjl
