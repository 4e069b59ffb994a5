#pragma once
#include <memory>
#include <string>
#include <vector>

#include "tjl/abelian.hpp"
#include "tjl/quadring.hpp"

namespace tjl {

struct Mat2 {
  QuadInt a, b, c, d;
  bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
};
Mat2 mat_mul(const FieldSpec& F, const Mat2& x, const Mat2& y);
Mat2 mat_adj(const Mat2& m);  // inverse up to the determinant
QuadInt mat_det(const FieldSpec& F, const Mat2& m);
bool is_scalar(const Mat2& m);
bool same_projective(const FieldSpec& F, const Mat2& x, const Mat2& y);  // x = unit * y
Mat2 mat_pow(const FieldSpec& F, Mat2 m, long e);
std::string to_string(const Mat2& m);

// a letter is a generator raised to a nonzero power; +-1 in serialized relators
struct Letter {
  int gen;
  long exp;
  bool operator==(const Letter& o) const { return gen == o.gen && exp == o.exp; }
};
using Word = std::vector<Letter>;
Word word_inverse(const Word& w);
Word word_simplify(const Word& w);
// expand powers into +-1 letters
Word word_expand(const Word& w);

struct GroupPresentation {
  FieldSpec field;
  std::vector<std::string> names;
  std::vector<Mat2> generators;
  std::vector<Word> relators;

  Mat2 eval(const Word& w) const;
  void validate() const;  // throws std::invalid_argument
  std::string to_json() const;  // canonical serialization
  std::string abelianization() const;  // invariants of H_1 of the full group
  std::string hash() const;  // crc32 of the canonical serialization

  // elementary pieces used by word_for_matrix, filled in by load
  int elem_a = -1, elem_t = -1, elem_u = -1;
  int sign_a = 1, sign_t = 1, sign_u = 1;
  std::vector<std::pair<QuadInt, Letter>> diag;  // diag(eps, 1)
  void find_elementary();
};

GroupPresentation presentation_from_json(const std::string& text);
GroupPresentation load_presentation(const std::string& path);
// presentation shipped with the library for d = -2
GroupPresentation bundled_presentation(long d);
bool has_bundled_presentation(long d);

Word word_for_matrix(const GroupPresentation& P, const Mat2& g);

class CosetTable {
 public:
  CosetTable(const GroupPresentation& P, const QuadIdeal& n);
  long size() const { return npts_; }
  int num_gens() const { return ng_; }
  long act(long p, int gen, long exp) const;  // p * g^exp
  long act_word(long p, const Word& w) const;
  Word transversal(long p) const;  // base * transversal(p) = p
  bool is_tree_edge(long p, int s) const { return tree_[p * ng_ + s]; }
  // cycles of each generator permutation
  struct Cycles {
    std::vector<long> id, pos;
    std::vector<std::vector<long>> pts;
  };
  const Cycles& cycles(int s) const { return cyc_[s]; }
  const ProjLine& proj_line() const { return *P1_; }

 private:
  long npts_ = 0;
  int ng_ = 0;
  std::shared_ptr<ProjLine> P1_;
  std::vector<std::vector<long>> perm_, inv_;
  std::vector<long> parent_;
  std::vector<Letter> parent_letter_;
  std::vector<char> tree_;
  std::vector<Cycles> cyc_;
};

using AmbientVec = std::vector<std::pair<int, long>>;

class HomologyData {
 public:
  HomologyData(std::shared_ptr<const GroupPresentation> P, const QuadIdeal& n);
  const QuadIdeal& level() const { return n_; }
  const FieldSpec& field() const { return P_->field; }
  const GroupPresentation& presentation() const { return *P_; }
  std::shared_ptr<const GroupPresentation> presentation_ptr() const { return P_; }
  const CosetTable& cosets() const { return *T_; }
  const FgAbGroup& H1() const { return H_; }
  const SparseMatrix& relations() const { return rels_; }
  int num_schreier() const { return static_cast<int>(col_pt_.size()); }
  Mat2 schreier_matrix(int col) const;
  long schreier_point(int col) const { return col_pt_[col]; }
  int schreier_gen(int col) const { return col_gen_[col]; }
  int column(long p, int s) const { return col_[p * T_->num_gens() + s]; }

  bool in_gamma0(const Mat2& g) const;
  // ambient exponent vector of the Schreier rewriting of g; throws unless g is in Gamma_0(n)
  AmbientVec reduce_ambient(const Mat2& g) const;
  AmbientVec rewrite(long start, const Word& w, long* end = nullptr) const;
  IntVec reduce(const Mat2& g) const;
  IntVec coords(const AmbientVec& v) const;

 private:
  std::shared_ptr<const GroupPresentation> P_;
  QuadIdeal n_;
  std::shared_ptr<CosetTable> T_;
  std::vector<int> col_;
  std::vector<long> col_pt_;
  std::vector<int> col_gen_;
  std::vector<std::vector<std::vector<int>>> cyc_cols_;  // per gen, per cycle
  SparseMatrix rels_;
  FgAbGroup H_;
};

}  // namespace tjl
