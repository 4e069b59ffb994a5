#pragma once
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "tjl/abelian.hpp"
#include "tjl/bianchi.hpp"

namespace tjl {

enum class Exec { serial, parallel };

// levels are computed once and shared
class HomologyCache {
 public:
  explicit HomologyCache(std::shared_ptr<const GroupPresentation> P) : P_(std::move(P)) {}
  std::shared_ptr<const HomologyData> get(const QuadIdeal& n);
  std::shared_ptr<const HomologyData> get(const std::string& level);
  const GroupPresentation& presentation() const { return *P_; }
  const FieldSpec& field() const { return P_->field; }

 private:
  std::shared_ptr<const GroupPresentation> P_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<std::once_flag>> flags_;
  std::map<std::string, std::shared_ptr<const HomologyData>> data_;
};

// Gamma_0 element of the source level -> ambient Schreier vector at the target level
using ElementMap = std::function<AmbientVec(const Mat2&)>;

// images of the given Schreier columns of S under f
std::vector<AmbientVec> column_images(const HomologyData& S, const std::vector<int>& cols, const ElementMap& f,
                                      Exec ex = Exec::parallel);
// the homomorphism H_1(S) -> H_1(T) induced by f
AbHom map_from_elements(const HomologyData& S, const HomologyData& T, const ElementMap& f, Exec ex = Exec::parallel);

// right coset representatives of a double coset and the induced permutation
class HeckeContext {
 public:
  // upper_only: the N(q) matrices [[1,b],[0,pi]]; otherwise also [[pi,0],[0,1]]
  HeckeContext(const HomologyData& H, const QuadInt& pi, bool upper_only);
  const std::vector<Mat2>& reps() const { return reps_; }
  // index j with delta_i * g in Gamma_0 * delta_j
  int target(int i, const Mat2& g) const;
  // delta_i g delta_j^{-1}
  Mat2 conjugate(int i, const Mat2& g, int j) const;
  AmbientVec image(const Mat2& g) const;

 private:
  const HomologyData& H_;
  QuadInt pi_;
  ResidueRing k_;
  std::vector<Mat2> reps_;
  std::vector<int> index_;  // residue code -> rep index, infinity at the end
};

AbHom hecke_T(const HomologyData& H, const QuadInt& q, Exec ex = Exec::parallel);
AbHom hecke_U(const HomologyData& H, const QuadInt& q, Exec ex = Exec::parallel);
AbHom atkin_lehner(const HomologyData& H, const QuadInt& q, Exec ex = Exec::parallel);

// Hn at level n, Hm at level n/q
struct Degeneracy {
  FgAbGroup pair;  // H_1(n/q)^2
  AbHom push1, push2;  // H_1(n) -> H_1(n/q)
  AbHom transfer1, transfer2;  // H_1(n/q) -> H_1(n)
  AbHom push() const;  // H_1(n) -> pair
  AbHom transfer() const;  // pair -> H_1(n)
};
AbHom degeneracy_push1(const HomologyData& Hn, const HomologyData& Hm, Exec ex = Exec::parallel);
AbHom degeneracy_push2(const HomologyData& Hn, const HomologyData& Hm, const QuadInt& q, Exec ex = Exec::parallel);
AbHom degeneracy_transfer1(const HomologyData& Hm, const HomologyData& Hn, const QuadInt& q, Exec ex = Exec::parallel);
AbHom degeneracy_transfer2(const HomologyData& Hm, const HomologyData& Hn, const QuadInt& q, Exec ex = Exec::parallel);
Degeneracy degeneracy(const HomologyData& Hn, const HomologyData& Hm, const QuadInt& q, Exec ex = Exec::parallel);

// [[N(q)+1, T_q],[T_q, N(q)+1]] on H_1(n/q)^2
AbHom composite_expected(const Degeneracy& D, const AbHom& Tq, const Int& Nq);

bool commute(const AbHom& f, const AbHom& g);

}  // namespace tjl
