#pragma once
#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tjl/abelian.hpp"
#include "tjl/fp.hpp"
#include "tjl/hecke.hpp"

namespace tjl {

using Rational = mpq_class;

// ---------------------------------------------------------------- congruence homology

struct CongruenceData {
  QuadIdeal level;
  std::vector<PrimeFactor> primes;  // distinct primes dividing the level
  FgAbGroup target;  // product of the cyclic groups k_q^x
  AbHom projection;  // H_1 -> target
  Int image_order = 1;  // |H_1,cong|
  bool relations_killed = true;
};
CongruenceData congruence_quotient(const HomologyData& H);

// value of the character [[a,b],[c,d]] -> a/d mod q as a discrete logarithm
long congruence_log(const FieldSpec& F, const PrimeFactor& q, const Mat2& g);

// |im H_1| / |im H_1,tors| in the congruence quotient
Int h_lif(const HomologyData& H, const CongruenceData& C);
// the same through direct character values on torsion generators
Int h_lif_direct(const HomologyData& H, const CongruenceData& C);

struct EssentialData {
  FgAbGroup group;  // ker(H_1 -> H_1,cong)
  AbHom inclusion;
  Int h_lif = 1;
  Int torsion_order = 1;  // |H_1^E tors|
  Int dual_torsion_order = 1;  // |H_1,tors| * h_lif / |H_1,cong|
};
EssentialData essential_homology(const HomologyData& H, const CongruenceData& C);

// ---------------------------------------------------------------- newforms and alternating invariants

// cokernel of the sum of transfers from H_1(sigma/q)^2 over q in sigma \ s, localized away from invert
FgAbGroup newform_space(HomologyCache& cache, const QuadIdeal& sigma, const QuadIdeal& s, const std::vector<Int>& invert,
                        Exec ex = Exec::parallel);

struct TorsionInvariants {
  Rational h_tors = 1, h_cong = 1, h_E = 1, h_lif = 1;
  std::vector<std::pair<QuadIdeal, int>> terms;  // level, exponent (-2)^{|sigma \ R|}
};
// alternating products over S <= R <= sigma; throws when some H_1 is infinite unless torsion_only
TorsionInvariants torsion_invariants(HomologyCache& cache, const QuadIdeal& sigma, const QuadIdeal& s,
                                     bool torsion_only = false);

// A_p = |H(B,p)| |H(pi p)|^2 |H(pibar p)|^2 / (|H(3p)| |H(p)|^4); reference quaternionic order supplied
Rational jl_ratio(HomologyCache& cache, const QuadInt& p, const Int& quaternionic_order, bool torsion_only = false);
// 2^k or "a/b" style rendering of a positive rational
std::string rational_string(const Rational& r);

// the Sigma-dependent part of h_cong^new / vol^new over (sigma, S) against (sigma, S')
// symbols: "V0" for the level-one volume, "A(q)" = N(q)+1, "B(q)" = N(q)-1
struct VolCongReport {
  bool equal = false;
  std::map<std::string, long> lhs, rhs;  // symbol -> exponent
  Rational lhs_value = 1, rhs_value = 1;  // with V0 set to 1
};
VolCongReport vol_cong_invariance(const FieldSpec& F, const QuadIdeal& sigma, const QuadIdeal& s, const QuadIdeal& s2);

// the part of n away from {2,3} is a perfect square
bool square_away_from_2_3(const Int& n);

// ---------------------------------------------------------------- maximal ideals

struct ProbeOperator {
  QuadInt prime;
  Int norm;
  bool is_u = false;  // U_q when q divides the level
  AbHom op;
};
std::vector<ProbeOperator> probe_operators(const HomologyData& H, const std::vector<QuadInt>& primes,
                                           Exec ex = Exec::parallel);
// primes of degree one or inert, of norm <= bound, not dividing the level
std::vector<QuadInt> default_probes(const HomologyData& H, long bound);

struct MaximalIdealData {
  long ell = 0;
  int residue_degree = 1;
  std::vector<std::pair<QuadInt, fp::Poly>> eigen;  // probe prime -> irreducible factor mod ell
  FgAbGroup localized;  // the m-part of the torsion
  AbHom inclusion;  // into the ambient group
  bool eisenstein = false;  // T_q = 1 + N(q) mod m on every T-probe
  std::vector<QuadInt> level_raising;  // probes q with T_q^2 - (1+N(q))^2 in m
  bool ambiguous = false;  // several probes with nonlinear factors; may hold several ideals
  std::string eigen_string() const;
};

// generalized eigenspace decomposition of the ell-primary torsion of G under commuting endomorphisms
std::vector<MaximalIdealData> decompose_module(const FgAbGroup& G, const std::vector<ProbeOperator>& probes, long ell);
std::vector<MaximalIdealData> hecke_decompose(const HomologyData& H, long ell, const std::vector<QuadInt>& probes,
                                              Exec ex = Exec::parallel);

// ---------------------------------------------------------------- level complexes

struct LevelComplex {
  std::vector<FgAbGroup> terms;  // C_0 = H(sigma), C_1, C_2
  std::vector<AbHom> d;  // d_0 : C_0 -> C_1, d_1 : C_1 -> C_2
  bool is_complex = true;  // d_1 d_0 = 0
  std::vector<FgAbGroup> homology;  // ker d_i / im d_{i-1}
  // the middle homology with the Hecke operators it inherits
  FgAbGroup middle;
  std::vector<ProbeOperator> middle_ops;
};
// probes must avoid sigma; |sigma \ s| <= 2
LevelComplex level_complex(HomologyCache& cache, const QuadIdeal& sigma, const QuadIdeal& s,
                           const std::vector<QuadInt>& probes, Exec ex = Exec::parallel);

}  // namespace tjl
