#pragma once
#include <array>
#include <string>
#include <utility>
#include <vector>

#include "tjl/integer.hpp"

namespace tjl {

// element a + b*theta
struct QuadInt {
  Int a, b;
  QuadInt() = default;
  QuadInt(long x) : a(x), b(0) {}
  QuadInt(Int x, Int y) : a(std::move(x)), b(std::move(y)) {}
  QuadInt(long x, long y) : a(x), b(y) {}
  bool is_zero() const { return a == 0 && b == 0; }
  bool operator==(const QuadInt& o) const { return a == o.a && b == o.b; }
  bool operator!=(const QuadInt& o) const { return !(*this == o); }
  bool operator<(const QuadInt& o) const { return a != o.a ? a < o.a : b < o.b; }
  QuadInt operator-() const { return {Int(-a), Int(-b)}; }
  QuadInt operator+(const QuadInt& o) const { return {Int(a + o.a), Int(b + o.b)}; }
  QuadInt operator-(const QuadInt& o) const { return {Int(a - o.a), Int(b - o.b)}; }
  QuadInt& operator+=(const QuadInt& o) { a += o.a; b += o.b; return *this; }
  QuadInt& operator-=(const QuadInt& o) { a -= o.a; b -= o.b; return *this; }
};

std::string to_string(const QuadInt& x);
// accepts "3+1t", "3-5t", "t", "-2t", "7"
QuadInt parse_quad(const std::string& s);

struct FieldSpec {
  long d = -2;
  long c0 = -2, c1 = 0;  // theta^2 = c0 + c1 theta
  int class_number = 1;
  bool euclidean = true;
  int w = 2;  // number of roots of unity

  static FieldSpec make(long d);
  std::string theta_convention() const;

  QuadInt mul(const QuadInt& x, const QuadInt& y) const;
  QuadInt scale(const QuadInt& x, const Int& k) const { return {Int(x.a * k), Int(x.b * k)}; }
  QuadInt conj(const QuadInt& x) const;
  Int norm(const QuadInt& x) const;
  Int trace(const QuadInt& x) const;
  std::vector<QuadInt> units() const;
  bool is_unit(const QuadInt& x) const { return norm(x) == 1; }
  QuadInt unit_inverse(const QuadInt& u) const { return conj(u); }
  bool divides(const QuadInt& y, const QuadInt& x) const;  // y | x
  QuadInt exact_div(const QuadInt& x, const QuadInt& y) const;  // throws unless y | x
  std::pair<QuadInt, QuadInt> divmod(const QuadInt& x, const QuadInt& y) const;
  // s x + t y = g
  QuadInt xgcd(const QuadInt& x, const QuadInt& y, QuadInt& s, QuadInt& t) const;
  QuadInt gcd(const QuadInt& x, const QuadInt& y) const;
  QuadInt pow(QuadInt x, unsigned e) const;
};

// free-function forms
std::pair<QuadInt, QuadInt> euclid_divmod(const FieldSpec& F, const QuadInt& a, const QuadInt& b);
QuadInt canonical_generator(const FieldSpec& F, const QuadInt& x);

struct QuadIdeal {
  QuadInt gen;
  Int norm;
  bool operator==(const QuadIdeal& o) const { return gen == o.gen; }
  bool operator<(const QuadIdeal& o) const { return norm != o.norm ? norm < o.norm : gen < o.gen; }
};
QuadIdeal make_ideal(const FieldSpec& F, const QuadInt& g);
QuadIdeal ideal_mul(const FieldSpec& F, const QuadIdeal& x, const QuadIdeal& y);
bool ideal_divides(const FieldSpec& F, const QuadIdeal& q, const QuadIdeal& n);
QuadIdeal ideal_div(const FieldSpec& F, const QuadIdeal& n, const QuadIdeal& q);
// "3*3+1t" style products of generators
QuadIdeal parse_level(const FieldSpec& F, const std::string& s);

enum class Splitting { split, inert, ramified };
std::string to_string(Splitting s);

struct PrimeFactor {
  QuadIdeal ideal;
  long residue_char = 0;
  long residue_size = 0;
  Splitting splitting = Splitting::split;
};

std::vector<PrimeFactor> prime_factor(const FieldSpec& F, long p);
// prime ideal factorization of an ideal, sorted by (norm, generator)
std::vector<std::pair<PrimeFactor, int>> factor_ideal(const FieldSpec& F, const QuadIdeal& n);
// all prime ideals of norm <= bound
std::vector<PrimeFactor> primes_up_to(const FieldSpec& F, long bound);
// all nonzero ideals with norm <= bound
std::vector<QuadIdeal> ideals_up_to(const FieldSpec& F, long bound);

// O / (g) with dense codes; reduction by the Hermite basis {(e,0),(f,h)} of the lattice g*O
class ResidueRing {
 public:
  ResidueRing() = default;
  ResidueRing(const FieldSpec& F, const QuadInt& g);
  long size() const { return e_ * h_; }
  long reduce(long a, long b) const;
  long reduce(const QuadInt& x) const;
  std::pair<long, long> coords(long code) const { return {code % e_, code / e_}; }
  QuadInt lift(long code) const { auto [a, b] = coords(code); return {a, b}; }
  long add(long x, long y) const;
  long sub(long x, long y) const;
  long neg(long x) const { return sub(0, x); }
  long mul(long x, long y) const;
  long one() const { return reduce(1, 0); }
  bool is_unit(long x) const;
  long inv(long x) const;  // throws if not a unit
  const FieldSpec& field() const { return F_; }
  const QuadInt& modulus() const { return g_; }

 private:
  FieldSpec F_;
  QuadInt g_;
  long e_ = 1, f_ = 0, h_ = 1;
};

// P^1(O/n) via CRT over prime power components
class ProjLine {
 public:
  ProjLine(const FieldSpec& F, const QuadIdeal& n);
  long size() const { return size_; }
  // index of the normalized class of (x:y); throws if (x,y) is not a unimodular pair
  long index(const QuadInt& x, const QuadInt& y) const;
  // reduced 2x2 matrix data per component, for fast action
  struct MatCodes {
    std::vector<std::array<long, 4>> comp;
  };
  MatCodes reduce_matrix(const QuadInt& a, const QuadInt& b, const QuadInt& c, const QuadInt& d) const;
  // (x:y) -> (x:y) * [[a,b],[c,d]]
  long act(long i, const MatCodes& m) const;
  long base() const { return 0; }  // class of (0:1)
  size_t num_components() const { return comps_.size(); }

  struct Local {
    ResidueRing R;
    long size = 0;  // N(q^e) + N(q^{e-1})
    std::vector<char> unit;
    std::vector<long> inv;
    std::vector<long> nonunit_index;  // code -> index among non-units, or -1
    std::vector<long> nonunit_code;
    long normalize(long x, long y) const;  // -1 if not unimodular
    std::pair<long, long> point(long li) const;
  };
  const Local& component(size_t k) const { return comps_[k]; }
  std::vector<long> split(long i) const;

 private:
  std::vector<Local> comps_;
  std::vector<long> stride_;
  long size_ = 1;
};

long proj_line_size(const FieldSpec& F, const QuadIdeal& n);

}  // namespace tjl
