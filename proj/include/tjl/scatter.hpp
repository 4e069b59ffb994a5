#pragma once
#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tjl::scatter {

using Rational = mpq_class;

// formal variables: u = q^s, z = chi(q), q, p, x (a free symbol for symbolic trials)
enum Var { U = 0, Z = 1, Q = 2, P = 3, X = 4 };
constexpr int kVars = 5;
using Monomial = std::array<int, kVars>;

class Poly {
 public:
  Poly() = default;
  Poly(long c);
  Poly(const Rational& c);
  static Poly var(Var v, int e = 1);

  bool is_zero() const { return t_.empty(); }
  bool is_constant() const;
  Rational constant() const;  // coefficient of the unit monomial
  const std::map<Monomial, Rational>& terms() const { return t_; }
  std::pair<Monomial, Rational> leading() const;  // lex order, largest monomial

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  bool operator==(const Poly& o) const { return t_ == o.t_; }
  Poly pow(unsigned e) const;
  // exact quotient, if o divides this
  std::optional<Poly> exact_div(const Poly& o) const;
  Rational eval(const std::array<Rational, kVars>& at) const;
  std::string to_string() const;

 private:
  std::map<Monomial, Rational> t_;  // no zero coefficients
  void add_term(const Monomial& m, const Rational& c);
};

class RatFunc {
 public:
  RatFunc() : num_(0), den_(1) {}
  RatFunc(long c) : num_(c), den_(1) {}
  RatFunc(const Rational& c) : num_(c), den_(1) {}
  RatFunc(Poly n) : num_(std::move(n)), den_(1) {}
  RatFunc(Poly n, Poly d);
  static RatFunc var(Var v) { return RatFunc(Poly::var(v)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator-() const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator/(const RatFunc& o) const;
  RatFunc inverse() const;
  RatFunc pow(int e) const;
  bool operator==(const RatFunc& o) const;  // cross multiplication
  bool operator!=(const RatFunc& o) const { return !(*this == o); }
  // replace a variable by a rational function
  RatFunc subst(Var v, const RatFunc& value) const;
  Rational eval(const std::array<Rational, kVars>& at) const;  // throws on a zero denominator
  std::string to_string() const;

 private:
  Poly num_, den_;
  void normalize();
};

using ScatMatrix = std::vector<std::vector<RatFunc>>;
ScatMatrix identity(size_t n);
ScatMatrix mat_mul(const ScatMatrix& a, const ScatMatrix& b);
ScatMatrix mat_sub(const ScatMatrix& a, const ScatMatrix& b);
ScatMatrix mat_scale(const ScatMatrix& a, const RatFunc& c);
ScatMatrix mat_subst(const ScatMatrix& a, Var v, const RatFunc& value);
ScatMatrix kron(const ScatMatrix& a, const ScatMatrix& b);
RatFunc trace(const ScatMatrix& a);
RatFunc det(const ScatMatrix& a);
bool mat_equal(const ScatMatrix& a, const ScatMatrix& b);

struct ScatMats {
  ScatMatrix M;  // diag(1, u)
  ScatMatrix N;  // N(z, u)
};
ScatMats build_scatmats();
// the local intertwiner M(z) in the basis {f1, f2}, residue field of size p
ScatMatrix local_intertwiner(bool second_form = false);

struct IdentityResult {
  std::string name;
  bool holds = false;
  std::string residual;  // numerator of lhs - rhs when it fails
};
std::vector<IdentityResult> verify_identities();

struct KroneckerReport {
  int trials = 0, passed = 0;
  std::vector<std::string> failures;
};
KroneckerReport kronecker_det_checks(int trials, uint64_t seed = 1);

// f(it) = 1 - Y^{-4it} e^{i nu(t)} with nu piecewise linear through the knots, nu(0) = 0
struct RootCountModel {
  double Y = 2.0, T = 1.0;
  std::vector<std::pair<double, double>> knots;  // (t, nu(t)), increasing t, first (0, 0), last t >= T
  double nu(double t) const;
  double phase(double t) const;  // 4 t log Y - nu(t)
  bool monotone() const;  // 4 log Y - nu' > 0 on every piece
};
struct RootCount {
  long enumerated = 0, formula = 0;
  std::vector<double> roots;
};
RootCount root_count(const RootCountModel& m);
RootCountModel random_root_model(uint64_t seed);

}  // namespace tjl::scatter
