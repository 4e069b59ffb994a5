#include "tjl/scatter.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace tjl::scatter {

// ---------------------------------------------------------------- polynomials

Poly::Poly(long c) {
  if (c != 0) t_[Monomial{}] = c;
}

Poly::Poly(const Rational& c) {
  if (c != 0) t_[Monomial{}] = c;
}

Poly Poly::var(Var v, int e) {
  Poly p;
  Monomial m{};
  m[v] = e;
  p.t_[m] = 1;
  return p;
}

bool Poly::is_constant() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first == Monomial{}); }

Rational Poly::constant() const {
  auto it = t_.find(Monomial{});
  return it == t_.end() ? Rational(0) : it->second;
}

std::pair<Monomial, Rational> Poly::leading() const {
  if (t_.empty()) throw std::domain_error("leading term of zero");
  return *t_.rbegin();
}

void Poly::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, fresh] = t_.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) t_.erase(it);
  }
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  for (auto& [m, c] : o.t_) r.add_term(m, c);
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  for (auto& [m, c] : o.t_) r.add_term(m, -c);
  return r;
}

Poly Poly::operator-() const { return Poly(0) - *this; }

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  for (auto& [m1, c1] : t_)
    for (auto& [m2, c2] : o.t_) {
      Monomial m;
      for (int i = 0; i < kVars; ++i) m[i] = m1[i] + m2[i];
      r.add_term(m, c1 * c2);
    }
  return r;
}

Poly Poly::pow(unsigned e) const {
  Poly r(1), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

std::optional<Poly> Poly::exact_div(const Poly& o) const {
  if (o.is_zero()) throw std::domain_error("division by the zero polynomial");
  auto [lm, lc] = o.leading();
  Poly f = *this, q;
  while (!f.is_zero()) {
    auto [m, c] = f.leading();
    Monomial d;
    for (int i = 0; i < kVars; ++i) {
      d[i] = m[i] - lm[i];
      if (d[i] < 0) return std::nullopt;
    }
    Poly t;
    t.t_[d] = c / lc;
    q = q + t;
    f = f - t * o;
  }
  return q;
}

Rational Poly::eval(const std::array<Rational, kVars>& at) const {
  Rational s = 0;
  for (auto& [m, c] : t_) {
    Rational v = c;
    for (int i = 0; i < kVars; ++i)
      for (int k = 0; k < m[i]; ++k) v *= at[i];
    s += v;
  }
  return s;
}

std::string Poly::to_string() const {
  if (t_.empty()) return "0";
  static const char* names[kVars] = {"u", "z", "q", "p", "x"};
  std::string s;
  for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
    const auto& [m, c] = *it;
    std::string coef = c.get_str();
    if (!s.empty()) s += c < 0 ? " - " : " + ";
    else if (c < 0) s += "-";
    Rational a = abs(c);
    bool unit = m == Monomial{};
    std::string mono;
    for (int i = 0; i < kVars; ++i) {
      if (m[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names[i];
      if (m[i] != 1) mono += "^" + std::to_string(m[i]);
    }
    if (a != 1 || unit) s += a.get_str() + (unit ? "" : "*");
    s += mono;
  }
  return s;
}

// ---------------------------------------------------------------- rational functions

RatFunc::RatFunc(Poly n, Poly d) : num_(std::move(n)), den_(std::move(d)) {
  if (den_.is_zero()) throw std::domain_error("zero denominator");
  normalize();
}

void RatFunc::normalize() {
  if (num_.is_zero()) {
    den_ = Poly(1);
    return;
  }
  if (auto q = num_.exact_div(den_)) {
    num_ = *q;
    den_ = Poly(1);
    return;
  }
  if (auto q = den_.exact_div(num_)) {
    den_ = *q;
    num_ = Poly(1);
  }
  // cancel the common monomial factor
  Monomial g;
  g.fill(1 << 30);
  for (const Poly* p : {&num_, &den_})
    for (auto& [m, c] : p->terms())
      for (int i = 0; i < kVars; ++i) g[i] = std::min(g[i], m[i]);
  Poly gm(1);
  bool any = false;
  for (int i = 0; i < kVars; ++i)
    if (g[i] > 0) {
      gm = gm * Poly::var(static_cast<Var>(i), g[i]);
      any = true;
    }
  if (any) {
    num_ = *num_.exact_div(gm);
    den_ = *den_.exact_div(gm);
  }
  Rational lc = den_.leading().second;
  if (lc != 1) {
    Poly s(Rational(1) / lc);
    num_ = num_ * s;
    den_ = den_ * s;
  }
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
  if (den_ == o.den_) return RatFunc(num_ + o.num_, den_);
  return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}
RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }
RatFunc RatFunc::operator-() const { return RatFunc(-num_, den_); }
RatFunc RatFunc::operator*(const RatFunc& o) const { return RatFunc(num_ * o.num_, den_ * o.den_); }
RatFunc RatFunc::operator/(const RatFunc& o) const { return *this * o.inverse(); }

RatFunc RatFunc::inverse() const {
  if (num_.is_zero()) throw std::domain_error("inverse of zero");
  return RatFunc(den_, num_);
}

RatFunc RatFunc::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  return RatFunc(num_.pow(e), den_.pow(e));
}

bool RatFunc::operator==(const RatFunc& o) const { return (num_ * o.den_ - o.num_ * den_).is_zero(); }

RatFunc RatFunc::subst(Var v, const RatFunc& value) const {
  auto sub = [&](const Poly& p) {
    RatFunc r(0);
    for (auto& [m, c] : p.terms()) {
      Monomial rest = m;
      rest[v] = 0;
      Poly t(c);
      for (int i = 0; i < kVars; ++i)
        if (rest[i]) t = t * Poly::var(static_cast<Var>(i), rest[i]);
      r = r + RatFunc(t) * value.pow(m[v]);
    }
    return r;
  };
  return sub(num_) / sub(den_);
}

Rational RatFunc::eval(const std::array<Rational, kVars>& at) const {
  Rational d = den_.eval(at);
  if (d == 0) throw std::domain_error("pole at the evaluation point");
  return num_.eval(at) / d;
}

std::string RatFunc::to_string() const {
  if (den_ == Poly(1)) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

// ---------------------------------------------------------------- matrices

ScatMatrix identity(size_t n) {
  ScatMatrix m(n, std::vector<RatFunc>(n, RatFunc(0)));
  for (size_t i = 0; i < n; ++i) m[i][i] = RatFunc(1);
  return m;
}

ScatMatrix mat_mul(const ScatMatrix& a, const ScatMatrix& b) {
  size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  ScatMatrix r(n, std::vector<RatFunc>(m, RatFunc(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j)
      for (size_t t = 0; t < k; ++t) r[i][j] = r[i][j] + a[i][t] * b[t][j];
  return r;
}

ScatMatrix mat_sub(const ScatMatrix& a, const ScatMatrix& b) {
  ScatMatrix r = a;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) r[i][j] = a[i][j] - b[i][j];
  return r;
}

ScatMatrix mat_scale(const ScatMatrix& a, const RatFunc& c) {
  ScatMatrix r = a;
  for (auto& row : r)
    for (auto& x : row) x = x * c;
  return r;
}

ScatMatrix mat_subst(const ScatMatrix& a, Var v, const RatFunc& value) {
  ScatMatrix r = a;
  for (auto& row : r)
    for (auto& x : row) x = x.subst(v, value);
  return r;
}

ScatMatrix kron(const ScatMatrix& a, const ScatMatrix& b) {
  size_t ar = a.size(), ac = a[0].size(), br = b.size(), bc = b[0].size();
  ScatMatrix r(ar * br, std::vector<RatFunc>(ac * bc, RatFunc(0)));
  for (size_t i = 0; i < ar; ++i)
    for (size_t j = 0; j < ac; ++j)
      for (size_t k = 0; k < br; ++k)
        for (size_t l = 0; l < bc; ++l) r[i * br + k][j * bc + l] = a[i][j] * b[k][l];
  return r;
}

RatFunc trace(const ScatMatrix& a) {
  RatFunc t(0);
  for (size_t i = 0; i < a.size(); ++i) t = t + a[i][i];
  return t;
}

RatFunc det(const ScatMatrix& a) {
  size_t n = a.size();
  if (n == 0) return RatFunc(1);
  // clear denominators row by row, then fraction-free elimination over polynomials
  std::vector<std::vector<Poly>> m(n, std::vector<Poly>(n));
  Poly scale(1);
  for (size_t i = 0; i < n; ++i) {
    Poly rowden(1);
    for (auto& x : a[i])
      if (!rowden.exact_div(x.den())) rowden = rowden * x.den();
    for (size_t j = 0; j < n; ++j) m[i][j] = a[i][j].num() * *rowden.exact_div(a[i][j].den());
    scale = scale * rowden;
  }
  Poly prev(1);
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      size_t s = k + 1;
      while (s < n && m[s][k].is_zero()) ++s;
      if (s == n) return RatFunc(0);
      std::swap(m[k], m[s]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) {
        auto q = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_div(prev);
        if (!q) throw std::logic_error("fraction-free elimination: inexact division");
        m[i][j] = *q;
      }
    prev = m[k][k];
  }
  return RatFunc(m[n - 1][n - 1] * Poly(sign), scale);
}

bool mat_equal(const ScatMatrix& a, const ScatMatrix& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j)
      if (a[i][j] != b[i][j]) return false;
  return true;
}

// ---------------------------------------------------------------- the scattering matrices

namespace {
RatFunc u() { return RatFunc::var(U); }
RatFunc z() { return RatFunc::var(Z); }
RatFunc q() { return RatFunc::var(Q); }
RatFunc p() { return RatFunc::var(P); }
}  // namespace

ScatMats build_scatmats() {
  ScatMats S;
  S.M = {{RatFunc(1), RatFunc(0)}, {RatFunc(0), u()}};
  RatFunc w = z() * z() / u();  // z^2 q^{-s}
  RatFunc c = (q() - w).inverse();
  S.N = {{c * w * (q() - RatFunc(1)), c * (RatFunc(1) - w)},
         {c * q() * (RatFunc(1) - w), c * (q() - RatFunc(1))}};
  return S;
}

ScatMatrix local_intertwiner(bool second_form) {
  RatFunc z2 = z() * z(), one(1);
  ScatMatrix core = {{z2 * (p() - one), one - z2}, {p() * (one - z2), p() - one}};
  if (!second_form) return mat_scale(core, (p() * (one - z2)).inverse());
  RatFunc f = (one - z2 / p()) / (one - z2) / (p() - z2);
  return mat_scale(core, f);
}

namespace {
IdentityResult check(const std::string& name, const RatFunc& lhs, const RatFunc& rhs) {
  IdentityResult r{name, lhs == rhs, ""};
  if (!r.holds) r.residual = (lhs - rhs).num().to_string();
  return r;
}

IdentityResult check_mat(const std::string& name, const ScatMatrix& lhs, const ScatMatrix& rhs) {
  IdentityResult r{name, true, ""};
  for (size_t i = 0; i < lhs.size(); ++i)
    for (size_t j = 0; j < lhs[i].size(); ++j)
      if (lhs[i][j] != rhs[i][j]) {
        r.holds = false;
        r.residual += "[" + std::to_string(i) + "," + std::to_string(j) + "] " +
                      (lhs[i][j] - rhs[i][j]).num().to_string() + "; ";
      }
  return r;
}
}  // namespace

std::vector<IdentityResult> verify_identities() {
  std::vector<IdentityResult> out;
  ScatMats S = build_scatmats();
  RatFunc one(1);

  out.push_back(check_mat("M(u=1) = Id", mat_subst(S.M, U, one), identity(2)));
  out.push_back(check("det M = u", det(S.M), u()));

  ScatMatrix Ninv = mat_subst(mat_subst(S.N, Z, z().inverse()), U, u().inverse());
  out.push_back(check_mat("N(z,s) N(1/z,-s) = Id", mat_mul(S.N, Ninv), identity(2)));

  for (long sgn : {1L, -1L}) {
    ScatMatrix P = mat_subst(mat_subst(S.N, Z, RatFunc(sgn)), U, q());
    std::string tag = sgn > 0 ? "N(1,1)" : "N(-1,1)";
    out.push_back(check_mat(tag + " is idempotent", mat_mul(P, P), P));
    out.push_back(check(tag + " has trace 1", trace(P), one));
  }

  RatFunc z2 = z() * z();
  RatFunc detN = z2 / u() * (q() - u() / z2) / (q() - z2 / u());
  out.push_back(check("det N(z,u)", det(S.N), detN));

  ScatMatrix Ml = local_intertwiner(false);
  out.push_back(check_mat("local intertwiner: both displayed forms agree", Ml, local_intertwiner(true)));
  RatFunc scal = (one - z2 / p()) / (one - z2);
  RatFunc detMl = z2 * scal * scal * (p() - z2.inverse()) / (p() - z2);
  out.push_back(check("det M(z) local", det(Ml), detMl));
  // eigenvalues {1, r} of the normalized intertwiner: trace 1 + r and determinant r
  ScatMatrix Mn = mat_scale(Ml, scal.inverse());
  RatFunc r = (p() * z2 - one) / (p() - z2);
  out.push_back(check("normalized intertwiner trace = 1 + (pz^2-1)/(p-z^2)", trace(Mn), one + r));
  out.push_back(check("normalized intertwiner det = (pz^2-1)/(p-z^2)", det(Mn), r));
  // the characteristic polynomial vanishes at 1 and at r
  ScatMatrix shifted1 = mat_sub(Mn, identity(2));
  ScatMatrix shiftedr = mat_sub(Mn, mat_scale(identity(2), r));
  out.push_back(check("det(M - 1) = 0", det(shifted1), RatFunc(0)));
  out.push_back(check("det(M - r) = 0", det(shiftedr), RatFunc(0)));
  return out;
}

KroneckerReport kronecker_det_checks(int trials, uint64_t seed) {
  KroneckerReport rep;
  std::mt19937_64 rng(seed);
  ScatMats S = build_scatmats();
  RatFunc detM = det(S.M), detN = det(S.N);
  RatFunc z2 = z() * z();
  RatFunc blockN = z2 / u() * (q() - u() / z2) / (q() - z2 / u());
  auto run = [&](const ScatMatrix& A, const std::string& label) {
    ++rep.trials;
    size_t a = A.size();
    RatFunc dA = det(A), dAM = det(kron(A, S.M)), dAN = det(kron(A, S.N));
    int e = static_cast<int>(a);
    bool ok = dAM == dA * dA * detM.pow(e) && dAN == dA * dA * detN.pow(e);
    if (ok && !dA.is_zero()) ok = dAM / (dA * dA) == u().pow(e) && dAN / (dA * dA) == blockN.pow(e);
    if (ok)
      ++rep.passed;
    else
      rep.failures.push_back(label);
  };
  run({{RatFunc::var(X)}}, "A = (x)");
  std::uniform_int_distribution<int> size(1, 4), entry(-5, 5);
  for (int t = 1; t < trials; ++t) {
    size_t a = static_cast<size_t>(size(rng));
    ScatMatrix A(a, std::vector<RatFunc>(a, RatFunc(0)));
    std::string label = "trial " + std::to_string(t) + ":";
    for (auto& row : A)
      for (auto& x : row) {
        long v = entry(rng);
        x = RatFunc(v);
        label += " " + std::to_string(v);
      }
    run(A, label);
  }
  return rep;
}

// ---------------------------------------------------------------- root count toy model

double RootCountModel::nu(double t) const {
  for (size_t i = 1; i < knots.size(); ++i)
    if (t <= knots[i].first) {
      auto [t0, v0] = knots[i - 1];
      auto [t1, v1] = knots[i];
      return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
    }
  throw std::domain_error("t beyond the last knot");
}

double RootCountModel::phase(double t) const { return 4 * t * std::log(Y) - nu(t); }

bool RootCountModel::monotone() const {
  if (Y <= 1 || T <= 0 || knots.size() < 2 || knots.front() != std::make_pair(0.0, 0.0) || knots.back().first < T)
    return false;
  for (size_t i = 1; i < knots.size(); ++i) {
    double slope = (knots[i].second - knots[i - 1].second) / (knots[i].first - knots[i - 1].first);
    if (!(knots[i].first > knots[i - 1].first) || 4 * std::log(Y) - slope <= 0) return false;
  }
  return true;
}

RootCount root_count(const RootCountModel& m) {
  if (!m.monotone()) throw std::invalid_argument("root-count model violates the slope hypothesis");
  const double two_pi = 2 * M_PI, eps = 1e-9;
  RootCount rc;
  double top = m.phase(m.T) / two_pi;
  rc.formula = static_cast<long>(std::floor(top + eps));
  // subdivide (0, T], locate each crossing of a multiple of 2 pi by bisection
  const int steps = 20000;
  double prev_t = 0, prev_v = 0;
  for (int i = 1; i <= steps; ++i) {
    double t = m.T * i / steps;
    double v = m.phase(t) / two_pi;
    long lo = static_cast<long>(std::floor(prev_v + eps)), hi = static_cast<long>(std::floor(v + eps));
    for (long k = lo + 1; k <= hi; ++k) {
      double a = prev_t, b = t;
      for (int it = 0; it < 80; ++it) {
        double mid = (a + b) / 2;
        (m.phase(mid) / two_pi < k ? a : b) = mid;
      }
      rc.roots.push_back(b);
    }
    prev_t = t;
    prev_v = v;
  }
  rc.enumerated = static_cast<long>(rc.roots.size());
  return rc;
}

RootCountModel random_root_model(uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> Yd(1.5, 40.0), Td(0.5, 25.0), unit(-1.0, 1.0);
  for (;;) {
    RootCountModel m;
    m.Y = Yd(rng);
    m.T = Td(rng);
    double bound = std::log(m.Y);
    int pieces = 1 + static_cast<int>(rng() % 6);
    m.knots = {{0.0, 0.0}};
    double t = 0, v = 0;
    for (int i = 0; i < pieces; ++i) {
      double len = (i + 1 == pieces) ? m.T - t + 1.0 : m.T * (0.05 + 0.9 * std::abs(unit(rng))) / pieces;
      double slope = bound * unit(rng);
      t += len;
      v += slope * len;
      m.knots.emplace_back(t, v);
    }
    double top = m.phase(m.T) / (2 * M_PI);
    if (std::abs(top - std::round(top)) > 1e-6) return m;
  }
}

}  // namespace tjl::scatter
