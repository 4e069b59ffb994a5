#include "tjl/quadring.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <stdexcept>

namespace tjl {

std::string to_string(const QuadInt& x) {
  std::string s = x.a.get_str();
  if (x.b < 0)
    s += "-" + Int(-x.b).get_str() + "t";
  else
    s += "+" + x.b.get_str() + "t";
  return s;
}

QuadInt parse_quad(const std::string& in) {
  std::string s;
  for (char c : in)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw std::invalid_argument("empty element");
  QuadInt r(0, 0);
  size_t i = 0;
  bool any = false;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (any) {
      throw std::invalid_argument("bad element: " + in);
    }
    size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    Int coef = 1;
    bool digits = j > i;
    if (digits) coef = Int(s.substr(i, j - i));
    i = j;
    if (i < s.size() && (s[i] == 't' || s[i] == 'T')) {
      ++i;
      r.b += sign * coef;
    } else {
      if (!digits) throw std::invalid_argument("bad element: " + in);
      r.a += sign * coef;
    }
    any = true;
  }
  return r;
}

FieldSpec FieldSpec::make(long d) {
  if (d >= 0) throw std::invalid_argument("field must be imaginary quadratic");
  {
    long m = -d;
    for (long p = 2; p * p <= m; ++p)
      if (m % (p * p) == 0) throw std::invalid_argument("d must be squarefree");
  }
  FieldSpec F;
  F.d = d;
  long dm4 = ((d % 4) + 4) % 4;
  if (dm4 == 1) {
    F.c0 = (d - 1) / 4;
    F.c1 = 1;
  } else {
    F.c0 = d;
    F.c1 = 0;
  }
  static const long heegner[] = {-1, -2, -3, -7, -11, -19, -43, -67, -163};
  F.class_number = std::find(std::begin(heegner), std::end(heegner), d) != std::end(heegner) ? 1 : 0;
  F.euclidean = d == -1 || d == -2 || d == -3 || d == -7 || d == -11;
  F.w = d == -1 ? 4 : (d == -3 ? 6 : 2);
  return F;
}

std::string FieldSpec::theta_convention() const {
  return c1 == 0 ? "t = sqrt(" + std::to_string(d) + ")" : "t = (1+sqrt(" + std::to_string(d) + "))/2";
}

QuadInt FieldSpec::mul(const QuadInt& x, const QuadInt& y) const {
  Int bd = x.b * y.b;
  QuadInt r;
  r.a = x.a * y.a + bd * c0;
  r.b = x.a * y.b + x.b * y.a;
  if (c1 != 0) r.b += bd * c1;
  return r;
}

QuadInt FieldSpec::conj(const QuadInt& x) const { return {Int(x.a + c1 * x.b), Int(-x.b)}; }

Int FieldSpec::norm(const QuadInt& x) const { return x.a * x.a + c1 * x.a * x.b - c0 * x.b * x.b; }

Int FieldSpec::trace(const QuadInt& x) const { return 2 * x.a + c1 * x.b; }

std::vector<QuadInt> FieldSpec::units() const {
  std::vector<QuadInt> u;
  for (long a = -2; a <= 2; ++a)
    for (long b = -2; b <= 2; ++b)
      if (norm(QuadInt(a, b)) == 1) u.emplace_back(a, b);
  return u;
}

bool FieldSpec::divides(const QuadInt& y, const QuadInt& x) const {
  if (y.is_zero()) return x.is_zero();
  QuadInt t = mul(x, conj(y));
  Int n = norm(y);
  return t.a % n == 0 && t.b % n == 0;
}

QuadInt FieldSpec::exact_div(const QuadInt& x, const QuadInt& y) const {
  if (y.is_zero()) throw std::domain_error("division by zero");
  QuadInt t = mul(x, conj(y));
  Int n = norm(y);
  if (t.a % n != 0 || t.b % n != 0) throw std::domain_error("inexact division");
  t.a /= n;
  t.b /= n;
  return t;
}

namespace {
Int round_half_up(const Int& num, const Int& den) {  // den > 0
  return fdiv(Int(2 * num + den), Int(2 * den));
}
}  // namespace

std::pair<QuadInt, QuadInt> FieldSpec::divmod(const QuadInt& x, const QuadInt& y) const {
  if (y.is_zero()) throw std::domain_error("division by zero");
  if (!euclidean) throw std::domain_error("field is not norm-Euclidean");
  QuadInt t = mul(x, conj(y));
  Int n = norm(y);
  QuadInt q;
  if (c1 == 0) {
    q = {round_half_up(t.a, n), round_half_up(t.b, n)};
  } else {
    // theta = (1 + sqrt d)/2: try the two nearest theta-coordinates
    Int n0 = fdiv(t.b, n);
    Int best;
    for (int k = 0; k < 2; ++k) {
      Int nb = n0 + k;
      Int m = round_half_up(Int(2 * t.a + t.b - nb * n), Int(2 * n));
      QuadInt cand(m, nb);
      Int rn = norm(x - mul(cand, y));
      if (k == 0 || rn < best) {
        best = rn;
        q = cand;
      }
    }
  }
  QuadInt r = x - mul(q, y);
  return {q, r};
}

QuadInt FieldSpec::xgcd(const QuadInt& x, const QuadInt& y, QuadInt& s, QuadInt& t) const {
  QuadInt r0 = x, r1 = y, s0(1), s1(0), t0(0), t1(1);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = r1;
    r1 = r;
    QuadInt tmp = s0 - mul(q, s1);
    s0 = s1;
    s1 = tmp;
    tmp = t0 - mul(q, t1);
    t0 = t1;
    t1 = tmp;
  }
  s = s0;
  t = t0;
  return r0;
}

QuadInt FieldSpec::gcd(const QuadInt& x, const QuadInt& y) const {
  QuadInt s, t;
  QuadInt g = xgcd(x, y, s, t);
  return g.is_zero() ? g : canonical_generator(*this, g);
}

QuadInt FieldSpec::pow(QuadInt x, unsigned e) const {
  QuadInt r(1);
  while (e) {
    if (e & 1) r = mul(r, x);
    x = mul(x, x);
    e >>= 1;
  }
  return r;
}

std::pair<QuadInt, QuadInt> euclid_divmod(const FieldSpec& F, const QuadInt& a, const QuadInt& b) {
  return F.divmod(a, b);
}

QuadInt canonical_generator(const FieldSpec& F, const QuadInt& x) {
  if (x.is_zero()) throw std::domain_error("zero has no canonical generator");
  auto key = [](const QuadInt& v) {
    return std::make_tuple(sgn(v.a), sgn(v.b), v.a, v.b);
  };
  QuadInt best;
  bool first = true;
  for (const auto& u : F.units()) {
    QuadInt c = F.mul(u, x);
    if (first || key(c) > key(best)) {
      best = c;
      first = false;
    }
  }
  return best;
}

QuadIdeal make_ideal(const FieldSpec& F, const QuadInt& g) {
  QuadInt c = canonical_generator(F, g);
  return {c, F.norm(c)};
}

QuadIdeal ideal_mul(const FieldSpec& F, const QuadIdeal& x, const QuadIdeal& y) {
  return make_ideal(F, F.mul(x.gen, y.gen));
}

bool ideal_divides(const FieldSpec& F, const QuadIdeal& q, const QuadIdeal& n) {
  return F.divides(q.gen, n.gen);
}

QuadIdeal ideal_div(const FieldSpec& F, const QuadIdeal& n, const QuadIdeal& q) {
  return make_ideal(F, F.exact_div(n.gen, q.gen));
}

QuadIdeal parse_level(const FieldSpec& F, const std::string& s) {
  QuadInt g(1);
  size_t start = 0;
  while (true) {
    size_t pos = s.find('*', start);
    g = F.mul(g, parse_quad(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (g.is_zero()) throw std::invalid_argument("zero level");
  return make_ideal(F, g);
}

std::string to_string(Splitting s) {
  switch (s) {
    case Splitting::split: return "split";
    case Splitting::inert: return "inert";
    default: return "ramified";
  }
}

std::vector<PrimeFactor> prime_factor(const FieldSpec& F, long p) {
  if (!is_prime(p)) throw std::invalid_argument("not a prime: " + std::to_string(p));
  std::vector<PrimeFactor> out;
  // search for an element of norm p
  for (long b = 0;; ++b) {
    Int disc = Int(F.c1 * F.c1 + 4 * F.c0) * b * b + 4 * Int(p);
    if (disc < 0) break;
    if (mpz_perfect_square_p(disc.get_mpz_t())) {
      Int s;
      mpz_sqrt(s.get_mpz_t(), disc.get_mpz_t());
      Int num = -F.c1 * Int(b) + s;
      if (num % 2 == 0) {
        QuadInt x(Int(num / 2), Int(b));
        QuadInt c1 = canonical_generator(F, x), c2 = canonical_generator(F, F.conj(x));
        if (c1 == c2) {
          out.push_back({{c1, Int(p)}, p, p, Splitting::ramified});
        } else {
          if (c2.b > c1.b || (c2.b == c1.b && c2.a > c1.a)) std::swap(c1, c2);
          out.push_back({{c1, Int(p)}, p, p, Splitting::split});
          out.push_back({{c2, Int(p)}, p, p, Splitting::split});
        }
        return out;
      }
    }
  }
  out.push_back({{QuadInt(p), Int(p) * p}, p, p * p, Splitting::inert});
  return out;
}

std::vector<std::pair<PrimeFactor, int>> factor_ideal(const FieldSpec& F, const QuadIdeal& n) {
  std::vector<std::pair<PrimeFactor, int>> out;
  QuadInt g = n.gen;
  for (const auto& [p, e] : factor_integer(n.norm)) {
    for (const auto& P : prime_factor(F, p.get_si())) {
      int v = 0;
      while (F.divides(P.ideal.gen, g)) {
        g = F.exact_div(g, P.ideal.gen);
        ++v;
      }
      if (v > 0) out.push_back({P, v});
    }
  }
  if (F.norm(g) != 1) throw std::logic_error("ideal factorization incomplete");
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first.ideal < y.first.ideal; });
  return out;
}

std::vector<PrimeFactor> primes_up_to(const FieldSpec& F, long bound) {
  std::vector<PrimeFactor> out;
  for (long p = 2; p <= bound; ++p) {
    if (!is_prime(p)) continue;
    for (auto& P : prime_factor(F, p))
      if (P.residue_size <= bound) out.push_back(P);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const PrimeFactor& x, const PrimeFactor& y) { return x.residue_size < y.residue_size; });
  return out;
}

std::vector<QuadIdeal> ideals_up_to(const FieldSpec& F, long bound) {
  auto primes = primes_up_to(F, bound);
  std::vector<QuadIdeal> out;
  std::function<void(size_t, QuadInt, long)> rec = [&](size_t i, QuadInt g, long nrm) {
    if (i == primes.size()) {
      out.push_back(make_ideal(F, g));
      return;
    }
    rec(i + 1, g, nrm);
    long q = primes[i].residue_size;
    while (nrm * q <= bound) {
      nrm *= q;
      g = F.mul(g, primes[i].ideal.gen);
      rec(i + 1, g, nrm);
    }
  };
  rec(0, QuadInt(1), 1);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- residues

ResidueRing::ResidueRing(const FieldSpec& F, const QuadInt& g) : F_(F), g_(g) {
  if (g.is_zero()) throw std::invalid_argument("zero modulus");
  // lattice g*O spanned by g and g*theta in the basis {1, theta}
  long x1 = g.a.get_si(), y1 = g.b.get_si();
  long x2 = y1 * F.c0, y2 = x1 + y1 * F.c1;
  long s, t;
  long h = ext_gcd(y1, y2, s, t);
  if (h == 0) throw std::logic_error("degenerate modulus");
  long f = s * x1 + t * x2;
  // the other combination kills the theta coordinate
  long e = std::labs((y2 / h) * x1 - (y1 / h) * x2);
  e_ = e;
  h_ = h;
  f_ = ((f % e) + e) % e;
  if (Int(e_) * h_ != F.norm(g)) throw std::logic_error("residue basis mismatch");
}

long ResidueRing::reduce(long a, long b) const {
  long k = b >= 0 ? b / h_ : -((-b + h_ - 1) / h_);
  __int128 aa = static_cast<__int128>(a) - static_cast<__int128>(k) * f_;
  b -= k * h_;
  long r = static_cast<long>(((aa % e_) + e_) % e_);
  return r + e_ * b;
}

long ResidueRing::reduce(const QuadInt& x) const {
  Int a = fmod(x.a, Int(e_ * h_)), b = fmod(x.b, Int(e_ * h_));
  // e*h = N(g) lies in g*O, so reducing coordinates mod it first is harmless
  return reduce(a.get_si(), b.get_si());
}

long ResidueRing::add(long x, long y) const {
  auto [a1, b1] = coords(x);
  auto [a2, b2] = coords(y);
  return reduce(a1 + a2, b1 + b2);
}

long ResidueRing::sub(long x, long y) const {
  auto [a1, b1] = coords(x);
  auto [a2, b2] = coords(y);
  return reduce(a1 - a2 + e_ * h_, b1 - b2 + h_);
}

long ResidueRing::mul(long x, long y) const {
  auto [a1, b1] = coords(x);
  auto [a2, b2] = coords(y);
  __int128 bd = static_cast<__int128>(b1) * b2;
  __int128 ra = static_cast<__int128>(a1) * a2 + bd * F_.c0;
  __int128 rb = static_cast<__int128>(a1) * b2 + static_cast<__int128>(a2) * b1 + bd * F_.c1;
  __int128 m = static_cast<__int128>(e_) * h_;
  ra %= m;
  rb %= m;
  if (ra < 0) ra += m;
  if (rb < 0) rb += m;
  return reduce(static_cast<long>(ra), static_cast<long>(rb));
}

bool ResidueRing::is_unit(long x) const {
  QuadInt s, t;
  QuadInt g = F_.xgcd(lift(x), g_, s, t);
  return F_.norm(g) == 1;
}

long ResidueRing::inv(long x) const {
  QuadInt s, t;
  QuadInt g = F_.xgcd(lift(x), g_, s, t);
  if (F_.norm(g) != 1) throw std::domain_error("not a unit modulo the ideal");
  return reduce(F_.mul(s, F_.unit_inverse(g)));
}

// ---------------------------------------------------------------- P^1

long ProjLine::Local::normalize(long x, long y) const {
  if (unit[y]) return R.mul(x, inv[y]);
  if (unit[x]) return R.size() + nonunit_index[R.mul(y, inv[x])];
  return -1;
}

std::pair<long, long> ProjLine::Local::point(long li) const {
  if (li < R.size()) return {li, R.one()};
  return {R.one(), nonunit_code[li - R.size()]};
}

ProjLine::ProjLine(const FieldSpec& F, const QuadIdeal& n) {
  for (const auto& [P, e] : factor_ideal(F, n)) {
    Local L;
    L.R = ResidueRing(F, F.pow(P.ideal.gen, e));
    long N = L.R.size();
    L.unit.assign(N, 0);
    L.inv.assign(N, -1);
    L.nonunit_index.assign(N, -1);
    ResidueRing Rq(F, P.ideal.gen);
    for (long x = 0; x < N; ++x) {
      if (Rq.reduce(L.R.lift(x)) != 0) {
        L.unit[x] = 1;
      } else {
        L.nonunit_index[x] = static_cast<long>(L.nonunit_code.size());
        L.nonunit_code.push_back(x);
      }
    }
    for (long x = 0; x < N; ++x)
      if (L.unit[x] && L.inv[x] < 0) {
        long y = L.R.inv(x);
        L.inv[x] = y;
        L.inv[y] = x;
      }
    L.size = N + static_cast<long>(L.nonunit_code.size());
    comps_.push_back(std::move(L));
  }
  size_ = 1;
  for (const auto& L : comps_) {
    stride_.push_back(size_);
    size_ *= L.size;
  }
}

std::vector<long> ProjLine::split(long i) const {
  std::vector<long> out(comps_.size());
  for (size_t k = 0; k < comps_.size(); ++k) out[k] = (i / stride_[k]) % comps_[k].size;
  return out;
}

long ProjLine::index(const QuadInt& x, const QuadInt& y) const {
  long idx = 0;
  for (size_t k = 0; k < comps_.size(); ++k) {
    const auto& L = comps_[k];
    long li = L.normalize(L.R.reduce(x), L.R.reduce(y));
    if (li < 0) throw std::domain_error("not a point of P^1");
    idx += li * stride_[k];
  }
  return idx;
}

ProjLine::MatCodes ProjLine::reduce_matrix(const QuadInt& a, const QuadInt& b, const QuadInt& c,
                                           const QuadInt& d) const {
  MatCodes m;
  for (const auto& L : comps_)
    m.comp.push_back({L.R.reduce(a), L.R.reduce(b), L.R.reduce(c), L.R.reduce(d)});
  return m;
}

long ProjLine::act(long i, const MatCodes& m) const {
  long idx = 0;
  for (size_t k = 0; k < comps_.size(); ++k) {
    const auto& L = comps_[k];
    const auto& R = L.R;
    auto [x, y] = L.point((i / stride_[k]) % L.size);
    const auto& g = m.comp[k];
    long nx = R.add(R.mul(x, g[0]), R.mul(y, g[2]));
    long ny = R.add(R.mul(x, g[1]), R.mul(y, g[3]));
    long li = L.normalize(nx, ny);
    if (li < 0) throw std::domain_error("matrix not invertible modulo the level");
    idx += li * stride_[k];
  }
  return idx;
}

long proj_line_size(const FieldSpec& F, const QuadIdeal& n) {
  long s = 1;
  for (const auto& [P, e] : factor_ideal(F, n)) {
    long q = P.residue_size, t = 1;
    for (int i = 1; i < e; ++i) t *= q;
    s *= t * (q + 1);
  }
  return s;
}

}  // namespace tjl
