#include "tjl/eiscan.hpp"

#include <cmath>
#include <stdexcept>

#include "tjl/fp.hpp"
#include "tjl/integer.hpp"

namespace tjl::eiscan {

using Elem = FiniteField::Elem;

FiniteField::FiniteField(long q, int degree) : q_(q), deg_(degree) {
  if (q < 3 || !is_prime(q)) throw std::invalid_argument("field characteristic must be an odd prime");
  if (degree != 1 && degree != 2) throw std::invalid_argument("only degrees 1 and 2 are supported");
  for (long n = 2; n < q; ++n)
    if (mod_pow(n, (q - 1) / 2, q) == q - 1) {
      n_ = n;
      break;
    }
}

Elem FiniteField::from_int(long x) const { return {fp::reduce(x, q_), 0}; }

Elem FiniteField::add(const Elem& x, const Elem& y) const { return {(x.a + y.a) % q_, (x.b + y.b) % q_}; }

Elem FiniteField::sub(const Elem& x, const Elem& y) const {
  return {fp::reduce(x.a - y.a, q_), fp::reduce(x.b - y.b, q_)};
}

Elem FiniteField::mul(const Elem& x, const Elem& y) const {
  long a = (fp::mulmod(x.a, y.a, q_) + fp::mulmod(fp::mulmod(x.b, y.b, q_), n_, q_)) % q_;
  long b = (fp::mulmod(x.a, y.b, q_) + fp::mulmod(x.b, y.a, q_)) % q_;
  return {a, b};
}

Elem FiniteField::pow(Elem x, long e) const {
  Elem r{1, 0};
  while (e > 0) {
    if (e & 1) r = mul(r, x);
    e >>= 1;
    if (e) x = mul(x, x);
  }
  return r;
}

Elem FiniteField::inv(const Elem& x) const {
  if (is_zero(x)) throw std::domain_error("inverse of zero");
  return pow(x, size() - 2);
}

bool FiniteField::sqrt(const Elem& x, Elem& r) const {
  if (is_zero(x)) {
    r = x;
    return true;
  }
  if (pow(x, (size() - 1) / 2) != Elem{1, 0}) return false;
  // exhaustive search is fine at the sizes scanned here
  for (long a = 0; a < q_; ++a)
    for (long b = 0; b < (deg_ == 2 ? q_ : 1); ++b) {
      Elem c{a, b};
      if (mul(c, c) == x) {
        r = c;
        return true;
      }
    }
  return false;
}

std::string FiniteField::to_string(const Elem& x) const {
  if (deg_ == 1 || x.b == 0) return std::to_string(x.a);
  return std::to_string(x.a) + "+" + std::to_string(x.b) + "w";
}

bool fifth_power_test(const FiniteField& F, const Elem& x) {
  if ((F.size() - 1) % 5 != 0) throw std::invalid_argument("5 does not divide the order of the unit group");
  if (F.is_zero(x)) throw std::invalid_argument("zero is not a unit");
  return F.pow(x, (F.size() - 1) / 5) == Elem{1, 0};
}

std::vector<Elem> quartic_roots(const FiniteField& F) {
  long q = F.characteristic();
  fp::Poly f = fp::from_ints({1, 72, 794, -72, 1}, q);
  std::vector<Elem> roots;
  for (auto& [g, mult] : fp::factor(f, q)) {
    if (fp::deg(g) == 1) {
      roots.push_back({fp::reduce(-g[0], q), 0});
    } else if (fp::deg(g) == 2 && F.degree() == 2) {
      // x^2 + b x + c: (-b +- sqrt(b^2 - 4c)) / 2
      Elem b = F.from_int(g[1]), c = F.from_int(g[0]);
      Elem disc = F.sub(F.mul(b, b), F.mul(F.from_int(4), c)), s;
      if (!F.sqrt(disc, s)) throw std::logic_error("quadratic does not split over F_{q^2}");
      Elem half = F.inv(F.from_int(2));
      Elem mb = F.sub(F.from_int(0), b);
      roots.push_back(F.mul(F.add(mb, s), half));
      roots.push_back(F.mul(F.sub(mb, s), half));
    }
  }
  return roots;
}

std::vector<std::pair<long, long>> represent_bruteforce(long n, long A, long B) {
  std::vector<std::pair<long, long>> out;
  for (long a = 0; A * a * a <= n; ++a)
    for (long b = 0; A * a * a + B * b * b <= n; ++b)
      if (A * a * a + B * b * b == n) out.emplace_back(a, b);
  return out;
}

std::vector<std::pair<long, long>> represent(long n, long A, long B) {
  std::vector<std::pair<long, long>> out;
  for (long a = 0; A * a * a <= n; ++a) {
    long r = n - A * a * a;
    if (r % B != 0) continue;
    long s = r / B;
    long b = static_cast<long>(std::llround(std::sqrt(static_cast<double>(s))));
    while (b * b > s) --b;
    while ((b + 1) * (b + 1) <= s) ++b;
    if (b * b == s) out.emplace_back(a, b);
  }
  return out;
}

Predicate parse_predicate(const std::string& s) {
  if (s == "eis3") return Predicate::eis3;
  if (s == "phantom3") return Predicate::phantom3;
  if (s == "eis5") return Predicate::eis5;
  if (s == "phantom5") return Predicate::phantom5;
  throw std::invalid_argument("unknown predicate: " + s);
}

std::string to_string(Predicate p) {
  switch (p) {
    case Predicate::eis3: return "eis3";
    case Predicate::phantom3: return "phantom3";
    case Predicate::eis5: return "eis5";
    case Predicate::phantom5: return "phantom5";
  }
  return "";
}

bool satisfies(Predicate p, long q) {
  if (q < 5 || !is_prime(q)) return false;
  switch (p) {
    case Predicate::eis3: {
      // q = a^2 + 162 b^2 with b != 0 and q = 1 mod 9
      if (q % 9 != 1) return false;
      for (auto [a, b] : represent(q, 1, 162))
        if (b > 0) return true;
      return false;
    }
    case Predicate::phantom3: {
      // q = 81 a^2 + 2 b^2 with b = +-2 mod 9
      for (auto [a, b] : represent(q, 81, 2))
        if (a > 0 && (b % 9 == 2 || b % 9 == 7)) return true;
      return false;
    }
    case Predicate::eis5:
    case Predicate::phantom5: {
      bool eis = p == Predicate::eis5;
      long r = q % 40;
      if (eis ? (r != 1 && r != 11) : (r != 9 && r != 19)) return false;
      FiniteField F(q, eis ? 1 : 2);
      for (const auto& z : quartic_roots(F))
        if (fifth_power_test(F, z)) return true;
      return false;
    }
  }
  return false;
}

std::vector<long> scan(Predicate p, long bound) {
  if (bound < 2) throw std::invalid_argument("bound must be at least 2");
  std::vector<long> out;
  for (long q = 2; q <= bound; ++q)
    if (satisfies(p, q)) out.push_back(q);
  return out;
}

}  // namespace tjl::eiscan
