#pragma once
#include <string>
#include <utility>
#include <vector>

#include "tjl/integer.hpp"

// arithmetic over the prime field F_l
namespace tjl::fp {

long reduce(long a, long l);
long mulmod(long a, long b, long l);
long inv(long a, long l);
long powmod(long a, const Int& e, long l);

// coefficients low degree first, no trailing zeros; the zero polynomial is empty
using Poly = std::vector<long>;
int deg(const Poly& f);
Poly trim(Poly f);
Poly monic(const Poly& f, long l);
Poly add(const Poly& f, const Poly& g, long l);
Poly sub(const Poly& f, const Poly& g, long l);
Poly mul(const Poly& f, const Poly& g, long l);
Poly scale(const Poly& f, long c, long l);
void divmod(const Poly& f, const Poly& g, long l, Poly& q, Poly& r);
Poly mod(const Poly& f, const Poly& g, long l);
Poly gcd(Poly f, Poly g, long l);
Poly powmod(const Poly& b, const Int& e, const Poly& m, long l);
Poly derivative(const Poly& f, long l);
Poly from_ints(const std::vector<long>& c, long l);
// monic irreducible factors with multiplicities, sorted by (degree, coefficients)
std::vector<std::pair<Poly, int>> factor(const Poly& f, long l);
// "x^2+x-1", coefficients printed in (-l/2, l/2]
std::string to_string(const Poly& f, long l);

using Mat = std::vector<std::vector<long>>;
Mat mat_mul(const Mat& a, const Mat& b, long l);
Mat mat_eval(const Poly& f, const Mat& a, long l);
int rank(Mat a, long l);
Poly charpoly(const Mat& a, long l);
Poly minpoly(const Mat& a, long l);

}  // namespace tjl::fp
