#pragma once

#include <vector>

#include "qdr/rational.hpp"

namespace qdr {

/// The polynomial C~(N) = sum over a_1+...+a_k = N, a_i >= 0, of
/// a_1^{d_1} ... a_k^{d_k}, with 0^0 = 1. Its degree is k-1+sum(d_i) and
/// the top coefficient is prod(d_i!) / (k-1+sum d_i)!.
struct PowerSumPoly {
  std::vector<int> exponents;    // (d_1, ..., d_k)
  std::vector<Rational> coeffs;  // coeffs[j] of N^j, j = 0..degree

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  Rational eval(long n) const;
};

/// Memoized table of sums-of-powers polynomials. All d_i >= 0, list non-empty.
const PowerSumPoly& power_sum_poly(const std::vector<int>& d);

/// Coefficients C_j with
///   prod_i delta_+^{(a_i)}(x) = (-i)^{n-1} sum_j C_j delta_+^{(j)}(x),
/// all a_i >= 1. C_j vanishes unless j = n-1+sum(a_i) (mod 2).
struct CCoeffs {
  std::vector<int> exponents;    // (a_1, ..., a_n)
  std::vector<Rational> coeffs;  // coeffs[j], j = 0..n-1+sum(a_i)

  int top() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// Memoized; derived from power_sum_poly by the parity/sign rule.
const CCoeffs& c_coeffs(const std::vector<int>& a);

/// |B_{2g}|, the absolute value of the 2g-th Bernoulli number, g >= 1.
Rational bernoulli_abs(int g);

/// B_{2g} with its sign: (-1)^{g+1} |B_{2g}|.
Rational bernoulli_signed(int g);

/// Coefficients s_0..s_order of S(z) = (e^{z/2} - e^{-z/2})/z = sum s_i z^{2i}
/// (odd coefficients vanish and are not stored).
std::vector<Rational> s_series(int order);

/// Multiplicative inverse of an even power series given by its z^{2i}
/// coefficients; c[0] must be 1.
std::vector<Rational> even_series_inverse(const std::vector<Rational>& c);

}  // namespace qdr
