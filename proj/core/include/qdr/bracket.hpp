#pragma once

#include <utility>
#include <vector>

#include "qdr/jets.hpp"

namespace qdr {

/// Nondegenerate symmetric pairing eta_{ab} with its exact inverse eta^{ab}.
class Metric {
 public:
  Metric() : Metric(1, {Rational(1)}) {}
  /// Row-major n x n entries of the lowered metric.
  Metric(int fields, std::vector<Rational> lower);

  static Metric identity(int fields);
  /// eta_{12} = eta_{21} = 1, zero diagonal (the Poincare pairing of CP^1).
  static Metric antidiagonal_pair();

  int fields() const { return n_; }
  const Rational& lower(int a, int b) const { return lo_[idx(a, b)]; }
  const Rational& upper(int a, int b) const { return up_[idx(a, b)]; }

 private:
  std::size_t idx(int a, int b) const;

  int n_;
  std::vector<Rational> lo_, up_;
};

/// One multiset of paired derivatives inside the hbar^n sector of the
/// commutator: (alpha_k, s_k) acting on the left argument, (beta_k, r_k) on
/// the right, feeding x-derivative orders j = 1..2n-1+sum(s_k+r_k) through
/// the delta_+ product coefficients.
struct BracketTermPlan {
  std::vector<std::pair<JetVar, JetVar>> pairs;

  int order() const { return static_cast<int>(pairs.size()); }
  /// Sorted list s_k + r_k + 1 indexing the C-coefficients.
  std::vector<int> delta_exponents() const;
  int top_derivative() const;
};

/// The quantum commutator [f, g] of a density with a local functional:
///   sum over n >= 1 of (-i)^{n-1} hbar^n / n! times the paired n-th
///   derivatives of f and of the density of g, contracted with eta and the
///   delta_+ product coefficients.
/// Every output term carries hbar^n with n >= 1. The second overload fixes
/// the output box (the default is the meet of the input boxes).
QDiffPoly commutator_density_functional(const QDiffPoly& f, const LocalFunctional& g,
                                        const Metric& eta);
QDiffPoly commutator_density_functional(const QDiffPoly& f, const LocalFunctional& g,
                                        const Metric& eta, const TruncationSpec& out_trunc);

/// Decrements the hbar power of every term; throws NotDivisible when a term
/// carries no hbar.
QDiffPoly divide_by_hbar(const QDiffPoly& f);

/// The commutator as a local functional, for vanishing checks.
LocalFunctional commutator_functionals(const LocalFunctional& f, const LocalFunctional& g,
                                       const Metric& eta);

/// Standard hydrodynamic bracket:
///   { f, g } = int (delta f / delta u^a) eta^{ab} d_x (delta g / delta u^b) dx.
LocalFunctional classical_bracket(const LocalFunctional& f, const LocalFunctional& g,
                                  const Metric& eta);

}  // namespace qdr
