#pragma once

#include <compare>
#include <map>
#include <optional>
#include <vector>

#include "qdr/scalar.hpp"

namespace qdr {

/// Truncation orders carried by every quantum differential polynomial.
/// Terms beyond the bounds are silently discarded by all arithmetic, so a
/// value is always exact within its own box.
struct TruncationSpec {
  int eps_max = 0;
  int hbar_max = 0;
  std::optional<int> u_max{};  // total u-degree; nullopt = unbounded

  static TruncationSpec meet(const TruncationSpec& a, const TruncationSpec& b);
  bool admits(int eps, int hbar, int u_count) const;
  bool operator==(const TruncationSpec&) const = default;
};

/// One jet variable u^field_jet. Fields are 1-based.
struct JetVar {
  int field = 1;
  int jet = 0;
  auto operator<=>(const JetVar&) const = default;
};

/// Multiset of jet variables in canonical sorted order; empty product = 1.
class JetMonomial {
 public:
  JetMonomial() = default;

  static JetMonomial one() { return {}; }
  static JetMonomial var(JetVar v) {
    JetMonomial m;
    m.factors_.push_back(v);
    return m;
  }

  int u_count() const { return static_cast<int>(factors_.size()); }
  int total_jets() const;
  int max_jet() const;
  int count(JetVar v) const;
  bool is_one() const { return factors_.empty(); }
  const std::vector<JetVar>& factors() const { return factors_; }

  JetMonomial times(JetVar v) const;
  JetMonomial times(const JetMonomial& o) const;
  /// Removes one occurrence of v; v must be present.
  JetMonomial without_one(JetVar v) const;
  /// Replaces one occurrence of `from` by `to`; `from` must be present.
  JetMonomial replace_one(JetVar from, JetVar to) const;

  friend bool operator==(const JetMonomial&, const JetMonomial&) = default;
  friend std::strong_ordering operator<=>(const JetMonomial& a, const JetMonomial& b) {
    return a.factors_ <=> b.factors_;
  }

 private:
  std::vector<JetVar> factors_;
};

struct TermKey {
  int eps = 0;
  int hbar = 0;
  JetMonomial mono;
  ParamMonomial params;

  friend bool operator==(const TermKey&, const TermKey&) = default;
};

/// Differential degree of a term: sum of jets - eps - 2*hbar. Every degree
/// statement in the engine goes through this one function.
int term_degree(const TermKey& t);

/// Dilaton weight: eps + 2*hbar + number of u-factors.
int dilaton_weight(const TermKey& t);

/// Canonical term order: (hbar, eps, u-degree, factors lexicographically,
/// parameter monomial). This is also the printing order.
struct TermOrder {
  bool operator()(const TermKey& a, const TermKey& b) const;
};

/// Sparse quantum differential polynomial: exact Gaussian-rational
/// coefficients on (eps^a hbar^b params jet-monomial) keys, within a
/// truncation box.
class QDiffPoly {
 public:
  using TermMap = std::map<TermKey, GaussianRational, TermOrder>;

  QDiffPoly() = default;
  QDiffPoly(int fields, TruncationSpec trunc);

  static QDiffPoly zero(int fields, const TruncationSpec& t) { return {fields, t}; }
  static QDiffPoly constant(const GaussianRational& c, int fields, const TruncationSpec& t);
  static QDiffPoly jet(JetVar v, int fields, const TruncationSpec& t);

  int fields() const { return fields_; }
  const TruncationSpec& trunc() const { return trunc_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Coefficient of an exact key (zero if absent).
  GaussianRational coeff(const TermKey& key) const;

  /// Merges a term, dropping it if outside the truncation box or zero.
  void add_term(TermKey key, GaussianRational c);

  /// Installs a new truncation spec and discards terms outside it.
  void set_trunc(const TruncationSpec& t);

  /// Keeps only terms satisfying the predicate.
  template <typename Pred>
  QDiffPoly filtered(Pred&& keep) const {
    QDiffPoly r(fields_, trunc_);
    for (const auto& [k, c] : terms_)
      if (keep(k)) r.terms_.emplace(k, c);
    return r;
  }

  QDiffPoly& operator+=(const QDiffPoly& o);
  QDiffPoly& operator-=(const QDiffPoly& o);
  QDiffPoly& operator*=(const GaussianRational& c);
  QDiffPoly& operator*=(const Scalar& s);
  QDiffPoly operator-() const;

  friend QDiffPoly operator+(QDiffPoly a, const QDiffPoly& b) { return a += b; }
  friend QDiffPoly operator-(QDiffPoly a, const QDiffPoly& b) { return a -= b; }
  friend QDiffPoly operator*(const QDiffPoly& a, const QDiffPoly& b);
  friend QDiffPoly operator*(QDiffPoly a, const GaussianRational& c) { return a *= c; }
  friend QDiffPoly operator*(const GaussianRational& c, QDiffPoly a) { return a *= c; }
  friend bool operator==(const QDiffPoly& a, const QDiffPoly& b) {
    return a.fields_ == b.fields_ && a.terms_ == b.terms_;
  }

  /// Multiplies by eps^a hbar^b (terms leaving the box are dropped).
  QDiffPoly shifted(int eps_shift, int hbar_shift) const;

  /// Sum of a*b scaled by c*eps^e*hbar^h, accumulated into *this.
  void add_product(const QDiffPoly& a, const QDiffPoly& b, const GaussianRational& c,
                   int eps_shift = 0, int hbar_shift = 0);

  /// Terms with empty jet monomial (the u-free part).
  QDiffPoly constant_part() const;
  /// Terms with a non-empty jet monomial.
  QDiffPoly nonconstant_part() const;
  /// Restriction to one hbar power, as the coefficient poly (hbar removed).
  QDiffPoly hbar_coefficient(int h) const;
  /// Smallest hbar power present; hbar_max+1 when zero.
  int min_hbar() const;
  /// Terms with hbar power <= h.
  QDiffPoly hbar_at_most(int h) const;

 private:
  void check_compatible(const QDiffPoly& o) const;

  TermMap terms_;
  TruncationSpec trunc_{};
  int fields_ = 1;
};

/// Formal x-derivative: sum over factors, raising one jet index.
QDiffPoly d_x(const QDiffPoly& f);
QDiffPoly d_x_pow(const QDiffPoly& f, int n);

/// Partial derivative with respect to u^field_jet.
QDiffPoly partial(const QDiffPoly& f, JetVar v);

/// Euler operator: sum_k (-d_x)^k partial(f, u^field_k).
QDiffPoly variational_derivative(const QDiffPoly& f, int field);

/// Grading operator D = eps d/d eps + 2 hbar d/d hbar + sum u d/du.
QDiffPoly dilaton(const QDiffPoly& f);

/// Inverse of D - 1. Throws WeightOneObstruction on weight-one terms.
QDiffPoly invert_dilaton_minus_one(const QDiffPoly& f);

/// Returns h with d_x(h) = f and zero constant term; throws NotExact when f
/// is not a total x-derivative. Works per homogeneous component by an exact
/// linear solve over Q(i).
QDiffPoly antiderivative(const QDiffPoly& f);

/// As antiderivative, but components that fail to integrate are only an
/// error when their u-degree is <= required_u (others are dropped). Used by
/// the hierarchy builder on u-truncated seeds, where components beyond the
/// trusted u-degree carry truncation noise.
QDiffPoly antiderivative_within(const QDiffPoly& f, std::optional<int> required_u);

/// Simultaneous substitution u^alpha_s -> d_x^s(rules[alpha]). Fields
/// without a rule are left alone.
QDiffPoly substitute(const QDiffPoly& f, const std::map<int, QDiffPoly>& rules);

/// Specializes a formal parameter to an exact value.
QDiffPoly substitute_param(const QDiffPoly& f, ParamId id, const GaussianRational& value);

/// A density considered modulo constants and total x-derivatives.
struct LocalFunctional {
  QDiffPoly density;
};

/// Equality of local functionals: all variational derivatives of the
/// difference vanish.
bool functional_equal(const LocalFunctional& a, const LocalFunctional& b);

}  // namespace qdr
