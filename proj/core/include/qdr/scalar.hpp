#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qdr/rational.hpp"

namespace qdr {

/// Handle of a formal commuting parameter (mu, q, ...). Names are interned
/// process-wide; which names are *declared* for a computation is decided by
/// the session context (see io.hpp), so a typo never silently creates a
/// new symbol inside a result.
using ParamId = std::uint32_t;

/// Returns the id of `name`, interning it on first use. Thread-safe.
ParamId intern_param(std::string_view name);

/// Inverse of intern_param.
const std::string& param_name(ParamId id);

/// Monomial in the formal parameters: sorted (id, exponent) pairs,
/// exponents > 0, the empty product meaning 1.
class ParamMonomial {
 public:
  using Factor = std::pair<ParamId, int>;

  ParamMonomial() = default;

  static ParamMonomial one() { return {}; }
  static ParamMonomial var(ParamId id, int exp = 1);

  bool is_one() const { return factors_.empty(); }
  int exponent(ParamId id) const;
  int total_degree() const;
  const std::vector<Factor>& factors() const { return factors_; }

  /// Multiplies this monomial by id^exp (exp >= 0).
  void multiply(ParamId id, int exp);

  friend ParamMonomial operator*(const ParamMonomial& a, const ParamMonomial& b);
  friend bool operator==(const ParamMonomial& a, const ParamMonomial& b) = default;
  friend std::strong_ordering operator<=>(const ParamMonomial& a, const ParamMonomial& b) {
    return a.factors_ <=> b.factors_;
  }

 private:
  std::vector<Factor> factors_;
};

/// One Gaussian-rational coefficient times a parameter monomial.
struct Scalar {
  GaussianRational coeff;
  ParamMonomial params;

  Scalar() = default;
  Scalar(GaussianRational c) : coeff(std::move(c)) {}  // NOLINT
  Scalar(GaussianRational c, ParamMonomial p) : coeff(std::move(c)), params(std::move(p)) {}

  bool is_zero() const { return coeff.is_zero(); }
};

/// Exact product; parameter exponents add.
Scalar scalar_mul(const Scalar& a, const Scalar& b);

/// Canonical sum of Scalars, keyed by parameter monomial. Zero coefficients
/// are never stored.
class ScalarSum {
 public:
  ScalarSum() = default;
  ScalarSum(Scalar s) { add(s); }  // NOLINT
  ScalarSum(GaussianRational c) { add(Scalar(std::move(c))); }  // NOLINT

  bool is_zero() const { return terms_.empty(); }
  const std::map<ParamMonomial, GaussianRational>& terms() const { return terms_; }

  void add(const Scalar& s);

  ScalarSum& operator+=(const ScalarSum& o);
  ScalarSum& operator-=(const ScalarSum& o);
  ScalarSum& operator*=(const ScalarSum& o);

  friend ScalarSum operator+(ScalarSum a, const ScalarSum& b) { return a += b; }
  friend ScalarSum operator-(ScalarSum a, const ScalarSum& b) { return a -= b; }
  friend ScalarSum operator*(const ScalarSum& a, const ScalarSum& b);
  friend bool operator==(const ScalarSum& a, const ScalarSum& b) { return a.terms_ == b.terms_; }

 private:
  std::map<ParamMonomial, GaussianRational> terms_;
};

/// Exact sum with like parameter monomials merged.
inline ScalarSum scalar_add(const ScalarSum& a, const ScalarSum& b) { return a + b; }

}  // namespace qdr
