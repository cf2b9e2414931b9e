#include "qdr/powersums.hpp"

#include <map>
#include <mutex>
#include <numeric>

#include "qdr/errors.hpp"

namespace qdr {

namespace {

// N^d with 0^0 = 1, exact.
mpz_class int_pow(long n, int d) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(d));
  return r;
}

// Values C~(N) for N = 0..n_max by dynamic programming over the summands.
std::vector<mpz_class> brute_values(const std::vector<int>& d, int n_max) {
  std::vector<mpz_class> cur(n_max + 1);
  for (int n = 0; n <= n_max; ++n) cur[n] = int_pow(n, d[0]);
  for (std::size_t i = 1; i < d.size(); ++i) {
    std::vector<mpz_class> next(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
      mpz_class acc = 0;
      for (int a = 0; a <= n; ++a) acc += int_pow(a, d[i]) * cur[n - a];
      next[n] = acc;
    }
    cur = std::move(next);
  }
  return cur;
}

// Exact interpolation through (0, y_0), ..., (deg, y_deg).
std::vector<Rational> interpolate(const std::vector<mpz_class>& y) {
  const int deg = static_cast<int>(y.size()) - 1;
  // Newton forward differences on the integer grid.
  std::vector<Rational> diff(y.size());
  for (int i = 0; i <= deg; ++i) diff[i] = Rational(y[i]);
  std::vector<Rational> newton(y.size());
  newton[0] = diff[0];
  for (int level = 1; level <= deg; ++level) {
    for (int i = 0; i <= deg - level; ++i) diff[i] = diff[i + 1] - diff[i];
    newton[level] = diff[0] / Rational(mpz_class::factorial(static_cast<unsigned long>(level)));
  }
  // Expand sum_k newton[k] * N(N-1)...(N-k+1) into monomial coefficients.
  std::vector<Rational> coeffs(y.size(), Rational(0));
  std::vector<Rational> falling{Rational(1)};  // coefficients of the falling factorial
  for (int k = 0; k <= deg; ++k) {
    for (std::size_t j = 0; j < falling.size(); ++j) coeffs[j] += newton[k] * falling[j];
    // falling *= (N - k)
    falling.push_back(Rational(0));
    for (std::size_t j = falling.size() - 1; j > 0; --j)
      falling[j] = falling[j - 1] - Rational(k) * falling[j];
    falling[0] = -Rational(k) * falling[0];
  }
  return coeffs;
}

PowerSumPoly build_power_sum(const std::vector<int>& d) {
  if (d.empty()) throw SetupError("power_sum_poly needs a non-empty exponent list");
  for (int e : d)
    if (e < 0) throw SetupError("power_sum_poly exponents must be non-negative");

  const int k = static_cast<int>(d.size());
  const int deg = k - 1 + std::accumulate(d.begin(), d.end(), 0);
  PowerSumPoly p;
  p.exponents = d;
  p.coeffs = interpolate(brute_values(d, deg));

  // The closed-form degree, top coefficient, parity and constant-term facts
  // double as construction-time checks.
  Rational top(1);
  for (int e : d) top *= Rational(mpz_class::factorial(static_cast<unsigned long>(e)));
  top /= Rational(mpz_class::factorial(static_cast<unsigned long>(deg)));
  if (p.coeffs[deg] != top) throw EngineError("power sum table: top coefficient mismatch");
  bool all_positive = true, any_positive = false;
  for (int e : d) {
    all_positive = all_positive && e >= 1;
    any_positive = any_positive || e >= 1;
  }
  if (any_positive && sgn(p.coeffs[0]) != 0)
    throw EngineError("power sum table: nonzero constant term");
  if (all_positive)
    for (int j = 0; j <= deg; ++j)
      if ((j - deg) % 2 != 0 && sgn(p.coeffs[j]) != 0)
        throw EngineError("power sum table: parity violation");
  return p;
}

}  // namespace

Rational PowerSumPoly::eval(long n) const {
  Rational r(0);
  for (int j = degree(); j >= 0; --j) r = r * Rational(n) + coeffs[j];
  return r;
}

const PowerSumPoly& power_sum_poly(const std::vector<int>& d) {
  static std::mutex mutex;
  static std::map<std::vector<int>, PowerSumPoly> table;
  std::lock_guard lock(mutex);
  auto it = table.find(d);
  if (it == table.end()) it = table.emplace(d, build_power_sum(d)).first;
  return it->second;
}

const CCoeffs& c_coeffs(const std::vector<int>& a) {
  static std::mutex mutex;
  static std::map<std::vector<int>, CCoeffs> table;
  for (int e : a)
    if (e < 1) throw SetupError("c_coeffs exponents must be >= 1");
  std::lock_guard lock(mutex);
  auto it = table.find(a);
  if (it != table.end()) return it->second;

  const PowerSumPoly& p = power_sum_poly(a);
  const int top = p.degree();  // n-1+sum(a_i)
  CCoeffs c;
  c.exponents = a;
  c.coeffs.assign(top + 1, Rational(0));
  for (int j = 0; j <= top; ++j) {
    if ((top - j) % 2 != 0) continue;
    c.coeffs[j] = ((top - j) / 2) % 2 == 0 ? p.coeffs[j] : -p.coeffs[j];
  }
  return table.emplace(a, std::move(c)).first->second;
}

namespace {

// B_0..B_n via sum_{j<=m} binom(m+1, j) B_j = 0.
const std::vector<Rational>& bernoulli_table(int n) {
  static std::mutex mutex;
  static std::vector<Rational> table{Rational(1)};
  std::lock_guard lock(mutex);
  while (static_cast<int>(table.size()) <= n) {
    const int m = static_cast<int>(table.size());
    Rational acc(0);
    for (int j = 0; j < m; ++j) {
      mpz_class binom;
      mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(m + 1),
                   static_cast<unsigned long>(j));
      acc += Rational(binom) * table[j];
    }
    table.push_back(-acc / Rational(m + 1));
  }
  return table;
}

}  // namespace

Rational bernoulli_abs(int g) {
  if (g < 1) throw SetupError("bernoulli_abs needs g >= 1");
  return abs(bernoulli_table(2 * g)[2 * g]);
}

Rational bernoulli_signed(int g) {
  Rational b = bernoulli_abs(g);
  return g % 2 == 1 ? b : -b;
}

std::vector<Rational> s_series(int order) {
  if (order < 0) throw SetupError("s_series needs order >= 0");
  // (e^{z/2} - e^{-z/2})/z = sum_k z^{2k} / (4^k (2k+1)!).
  std::vector<Rational> s(order + 1);
  Rational four_pow(1);
  for (int k = 0; k <= order; ++k) {
    s[k] = Rational(1) /
           (four_pow * Rational(mpz_class::factorial(static_cast<unsigned long>(2 * k + 1))));
    four_pow *= 4;
  }
  return s;
}

std::vector<Rational> even_series_inverse(const std::vector<Rational>& c) {
  if (c.empty() || c[0] != Rational(1))
    throw SetupError("even_series_inverse needs constant term 1");
  std::vector<Rational> t(c.size(), Rational(0));
  t[0] = 1;
  for (std::size_t m = 1; m < c.size(); ++m) {
    Rational acc(0);
    for (std::size_t j = 1; j <= m; ++j) acc += c[j] * t[m - j];
    t[m] = -acc;
  }
  return t;
}

}  // namespace qdr
