#include "qdr/bracket.hpp"

#include <algorithm>
#include <numeric>

#include "qdr/errors.hpp"
#include "qdr/powersums.hpp"

namespace qdr {

Metric::Metric(int fields, std::vector<Rational> lower) : n_(fields), lo_(std::move(lower)) {
  if (n_ < 1) throw SetupError("metric needs at least one field");
  if (lo_.size() != static_cast<std::size_t>(n_) * n_) throw SetupError("metric size mismatch");
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b)
      if (lo_[a * n_ + b] != lo_[b * n_ + a]) throw SetupError("metric is not symmetric");

  // Exact Gauss-Jordan inverse.
  std::vector<std::vector<Rational>> m(n_, std::vector<Rational>(2 * n_, Rational(0)));
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b < n_; ++b) m[a][b] = lo_[a * n_ + b];
    m[a][n_ + a] = 1;
  }
  for (int col = 0; col < n_; ++col) {
    int pr = -1;
    for (int r = col; r < n_; ++r)
      if (sgn(m[r][col]) != 0) {
        pr = r;
        break;
      }
    if (pr < 0) throw SetupError("metric is degenerate");
    std::swap(m[pr], m[col]);
    const Rational inv = 1 / m[col][col];
    for (int c = 0; c < 2 * n_; ++c) m[col][c] *= inv;
    for (int r = 0; r < n_; ++r) {
      if (r == col || sgn(m[r][col]) == 0) continue;
      const Rational factor = m[r][col];
      for (int c = 0; c < 2 * n_; ++c) m[r][c] -= factor * m[col][c];
    }
  }
  up_.resize(static_cast<std::size_t>(n_) * n_);
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b) up_[a * n_ + b] = m[a][n_ + b];
}

Metric Metric::identity(int fields) {
  std::vector<Rational> e(static_cast<std::size_t>(fields) * fields, Rational(0));
  for (int a = 0; a < fields; ++a) e[a * fields + a] = 1;
  return {fields, std::move(e)};
}

Metric Metric::antidiagonal_pair() {
  return {2, {Rational(0), Rational(1), Rational(1), Rational(0)}};
}

std::size_t Metric::idx(int a, int b) const {
  if (a < 1 || a > n_ || b < 1 || b > n_) throw SetupError("metric index out of range");
  return static_cast<std::size_t>(a - 1) * n_ + (b - 1);
}

std::vector<int> BracketTermPlan::delta_exponents() const {
  std::vector<int> a;
  a.reserve(pairs.size());
  for (const auto& [fs, gr] : pairs) a.push_back(fs.jet + gr.jet + 1);
  std::sort(a.begin(), a.end());
  return a;
}

int BracketTermPlan::top_derivative() const {
  const std::vector<int> a = delta_exponents();
  return order() - 1 + std::accumulate(a.begin(), a.end(), 0);
}

namespace {

std::vector<JetVar> jet_vars_of(const QDiffPoly& p) {
  std::vector<JetVar> vars;
  for (const auto& [k, c] : p.terms())
    for (const JetVar& v : k.mono.factors())
      if (vars.empty() || !std::binary_search(vars.begin(), vars.end(), v)) {
        vars.insert(std::upper_bound(vars.begin(), vars.end(), v), v);
      }
  return vars;
}

int min_eps(const QDiffPoly& p) {
  int m = p.trunc().eps_max + 1;
  for (const auto& [k, c] : p.terms()) m = std::min(m, k.eps);
  return m;
}

struct PairChoice {
  JetVar fs, gr;
  Rational eta_up;
};

}  // namespace

QDiffPoly commutator_density_functional(const QDiffPoly& f, const LocalFunctional& g,
                                        const Metric& eta) {
  return commutator_density_functional(f, g, eta,
                                       TruncationSpec::meet(f.trunc(), g.density.trunc()));
}

QDiffPoly commutator_density_functional(const QDiffPoly& f, const LocalFunctional& gbar,
                                        const Metric& eta, const TruncationSpec& out_trunc) {
  const QDiffPoly& g = gbar.density;
  if (f.fields() != g.fields()) throw SetupError("incompatible field counts");
  if (eta.fields() != f.fields()) throw SetupError("metric does not match field count");

  QDiffPoly result(f.fields(), out_trunc);
  const int hbar_budget = out_trunc.hbar_max;
  if (hbar_budget < 1 || f.is_zero() || g.is_zero()) return result;

  const std::vector<JetVar> fvars = jet_vars_of(f);
  const std::vector<JetVar> gvars = jet_vars_of(g);
  std::vector<PairChoice> pairs;
  for (const JetVar& fs : fvars)
    for (const JetVar& gr : gvars) {
      const Rational& e = eta.upper(fs.field, gr.field);
      if (sgn(e) != 0) pairs.push_back({fs, gr, e});
    }

  BracketTermPlan plan;
  int sum_r = 0;

  auto emit = [&](const QDiffPoly& df, const QDiffPoly& dg, const Rational& sym,
                  const Rational& eta_prod) {
    const int n = plan.order();
    const CCoeffs& cc = c_coeffs(plan.delta_exponents());
    QDiffPoly inner(f.fields(), out_trunc);
    QDiffPoly dxg = dg;
    for (int j = 1; j <= cc.top(); ++j) {
      dxg = d_x(dxg);
      if (dxg.is_zero()) break;
      if (sgn(cc.coeffs[j]) != 0) inner += dxg * GaussianRational(Rational(cc.coeffs[j]));
    }
    if (inner.is_zero()) return;
    GaussianRational pref = GaussianRational::i_pow(-(n - 1));
    pref *= GaussianRational(Rational(sum_r % 2 == 0 ? 1 : -1) * eta_prod / sym);
    result.add_product(df, inner, pref, 0, n);
  };

  // Non-decreasing sequences of pair choices realize the multisets of the
  // n-fold derivative sum; sym accumulates the product of the factorials of
  // the repetition counts, replacing the 1/n! of the ordered sum.
  auto rec = [&](auto&& self, std::size_t start, int group, const QDiffPoly& df,
                 const QDiffPoly& dg, Rational sym, Rational eta_prod) -> void {
    const int n = plan.order();
    if (n >= 1) emit(df, dg, sym, eta_prod);
    if (n == hbar_budget) return;
    for (std::size_t i = start; i < pairs.size(); ++i) {
      const PairChoice& p = pairs[i];
      QDiffPoly ndf = partial(df, p.fs);
      if (ndf.is_zero()) continue;
      QDiffPoly ndg = partial(dg, p.gr);
      if (ndg.is_zero()) continue;
      if (n + 1 + ndf.min_hbar() + ndg.min_hbar() > hbar_budget) continue;
      if (min_eps(ndf) + min_eps(ndg) > out_trunc.eps_max) continue;
      const int ngroup = i == start && n > 0 ? group + 1 : 1;
      // repeated pair only extends from itself, so equality means i == start
      plan.pairs.push_back({p.fs, p.gr});
      sum_r += p.gr.jet;
      self(self, i, ngroup, ndf, ndg, sym * Rational(ngroup), eta_prod * p.eta_up);
      sum_r -= p.gr.jet;
      plan.pairs.pop_back();
    }
  };

  rec(rec, 0, 0, f, g, Rational(1), Rational(1));
  return result;
}

QDiffPoly divide_by_hbar(const QDiffPoly& f) {
  QDiffPoly r(f.fields(), f.trunc());
  for (const auto& [k, c] : f.terms()) {
    if (k.hbar < 1) throw NotDivisible("term without an hbar factor");
    TermKey key = k;
    key.hbar -= 1;
    r.add_term(std::move(key), c);
  }
  return r;
}

LocalFunctional commutator_functionals(const LocalFunctional& f, const LocalFunctional& g,
                                       const Metric& eta) {
  return {commutator_density_functional(f.density, g, eta)};
}

LocalFunctional classical_bracket(const LocalFunctional& f, const LocalFunctional& g,
                                  const Metric& eta) {
  const QDiffPoly& fd = f.density;
  const QDiffPoly& gd = g.density;
  if (fd.fields() != gd.fields()) throw SetupError("incompatible field counts");
  if (eta.fields() != fd.fields()) throw SetupError("metric does not match field count");
  QDiffPoly density(fd.fields(), TruncationSpec::meet(fd.trunc(), gd.trunc()));
  for (int a = 1; a <= fd.fields(); ++a) {
    QDiffPoly va = variational_derivative(fd, a);
    if (va.is_zero()) continue;
    for (int b = 1; b <= fd.fields(); ++b) {
      const Rational& e = eta.upper(a, b);
      if (sgn(e) == 0) continue;
      density.add_product(va, d_x(variational_derivative(gd, b)), GaussianRational(Rational(e)));
    }
  }
  return {density};
}

}  // namespace qdr
