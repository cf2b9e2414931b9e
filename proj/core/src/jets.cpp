#include "qdr/jets.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "qdr/errors.hpp"

namespace qdr {

TruncationSpec TruncationSpec::meet(const TruncationSpec& a, const TruncationSpec& b) {
  TruncationSpec t;
  t.eps_max = std::min(a.eps_max, b.eps_max);
  t.hbar_max = std::min(a.hbar_max, b.hbar_max);
  if (a.u_max && b.u_max)
    t.u_max = std::min(*a.u_max, *b.u_max);
  else
    t.u_max = a.u_max ? a.u_max : b.u_max;
  return t;
}

bool TruncationSpec::admits(int eps, int hbar, int u_count) const {
  return eps <= eps_max && hbar <= hbar_max && (!u_max || u_count <= *u_max);
}

int JetMonomial::total_jets() const {
  int s = 0;
  for (const JetVar& v : factors_) s += v.jet;
  return s;
}

int JetMonomial::max_jet() const {
  int m = 0;
  for (const JetVar& v : factors_) m = std::max(m, v.jet);
  return m;
}

int JetMonomial::count(JetVar v) const {
  auto [lo, hi] = std::equal_range(factors_.begin(), factors_.end(), v);
  return static_cast<int>(hi - lo);
}

JetMonomial JetMonomial::times(JetVar v) const {
  JetMonomial r = *this;
  r.factors_.insert(std::upper_bound(r.factors_.begin(), r.factors_.end(), v), v);
  return r;
}

JetMonomial JetMonomial::times(const JetMonomial& o) const {
  JetMonomial r;
  r.factors_.resize(factors_.size() + o.factors_.size());
  std::merge(factors_.begin(), factors_.end(), o.factors_.begin(), o.factors_.end(),
             r.factors_.begin());
  return r;
}

JetMonomial JetMonomial::without_one(JetVar v) const {
  JetMonomial r = *this;
  auto it = std::lower_bound(r.factors_.begin(), r.factors_.end(), v);
  if (it == r.factors_.end() || *it != v)
    throw EngineError("jet variable not present in monomial");
  r.factors_.erase(it);
  return r;
}

JetMonomial JetMonomial::replace_one(JetVar from, JetVar to) const {
  return without_one(from).times(to);
}

int term_degree(const TermKey& t) {
  return t.mono.total_jets() - t.eps - 2 * t.hbar;
}

int dilaton_weight(const TermKey& t) { return t.eps + 2 * t.hbar + t.mono.u_count(); }

bool TermOrder::operator()(const TermKey& a, const TermKey& b) const {
  if (a.hbar != b.hbar) return a.hbar < b.hbar;
  if (a.eps != b.eps) return a.eps < b.eps;
  if (a.mono.u_count() != b.mono.u_count()) return a.mono.u_count() < b.mono.u_count();
  if (auto c = a.mono <=> b.mono; c != 0) return c < 0;
  return a.params < b.params;
}

QDiffPoly::QDiffPoly(int fields, TruncationSpec trunc) : trunc_(trunc), fields_(fields) {
  if (fields < 1) throw SetupError("field count must be >= 1");
  if (trunc.eps_max < 0 || trunc.hbar_max < 0 || (trunc.u_max && *trunc.u_max < 0))
    throw SetupError("negative truncation order");
}

QDiffPoly QDiffPoly::constant(const GaussianRational& c, int fields, const TruncationSpec& t) {
  QDiffPoly p(fields, t);
  p.add_term(TermKey{}, c);
  return p;
}

QDiffPoly QDiffPoly::jet(JetVar v, int fields, const TruncationSpec& t) {
  if (v.field < 1 || v.field > fields || v.jet < 0) throw SetupError("jet variable out of range");
  QDiffPoly p(fields, t);
  p.add_term(TermKey{0, 0, JetMonomial::var(v), {}}, GaussianRational(1));
  return p;
}

GaussianRational QDiffPoly::coeff(const TermKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? GaussianRational() : it->second;
}

void QDiffPoly::add_term(TermKey key, GaussianRational c) {
  if (c.is_zero()) return;
  if (!trunc_.admits(key.eps, key.hbar, key.mono.u_count())) return;
  auto [it, fresh] = terms_.try_emplace(std::move(key), std::move(c));
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void QDiffPoly::set_trunc(const TruncationSpec& t) {
  trunc_ = t;
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (!t.admits(it->first.eps, it->first.hbar, it->first.mono.u_count()))
      it = terms_.erase(it);
    else
      ++it;
  }
}

void QDiffPoly::check_compatible(const QDiffPoly& o) const {
  if (fields_ != o.fields_) throw SetupError("incompatible field counts");
}

QDiffPoly& QDiffPoly::operator+=(const QDiffPoly& o) {
  check_compatible(o);
  set_trunc(TruncationSpec::meet(trunc_, o.trunc_));
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

QDiffPoly& QDiffPoly::operator-=(const QDiffPoly& o) {
  check_compatible(o);
  set_trunc(TruncationSpec::meet(trunc_, o.trunc_));
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

QDiffPoly& QDiffPoly::operator*=(const GaussianRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= c;
  return *this;
}

QDiffPoly& QDiffPoly::operator*=(const Scalar& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  TermMap out;
  for (auto& [k, v] : terms_) {
    TermKey key = k;
    key.params = key.params * s.params;
    out.emplace(std::move(key), v * s.coeff);
  }
  terms_ = std::move(out);
  return *this;
}

QDiffPoly QDiffPoly::operator-() const {
  QDiffPoly r = *this;
  for (auto& [k, v] : r.terms_) v = -v;
  return r;
}

QDiffPoly operator*(const QDiffPoly& a, const QDiffPoly& b) {
  a.check_compatible(b);
  QDiffPoly r(a.fields_, TruncationSpec::meet(a.trunc_, b.trunc_));
  r.add_product(a, b, GaussianRational(1));
  return r;
}

QDiffPoly QDiffPoly::shifted(int eps_shift, int hbar_shift) const {
  QDiffPoly r(fields_, trunc_);
  for (const auto& [k, c] : terms_) {
    TermKey key = k;
    key.eps += eps_shift;
    key.hbar += hbar_shift;
    if (key.eps < 0 || key.hbar < 0) throw EngineError("negative grading shift");
    r.add_term(std::move(key), c);
  }
  return r;
}

void QDiffPoly::add_product(const QDiffPoly& a, const QDiffPoly& b, const GaussianRational& c,
                            int eps_shift, int hbar_shift) {
  if (c.is_zero()) return;
  for (const auto& [ka, ca] : a.terms_) {
    const int eps_a = ka.eps + eps_shift;
    const int hbar_a = ka.hbar + hbar_shift;
    if (eps_a > trunc_.eps_max || hbar_a > trunc_.hbar_max) continue;
    const GaussianRational ca_c = ca * c;
    for (const auto& [kb, cb] : b.terms_) {
      TermKey key;
      key.eps = eps_a + kb.eps;
      key.hbar = hbar_a + kb.hbar;
      if (key.eps > trunc_.eps_max || key.hbar > trunc_.hbar_max) continue;
      key.mono = ka.mono.times(kb.mono);
      key.params = ka.params * kb.params;
      add_term(std::move(key), ca_c * cb);
    }
  }
}

QDiffPoly QDiffPoly::constant_part() const {
  return filtered([](const TermKey& k) { return k.mono.is_one(); });
}

QDiffPoly QDiffPoly::nonconstant_part() const {
  return filtered([](const TermKey& k) { return !k.mono.is_one(); });
}

QDiffPoly QDiffPoly::hbar_coefficient(int h) const {
  QDiffPoly r(fields_, trunc_);
  for (const auto& [k, c] : terms_) {
    if (k.hbar != h) continue;
    TermKey key = k;
    key.hbar = 0;
    r.add_term(std::move(key), c);
  }
  return r;
}

int QDiffPoly::min_hbar() const {
  int m = trunc_.hbar_max + 1;
  for (const auto& [k, c] : terms_) m = std::min(m, k.hbar);
  return m;
}

QDiffPoly QDiffPoly::hbar_at_most(int h) const {
  return filtered([h](const TermKey& k) { return k.hbar <= h; });
}

QDiffPoly d_x(const QDiffPoly& f) {
  QDiffPoly r(f.fields(), f.trunc());
  for (const auto& [k, c] : f.terms()) {
    const auto& factors = k.mono.factors();
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i > 0 && factors[i] == factors[i - 1]) continue;  // each distinct factor once
      const JetVar v = factors[i];
      TermKey key = k;
      key.mono = k.mono.replace_one(v, {v.field, v.jet + 1});
      r.add_term(std::move(key), c * GaussianRational(k.mono.count(v)));
    }
  }
  return r;
}

QDiffPoly d_x_pow(const QDiffPoly& f, int n) {
  QDiffPoly r = f;
  for (int i = 0; i < n; ++i) r = d_x(r);
  return r;
}

QDiffPoly partial(const QDiffPoly& f, JetVar v) {
  QDiffPoly r(f.fields(), f.trunc());
  for (const auto& [k, c] : f.terms()) {
    const int n = k.mono.count(v);
    if (n == 0) continue;
    TermKey key = k;
    key.mono = k.mono.without_one(v);
    r.add_term(std::move(key), c * GaussianRational(n));
  }
  return r;
}

QDiffPoly variational_derivative(const QDiffPoly& f, int field) {
  int max_jet = -1;
  for (const auto& [k, c] : f.terms())
    for (const JetVar& v : k.mono.factors())
      if (v.field == field) max_jet = std::max(max_jet, v.jet);
  QDiffPoly r(f.fields(), f.trunc());
  for (int k = 0; k <= max_jet; ++k) {
    QDiffPoly term = d_x_pow(partial(f, {field, k}), k);
    if (k % 2 == 0)
      r += term;
    else
      r -= term;
  }
  return r;
}

QDiffPoly dilaton(const QDiffPoly& f) {
  QDiffPoly r(f.fields(), f.trunc());
  for (const auto& [k, c] : f.terms())
    r.add_term(k, c * GaussianRational(dilaton_weight(k)));
  return r;
}

QDiffPoly invert_dilaton_minus_one(const QDiffPoly& f) {
  QDiffPoly r(f.fields(), f.trunc());
  for (const auto& [k, c] : f.terms()) {
    const int w = dilaton_weight(k);
    if (w == 1)
      throw WeightOneObstruction(
          "term of dilaton weight one (u-linear, no eps or hbar) in the kernel of D - 1");
    r.add_term(k, c / GaussianRational(w - 1));
  }
  return r;
}

namespace {

// Homogeneous slice an antiderivative is solved on: d_x preserves all of
// eps, hbar, params and u-count and raises the total jet order by one.
struct ComponentKey {
  int eps;
  int hbar;
  ParamMonomial params;
  int u_count;
  int total_jets;

  auto operator<=>(const ComponentKey&) const = default;
};

// All sorted jet monomials over `fields` fields with `count` factors, total
// jet order `jets`, each jet <= cap.
void enumerate_monomials(int fields, int count, int jets, int cap, JetMonomial& acc,
                         JetVar min_var, std::vector<JetMonomial>& out) {
  if (count == 0) {
    if (jets == 0) out.push_back(acc);
    return;
  }
  for (int field = min_var.field; field <= fields; ++field) {
    const int jet_start = field == min_var.field ? min_var.jet : 0;
    for (int jet = jet_start; jet <= std::min(cap, jets); ++jet) {
      if (jets - jet > (count - 1) * cap) continue;
      acc = acc.times({field, jet});
      enumerate_monomials(fields, count - 1, jets - jet, cap, acc, {field, jet}, out);
      acc = acc.without_one({field, jet});
    }
  }
}

std::vector<JetMonomial> candidate_monomials(int fields, int count, int jets, int cap) {
  std::vector<JetMonomial> out;
  if (jets < 0 || count < 1 || jets > count * cap) return out;
  JetMonomial acc;
  enumerate_monomials(fields, count, jets, cap, acc, {1, 0}, out);
  return out;
}

}  // namespace

QDiffPoly antiderivative_within(const QDiffPoly& f, std::optional<int> required_u) {
  std::map<ComponentKey, std::vector<std::pair<JetMonomial, GaussianRational>>> components;
  for (const auto& [k, c] : f.terms())
    components[{k.eps, k.hbar, k.params, k.mono.u_count(), k.mono.total_jets()}].emplace_back(
        k.mono, c);

  QDiffPoly result(f.fields(), f.trunc());
  for (const auto& [ck, terms] : components) {
    const bool required = !required_u || ck.u_count <= *required_u;
    auto fail = [&](const char* what) {
      if (required) throw NotExact(what);
    };
    if (ck.total_jets == 0) {
      fail("component without x-derivatives is not a total x-derivative");
      continue;
    }

    int cap = 0;
    for (const auto& [m, c] : terms) cap = std::max(cap, m.max_jet());
    const std::vector<JetMonomial> candidates =
        candidate_monomials(f.fields(), ck.u_count, ck.total_jets - 1, cap - 1);
    if (candidates.empty()) {
      fail("no candidate monomials for antiderivative component");
      continue;
    }

    // Exact linear solve for h with d_x(h) = component.
    std::map<JetMonomial, int> row_of;
    std::vector<std::vector<std::pair<int, Rational>>> columns(candidates.size());
    auto row_index = [&](const JetMonomial& m) {
      auto [it, fresh] = row_of.try_emplace(m, static_cast<int>(row_of.size()));
      return it->second;
    };
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const JetMonomial& m = candidates[c];
      const auto& factors = m.factors();
      for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i > 0 && factors[i] == factors[i - 1]) continue;
        const JetVar v = factors[i];
        JetMonomial image = m.replace_one(v, {v.field, v.jet + 1});
        columns[c].emplace_back(row_index(image), Rational(m.count(v)));
      }
    }
    bool representable = true;
    for (const auto& [m, c] : terms)
      if (!row_of.count(m)) {
        representable = false;
        break;
      }
    if (!representable) {
      fail("component is not a total x-derivative");
      continue;
    }

    const int rows = static_cast<int>(row_of.size());
    const int cols = static_cast<int>(candidates.size());
    std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols, Rational(0)));
    for (int c = 0; c < cols; ++c)
      for (const auto& [r, v] : columns[c]) a[r][c] = v;
    std::vector<Rational> rhs_re(rows, Rational(0)), rhs_im(rows, Rational(0));
    for (const auto& [m, c] : terms) {
      rhs_re[row_of[m]] = c.re;
      rhs_im[row_of[m]] = c.im;
    }

    // Gaussian elimination with two right-hand sides.
    std::vector<int> pivot_col;
    int lead = 0;
    for (int col = 0; col < cols && lead < rows; ++col) {
      int pr = -1;
      for (int r = lead; r < rows; ++r)
        if (sgn(a[r][col]) != 0) {
          pr = r;
          break;
        }
      if (pr < 0) continue;
      std::swap(a[pr], a[lead]);
      std::swap(rhs_re[pr], rhs_re[lead]);
      std::swap(rhs_im[pr], rhs_im[lead]);
      const Rational inv = 1 / a[lead][col];
      for (int c = col; c < cols; ++c) a[lead][c] *= inv;
      rhs_re[lead] *= inv;
      rhs_im[lead] *= inv;
      for (int r = 0; r < rows; ++r) {
        if (r == lead || sgn(a[r][col]) == 0) continue;
        const Rational factor = a[r][col];
        for (int c = col; c < cols; ++c) a[r][c] -= factor * a[lead][c];
        rhs_re[r] -= factor * rhs_re[lead];
        rhs_im[r] -= factor * rhs_im[lead];
      }
      pivot_col.push_back(col);
      ++lead;
    }
    bool consistent = true;
    for (int r = lead; r < rows; ++r)
      if (sgn(rhs_re[r]) != 0 || sgn(rhs_im[r]) != 0) {
        consistent = false;
        break;
      }
    if (!consistent) {
      fail("component is not a total x-derivative");
      continue;
    }
    std::vector<GaussianRational> x(cols);
    for (int r = 0; r < lead; ++r) x[pivot_col[r]] = {rhs_re[r], rhs_im[r]};

    QDiffPoly h(f.fields(), f.trunc());
    for (int c = 0; c < cols; ++c)
      h.add_term(TermKey{ck.eps, ck.hbar, candidates[c], ck.params}, x[c]);

    // Certify: reconstruct the component and compare against d_x(h).
    QDiffPoly comp(f.fields(), f.trunc());
    for (const auto& [m, c] : terms) comp.add_term(TermKey{ck.eps, ck.hbar, m, ck.params}, c);
    if (!(d_x(h) == comp)) {
      fail("component is not a total x-derivative");
      continue;
    }
    result += h;
  }
  return result;
}

QDiffPoly antiderivative(const QDiffPoly& f) { return antiderivative_within(f, std::nullopt); }

QDiffPoly substitute(const QDiffPoly& f, const std::map<int, QDiffPoly>& rules) {
  TruncationSpec t = f.trunc();
  for (const auto& [field, image] : rules) {
    if (field < 1 || field > f.fields()) throw SetupError("substitution rule for unknown field");
    if (image.fields() != f.fields())
      throw SetupError("substitution image has incompatible field count");
    t = TruncationSpec::meet(t, image.trunc());
  }

  std::map<JetVar, QDiffPoly> images;
  auto image_of = [&](JetVar v) -> const QDiffPoly& {
    auto it = images.find(v);
    if (it != images.end()) return it->second;
    auto rule = rules.find(v.field);
    QDiffPoly img = rule == rules.end() ? QDiffPoly::jet(v, f.fields(), t)
                                        : d_x_pow(rule->second, v.jet);
    img.set_trunc(t);
    return images.emplace(v, std::move(img)).first->second;
  };

  QDiffPoly result(f.fields(), t);
  for (const auto& [k, c] : f.terms()) {
    QDiffPoly acc(f.fields(), t);
    acc.add_term(TermKey{k.eps, k.hbar, {}, k.params}, c);
    for (const JetVar& v : k.mono.factors()) {
      acc = acc * image_of(v);
      if (acc.is_zero()) break;
    }
    result += acc;
  }
  return result;
}

QDiffPoly substitute_param(const QDiffPoly& f, ParamId id, const GaussianRational& value) {
  QDiffPoly r(f.fields(), f.trunc());
  for (const auto& [k, c] : f.terms()) {
    const int e = k.params.exponent(id);
    TermKey key = k;
    GaussianRational coeff = c;
    if (e > 0) {
      ParamMonomial rest;
      for (const auto& [pid, pe] : k.params.factors())
        if (pid != id) rest.multiply(pid, pe);
      key.params = rest;
      for (int i = 0; i < e; ++i) coeff *= value;
    }
    r.add_term(std::move(key), std::move(coeff));
  }
  return r;
}

bool functional_equal(const LocalFunctional& a, const LocalFunctional& b) {
  QDiffPoly diff = a.density - b.density;
  if (diff.is_zero()) return true;
  for (int field = 1; field <= diff.fields(); ++field)
    if (!variational_derivative(diff, field).is_zero()) return false;
  return true;
}

}  // namespace qdr
