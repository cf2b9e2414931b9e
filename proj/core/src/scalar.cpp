#include "qdr/scalar.hpp"

#include <algorithm>
#include <mutex>

#include "qdr/errors.hpp"

namespace qdr {

namespace {

struct ParamRegistry {
  std::mutex mutex;
  std::vector<std::string> names;
  std::map<std::string, ParamId, std::less<>> ids;
};

ParamRegistry& registry() {
  static ParamRegistry r;
  return r;
}

}  // namespace

ParamId intern_param(std::string_view name) {
  if (name.empty()) throw SetupError("empty parameter name");
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  if (auto it = r.ids.find(name); it != r.ids.end()) return it->second;
  ParamId id = static_cast<ParamId>(r.names.size());
  r.names.emplace_back(name);
  r.ids.emplace(std::string(name), id);
  return id;
}

const std::string& param_name(ParamId id) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  if (id >= r.names.size()) throw SetupError("unknown parameter id");
  return r.names[id];
}

ParamMonomial ParamMonomial::var(ParamId id, int exp) {
  ParamMonomial m;
  m.multiply(id, exp);
  return m;
}

int ParamMonomial::exponent(ParamId id) const {
  for (const auto& [pid, e] : factors_)
    if (pid == id) return e;
  return 0;
}

int ParamMonomial::total_degree() const {
  int d = 0;
  for (const auto& [pid, e] : factors_) d += e;
  return d;
}

void ParamMonomial::multiply(ParamId id, int exp) {
  if (exp < 0) throw SetupError("negative parameter exponent");
  if (exp == 0) return;
  auto it = std::lower_bound(factors_.begin(), factors_.end(), id,
                             [](const Factor& f, ParamId v) { return f.first < v; });
  if (it != factors_.end() && it->first == id)
    it->second += exp;
  else
    factors_.insert(it, {id, exp});
}

ParamMonomial operator*(const ParamMonomial& a, const ParamMonomial& b) {
  ParamMonomial r = a;
  for (const auto& [id, e] : b.factors_) r.multiply(id, e);
  return r;
}

Scalar scalar_mul(const Scalar& a, const Scalar& b) {
  return {a.coeff * b.coeff, a.params * b.params};
}

void ScalarSum::add(const Scalar& s) {
  if (s.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace(s.params, s.coeff);
  if (!fresh) {
    it->second += s.coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

ScalarSum& ScalarSum::operator+=(const ScalarSum& o) {
  for (const auto& [m, c] : o.terms_) add({c, m});
  return *this;
}

ScalarSum& ScalarSum::operator-=(const ScalarSum& o) {
  for (const auto& [m, c] : o.terms_) add({-c, m});
  return *this;
}

ScalarSum operator*(const ScalarSum& a, const ScalarSum& b) {
  ScalarSum r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add({ca * cb, ma * mb});
  return r;
}

ScalarSum& ScalarSum::operator*=(const ScalarSum& o) {
  *this = *this * o;
  return *this;
}

}  // namespace qdr
