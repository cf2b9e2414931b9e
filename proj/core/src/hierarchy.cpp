#include "qdr/hierarchy.hpp"

#include <algorithm>

#include "qdr/errors.hpp"
#include "qdr/io.hpp"

namespace qdr {

const HierarchyTable::Entry& HierarchyTable::at(int alpha, int d) const {
  auto it = entries_.find({alpha, d});
  if (it == entries_.end()) throw SetupError("hierarchy table entry not built");
  return it->second;
}

bool CheckReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

void CheckReport::add(std::string name, bool passed, std::string residual) {
  checks.push_back({std::move(name), passed, std::move(residual)});
}

void CheckReport::append(const CheckReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

namespace {

QDiffPoly casimir_density(const HierarchySetup& setup, int alpha, const TruncationSpec& t) {
  QDiffPoly g(setup.fields, t);
  for (int mu = 1; mu <= setup.fields; ++mu) {
    const Rational& e = setup.eta.lower(alpha, mu);
    if (sgn(e) != 0)
      g.add_term(TermKey{0, 0, JetMonomial::var({mu, 0}), {}}, GaussianRational(Rational(e)));
  }
  return g;
}

QDiffPoly step(const HierarchySetup& setup, const QDiffPoly& g_prev, const QDiffPoly& seed,
               const TruncationSpec& work, std::optional<int> required_u) {
  TruncationSpec ct = work;
  ct.hbar_max += 1;  // the commutator carries one extra hbar that 1/hbar removes
  QDiffPoly rhs = commutator_density_functional(g_prev, {seed}, setup.eta, ct);
  rhs = divide_by_hbar(rhs);
  rhs.set_trunc(work);
  return invert_dilaton_minus_one(antiderivative_within(rhs, required_u));
}

}  // namespace

QDiffPoly recursion_step(const HierarchySetup& setup, const QDiffPoly& g_prev) {
  return step(setup, g_prev, setup.seed.density, setup.trunc, std::nullopt);
}

HierarchyTable build_hierarchy(const HierarchySetup& setup, int d_max) {
  if (d_max < 0) throw SetupError("d_max must be >= 0");
  if (setup.unit_field < 1 || setup.unit_field > setup.fields)
    throw SetupError("unit field out of range");

  const int steps = d_max + 2;
  const int erosion = setup.trunc.hbar_max + 1;  // max u-degree lost per step

  TruncationSpec work = setup.trunc;
  if (work.u_max) work.u_max = *work.u_max + erosion * steps;
  QDiffPoly seed = setup.seed_at ? setup.seed_at(work) : setup.seed.density;
  seed.set_trunc(work);

  HierarchyTable table;
  table.fields_ = setup.fields;
  table.trunc_ = setup.trunc;
  table.work_trunc_ = work;
  table.top_d_ = d_max + 1;

  std::map<int, QDiffPoly> g;  // current chain value per field, at `work`
  std::map<int, std::optional<int>> trusted;
  for (int alpha = 1; alpha <= setup.fields; ++alpha) {
    g[alpha] = casimir_density(setup, alpha, work);
    trusted[alpha] = std::nullopt;
    table.entries_[{alpha, -1}] = {casimir_density(setup, alpha, setup.trunc), g[alpha], true};
  }

  for (int d = -1; d <= d_max; ++d) {
    for (int alpha = 1; alpha <= setup.fields; ++alpha) {
      if (work.u_max) {
        const int prev = trusted[alpha] ? std::min(*trusted[alpha], *work.u_max) : *work.u_max;
        trusted[alpha] = prev - erosion;
      }
      g[alpha] = step(setup, g[alpha], seed, work, trusted[alpha]);
      QDiffPoly official = g[alpha];
      official.set_trunc(setup.trunc);
      table.entries_[{alpha, d + 1}] = {std::move(official), g[alpha], false};
    }
  }

  // Constants via the string equation, top down. The top entry stays open.
  for (int d = d_max; d >= 0; --d) {
    for (int alpha = 1; alpha <= setup.fields; ++alpha) {
      QDiffPoly c =
          partial(table.entries_[{alpha, d + 1}].work, {setup.unit_field, 0}).constant_part();
      HierarchyTable::Entry& e = table.entries_[{alpha, d}];
      e.work = e.work.nonconstant_part() + c;
      QDiffPoly official = e.work;
      official.set_trunc(setup.trunc);
      e.density = std::move(official);
      e.const_fixed = true;
    }
  }
  return table;
}

namespace {

// Residual filter for identities evaluated on u-truncated tables: terms of
// u-degree above the bound carry truncation noise and are not checked.
QDiffPoly restrict_u(const QDiffPoly& p, std::optional<int> u_bound) {
  if (!u_bound) return p;
  return p.filtered([&](const TermKey& k) { return k.mono.u_count() <= *u_bound; });
}

std::optional<int> minus(std::optional<int> u, int delta) {
  if (!u) return std::nullopt;
  return *u - delta;
}

}  // namespace

CheckReport verify_commutativity(const HierarchyTable& table, const HierarchySetup& setup,
                                 int p_max) {
  CheckReport report;
  if (p_max > table.top_d() - 1)
    throw SetupError("table not built deep enough for the requested p_max");
  std::vector<std::pair<int, int>> index;
  for (int alpha = 1; alpha <= setup.fields; ++alpha)
    for (int p = -1; p <= p_max; ++p) index.push_back({alpha, p});

  const std::optional<int> vd_bound = minus(setup.trunc.u_max, 1);
  for (std::size_t i = 0; i < index.size(); ++i) {
    for (std::size_t j = i; j < index.size(); ++j) {
      const auto [alpha, p] = index[i];
      const auto [beta, q] = index[j];
      QDiffPoly r = commutator_density_functional(table.work_density(alpha, p),
                                                  {table.work_density(beta, q)}, setup.eta,
                                                  table.work_trunc());
      std::string residual;
      for (int gamma = 1; gamma <= setup.fields; ++gamma) {
        QDiffPoly vd = restrict_u(variational_derivative(r, gamma), vd_bound);
        if (!vd.is_zero()) {
          residual += "delta/delta u^" + std::to_string(gamma) + ": " + to_text(vd) + "; ";
        }
      }
      report.add("commutator[G(" + std::to_string(alpha) + "," + std::to_string(p) + "),G(" +
                     std::to_string(beta) + "," + std::to_string(q) + ")]",
                 residual.empty(), residual);
    }
  }
  return report;
}

CheckReport verify_string(const HierarchyTable& table, const HierarchySetup& setup) {
  CheckReport report;
  const std::optional<int> bound = minus(setup.trunc.u_max, 1);
  for (const auto& [key, entry] : table.entries()) {
    const auto [alpha, d] = key;
    if (!entry.const_fixed || !table.has(alpha, d + 1)) continue;
    QDiffPoly diff =
        partial(table.work_density(alpha, d + 1), {setup.unit_field, 0}) - entry.work;
    diff = restrict_u(diff, bound);
    report.add("string[G(" + std::to_string(alpha) + "," + std::to_string(d) + ")]",
               diff.is_zero(), diff.is_zero() ? "" : to_text(diff));
  }
  return report;
}

CheckReport verify_recursion_consistency(const HierarchyTable& table,
                                         const HierarchySetup& setup) {
  CheckReport report;
  const std::optional<int> bound = minus(setup.trunc.u_max, 1);
  for (int alpha = 1; alpha <= setup.fields; ++alpha) {
    for (int p = -1; p + 1 <= table.top_d(); ++p) {
      for (int beta = 1; beta <= setup.fields; ++beta) {
        QDiffPoly lhs = d_x(partial(table.work_density(alpha, p + 1), {beta, 0}));
        TruncationSpec ct = table.work_trunc();
        ct.hbar_max += 1;
        QDiffPoly rhs = commutator_density_functional(
            table.work_density(alpha, p), {table.work_density(beta, 0)}, setup.eta, ct);
        rhs = divide_by_hbar(rhs);
        rhs.set_trunc(table.work_trunc());
        QDiffPoly diff = restrict_u(lhs - rhs, bound);
        report.add("flow[G(" + std::to_string(alpha) + "," + std::to_string(p) + ")->G(" +
                       std::to_string(alpha) + "," + std::to_string(p + 1) + "),beta=" +
                       std::to_string(beta) + "]",
                   diff.is_zero(), diff.is_zero() ? "" : to_text(diff));
      }
    }
  }
  return report;
}

CheckReport verify_grading(const HierarchyTable& table, const HierarchySetup&,
                           bool check_i_pattern) {
  CheckReport report;
  for (const auto& [key, entry] : table.entries()) {
    const auto [alpha, d] = key;
    const std::string tag = "G(" + std::to_string(alpha) + "," + std::to_string(d) + ")";
    std::string parity, degree, ipattern;
    for (const auto& [k, c] : entry.density.terms()) {
      QDiffPoly term(entry.density.fields(), entry.density.trunc());
      term.add_term(k, c);
      if (k.eps % 2 != 0) parity += to_text(term) + "; ";
      if (term_degree(k) > 0)
        degree += to_text(term) + " has degree " + std::to_string(term_degree(k)) + "; ";
      if (check_i_pattern) {
        const bool ok = k.hbar % 2 == 0 ? sgn(c.im) == 0 : sgn(c.re) == 0;
        if (!ok) ipattern += to_text(term) + "; ";
      }
    }
    report.add("eps-parity[" + tag + "]", parity.empty(), parity);
    report.add("degree-bound[" + tag + "]", degree.empty(), degree);
    if (check_i_pattern) report.add("i-pattern[" + tag + "]", ipattern.empty(), ipattern);
  }
  return report;
}

QDiffPoly flow_equation(const HierarchyTable& table, const HierarchySetup& setup, int field,
                        int beta, int q) {
  if (field < 1 || field > setup.fields) throw SetupError("flow field out of range");
  QDiffPoly f = QDiffPoly::jet({field, 0}, setup.fields, table.work_trunc());
  TruncationSpec ct = table.work_trunc();
  ct.hbar_max += 1;
  QDiffPoly r =
      commutator_density_functional(f, {table.work_density(beta, q)}, setup.eta, ct);
  r = divide_by_hbar(r);
  r.set_trunc(setup.trunc);
  return r;
}

}  // namespace qdr
