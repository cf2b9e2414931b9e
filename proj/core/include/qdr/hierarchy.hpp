#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qdr/bracket.hpp"

namespace qdr {

/// Everything needed to reconstruct a hierarchy from its seed functional.
struct HierarchySetup {
  int fields = 1;
  Metric eta;
  LocalFunctional seed;  // the G_{1,1} functional, at `trunc`
  TruncationSpec trunc{};
  int unit_field = 1;
  /// Optional: rebuilds the seed density at another truncation box. Without
  /// it a finite-u seed is treated as an exact polynomial.
  std::function<QDiffPoly(const TruncationSpec&)> seed_at;
};

/// The grid of densities G_{alpha,d}, d = -1 .. d_max+1. Each entry is kept
/// twice: `density` restricted to the requested truncation box, and `work`
/// at the internally padded u-degree the builder used, which the verifiers
/// prefer because its terms are exact strictly beyond the requested box.
class HierarchyTable {
 public:
  struct Entry {
    QDiffPoly density;
    QDiffPoly work;
    bool const_fixed = false;
  };

  int fields() const { return fields_; }
  /// Highest d stored; the entry at top_d() has an undetermined constant.
  int top_d() const { return top_d_; }
  const TruncationSpec& trunc() const { return trunc_; }
  const TruncationSpec& work_trunc() const { return work_trunc_; }

  bool has(int alpha, int d) const { return entries_.count({alpha, d}) > 0; }
  const QDiffPoly& density(int alpha, int d) const { return at(alpha, d).density; }
  const QDiffPoly& work_density(int alpha, int d) const { return at(alpha, d).work; }
  bool const_fixed(int alpha, int d) const { return at(alpha, d).const_fixed; }

  const std::map<std::pair<int, int>, Entry>& entries() const { return entries_; }

 private:
  friend HierarchyTable build_hierarchy(const HierarchySetup&, int);
  const Entry& at(int alpha, int d) const;

  std::map<std::pair<int, int>, Entry> entries_;
  TruncationSpec trunc_{}, work_trunc_{};
  int fields_ = 1;
  int top_d_ = -1;
};

/// One recursion step: from G_{alpha,p} to the constant-free G_{alpha,p+1},
///   G_{p+1} = (D-1)^{-1} int (1/hbar) [G_p, seed] dx' .
/// Propagates NotDivisible / NotExact / WeightOneObstruction, each of which
/// signals an invalid seed or a too-tight truncation.
QDiffPoly recursion_step(const HierarchySetup& setup, const QDiffPoly& g_prev);

/// Reconstructs the table: a forward pass of recursion steps from
/// G_{alpha,-1} = eta_{alpha mu} u^mu through d_max+1 with zero constants,
/// then a backward pass fixing each constant term from the u-free part of
/// d G_{alpha,d+1} / d u^unit. The top entry keeps const_fixed = false.
HierarchyTable build_hierarchy(const HierarchySetup& setup, int d_max);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string residual;  // canonical text of what failed; empty on pass
};

struct CheckReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  void add(std::string name, bool passed, std::string residual = {});
  void append(const CheckReport& other);
};

/// [G_{alpha,p}, G_{beta,q}] = 0 as local functionals for all pairs with
/// -1 <= p,q <= p_max. With a finite u-truncation, residual variational
/// derivatives are checked through u-degree trunc.u_max - 1; everything
/// retained must vanish exactly.
CheckReport verify_commutativity(const HierarchyTable& table, const HierarchySetup& setup,
                                 int p_max);

/// d G_{alpha,d+1} / d u^unit = G_{alpha,d} on every const-fixed entry.
CheckReport verify_string(const HierarchyTable& table, const HierarchySetup& setup);

/// d_x (d G_{alpha,p+1} / d u^beta) = (1/hbar) [G_{alpha,p}, G_{beta,0}]
/// for every built step and every beta.
CheckReport verify_recursion_consistency(const HierarchyTable& table,
                                         const HierarchySetup& setup);

/// eps-parity (only even eps powers) and the degree bound (every term has
/// differential degree <= 0). With check_i_pattern, also: the coefficient
/// of an hbar^m term is real for even m and imaginary for odd m.
CheckReport verify_grading(const HierarchyTable& table, const HierarchySetup& setup,
                           bool check_i_pattern);

/// Right-hand side of the quantum evolution equation for u^field along the
/// flow of G_{beta,q}: (1/hbar) [u^field, G_{beta,q}].
QDiffPoly flow_equation(const HierarchyTable& table, const HierarchySetup& setup, int field,
                        int beta, int q);

}  // namespace qdr
