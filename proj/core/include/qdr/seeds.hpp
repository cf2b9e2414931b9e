#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qdr/hierarchy.hpp"

namespace qdr {

/// Quantum KdV: one field, eta = (1),
///   G_{1,1} = int ( u^3/6 + eps^2/24 u u_2 - i hbar/24 u ) dx.
HierarchySetup seed_kdv(const TruncationSpec& trunc);

/// Quantum ILW: one field, eta = (1), formal parameter mu,
///   G_{1,1} = int ( u^3/6
///                   + sum_{g>=1} eps^{2g}   mu^{g-1} |B_{2g}|/(2(2g)!) u u_{2g}
///                   - i hbar/24 u
///                   - i hbar sum_{g>=1} eps^{2g-2} mu^g |B_{2g}|/(2(2g)!) u u_{2g} ) dx,
/// with the g-sums cut by the eps truncation.
HierarchySetup seed_ilw(const TruncationSpec& trunc);

/// Quantum extended Toda: two fields (u^1, u^omega), antidiagonal eta,
/// formal parameter q. The q-sector involves the honest power series
/// e^{S(eps d_x) u^omega}, so a finite u-degree truncation is required.
HierarchySetup seed_toda(const TruncationSpec& trunc);

struct SeedSpec {
  std::string name;
  std::vector<std::string> parameters;
  std::vector<std::string> field_aliases;
  HierarchySetup (*builder)(const TruncationSpec&);
};

const std::vector<SeedSpec>& all_seeds();
const SeedSpec* find_seed(std::string_view name);

/// Laurent coefficients G_d, d = -1..d_max, of the closed dispersionless
/// quantum KdV generating series
///   G(y) = 1/(y^2 S(sqrt(i) lambda y)) e^{y S(lambda/sqrt(i) y d_x) u} - y^{-2},
/// with lambda^2 = hbar and S(z) = (e^{z/2}-e^{-z/2})/z. The expansion is
/// carried out in an extension by tau = lambda/sqrt(i); odd tau powers must
/// cancel, otherwise OddLambdaResidue is raised.
std::map<int, QDiffPoly> dispersionless_kdv_oracle(int d_max, int hbar_max);

/// Rewrites a two-field density from the u-frame to the Miura frame
/// v^1 = e^{eps d_x/2} u^1, v^2 = S(eps d_x) u^omega, by substituting the
/// inverted operator series order by order in eps.
QDiffPoly toda_miura_substitute(const QDiffPoly& f, const TruncationSpec& trunc);

/// Inverse direction: substitutes v-images into an expression over the
/// v-frame, returning it in the u-frame.
QDiffPoly toda_miura_inverse(const QDiffPoly& f, const TruncationSpec& trunc);

}  // namespace qdr
