#pragma once

#include <utility>
#include <vector>

#include "jacp/poly.hpp"
#include "jacp/unipoly.hpp"

namespace jacp {

// Factor-structure summary of the top form of a curve in two variables.
// factor_profile holds one (degree, multiplicity) entry per distinct
// irreducible factor, sorted; count sums the degrees, which equals the
// number of distinct projective roots over the algebraic closure because
// an irreducible of degree d over F_p is separable and carries d of them.
// No extension field is ever constructed.
struct InfinityReport {
  int count = 0;
  int top_form_degree = 0;
  std::vector<std::pair<int, int>> factor_profile;
  bool mod_p = false;
};

// Splits a nonzero binary form F as G * H^p, where each irreducible factor
// of multiplicity e contributes e mod p to G and (e - e mod p) / p to H.
// The x2-power factor is tracked separately through the dehomogenization so
// the root at x1 = 0 is never lost. G keeps the unit; multiplicities inside
// G land in [1, p-1].
std::pair<HomogComponent, HomogComponent> gp_split(const HomogComponent& F);

// Distinct projective roots of the top form of f. Pre: f != 0, n = 2.
InfinityReport points_at_infinity(const MultiPoly& f);

// Mod-p variant: truncate f at its highest component outside
// k[x1^p, x2^p], take the top form of the truncation, split off the p-th
// power part, and count the roots of the remaining factor G. Throws
// NoBarFormError when f lies in the subring.
InfinityReport points_at_infinity_mod_p(const MultiPoly& f);

}  // namespace jacp
