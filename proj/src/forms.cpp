#include "jacp/forms.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "jacp/errors.hpp"

namespace jacp {

namespace {

// A nonzero binary form c * x2^b * (monic-in-x1 part), with the monic part
// dehomogenized to a univariate in t = x1.
struct DehomForm {
  FpElem unit;
  int x2_mult;
  UniPoly u;  // monic, degree = deg F - x2_mult
};

DehomForm dehomogenize(const HomogComponent& F) {
  if (F.form.is_zero()) throw std::domain_error("zero form");
  uint32_t min_x2 = static_cast<uint32_t>(F.form.degree_in(1));
  for (const Term& t : F.form.terms()) {
    if (key_degree(t.key) != static_cast<uint32_t>(F.degree))
      throw std::invalid_argument("component is not homogeneous");
    min_x2 = std::min(min_x2, exp_of(t.key, 1));
  }
  std::vector<uint32_t> c(static_cast<size_t>(F.degree - min_x2) + 1, 0);
  for (const Term& t : F.form.terms()) c[exp_of(t.key, 0)] = t.c;
  UniPoly u = UniPoly::from_coeffs(F.form.ctx(), std::move(c));
  FpElem unit = u.lc();
  return {unit, static_cast<int>(min_x2), monic(u)};
}

// x2^deg * g(x1/x2) for monic g; inverse of dehomogenize on the monic part.
MultiPoly rehomogenize(const UniPoly& g, int extra_x2) {
  std::vector<Term> terms;
  int d = g.degree();
  for (int i = d; i >= 0; --i) {
    if (g.coeffs()[static_cast<size_t>(i)] == 0) continue;
    std::array<uint32_t, 2> es = {static_cast<uint32_t>(i),
                                  static_cast<uint32_t>(d - i + extra_x2)};
    terms.push_back({pack_exps(es), g.coeffs()[static_cast<size_t>(i)]});
  }
  return MultiPoly::from_sorted_terms(g.ctx(), 2, std::move(terms));
}

// One (degree, multiplicity) entry per distinct irreducible factor of the
// form, x2 included; sorted by degree then multiplicity.
std::vector<std::pair<int, int>> profile_form(const HomogComponent& F) {
  DehomForm d = dehomogenize(F);
  std::vector<std::pair<int, int>> out;
  if (d.x2_mult > 0) out.emplace_back(1, d.x2_mult);
  if (d.u.degree() > 0) {
    for (const SquarefreeFactor& sf : squarefree_decomposition(d.u).factors)
      for (auto [deg, cnt] : distinct_degree_profile(sf.factor))
        for (int k = 0; k < cnt; ++k)
          out.emplace_back(deg, static_cast<int>(sf.multiplicity));
  }
  std::sort(out.begin(), out.end());
  return out;
}

InfinityReport report_from(const HomogComponent& F, int top_degree,
                           bool mod_p) {
  InfinityReport r;
  r.top_form_degree = top_degree;
  r.mod_p = mod_p;
  r.factor_profile = profile_form(F);
  for (auto [deg, mult] : r.factor_profile) r.count += deg;
  return r;
}

}  // namespace

std::pair<HomogComponent, HomogComponent> gp_split(const HomogComponent& F) {
  if (F.form.vars() != 2)
    throw std::invalid_argument("gp split needs n = 2");
  DehomForm d = dehomogenize(F);
  const uint32_t p = F.form.ctx().p();

  UniPoly g_uni = UniPoly::constant(F.form.ctx(), F.form.ctx().one());
  UniPoly h_uni = g_uni;
  if (d.u.degree() > 0) {
    for (const SquarefreeFactor& sf : squarefree_decomposition(d.u).factors) {
      uint64_t r = sf.multiplicity % p;
      if (r > 0) g_uni = g_uni * pow(sf.factor, r);
      uint64_t s = (sf.multiplicity - r) / p;
      if (s > 0) h_uni = h_uni * pow(sf.factor, s);
    }
  }
  int rb = d.x2_mult % static_cast<int>(p);
  int sb = (d.x2_mult - rb) / static_cast<int>(p);

  HomogComponent G{g_uni.degree() + rb, d.unit * rehomogenize(g_uni, rb)};
  HomogComponent H{h_uni.degree() + sb, rehomogenize(h_uni, sb)};
  return {std::move(G), std::move(H)};
}

InfinityReport points_at_infinity(const MultiPoly& f) {
  if (f.is_zero()) throw std::domain_error("zero polynomial");
  if (f.vars() != 2)
    throw std::invalid_argument("infinity analysis needs n = 2");
  if (f.is_constant()) return {0, 0, {}, false};
  HomogComponent top{f.total_degree(), leading_form(f)};
  return report_from(top, top.degree, false);
}

InfinityReport points_at_infinity_mod_p(const MultiPoly& f) {
  if (f.vars() != 2)
    throw std::invalid_argument("infinity analysis needs n = 2");
  MultiPoly fb = bar(f);
  HomogComponent top{fb.total_degree(), leading_form(fb)};
  HomogComponent G = gp_split(top).first;
  return report_from(G, top.degree, true);
}

}  // namespace jacp
