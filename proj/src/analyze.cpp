#include "jacp/analyze.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "jacp/errors.hpp"

namespace jacp {

namespace {

MultiPoly jac2(const MultiPoly& a, const MultiPoly& b) {
  std::array<MultiPoly, 2> fs = {a, b};
  return jacobian_det(fs);
}

void require_pair(const MultiPoly& f1, const MultiPoly& f2) {
  if (f1.vars() != 2 || f2.vars() != 2)
    throw std::invalid_argument("pair analysis needs two-variable inputs");
  if (f1.ctx() != f2.ctx()) throw FieldMismatchError("mixed field contexts");
  if (f1.is_zero() || f2.is_zero())
    throw std::invalid_argument("pair members must be nonzero");
}

}  // namespace

std::optional<FpElem> is_jacobian_pair(const MultiPoly& f1,
                                       const MultiPoly& f2) {
  MultiPoly j = jac2(f1, f2);
  if (j.is_zero() || !j.is_constant()) return std::nullopt;
  return j.constant_value();
}

namespace {

// x_axis -> x_axis + c * x_other^m as an elementary shear.
ElementaryMap shear(FieldCtx ctx, int axis, FpElem c, int m) {
  std::vector<uint32_t> coeffs(static_cast<size_t>(m) + 1, 0);
  coeffs.back() = c.value();
  return ElementaryMap::type2(ctx, axis, UniPoly::from_coeffs(ctx, coeffs));
}

struct AffineCoeffs {
  std::array<FpElem, 6> a;
  bool identity;
};

std::optional<AffineCoeffs> read_affine(const MultiPoly& g1,
                                        const MultiPoly& g2) {
  FieldCtx ctx = g1.ctx();
  auto k = [](uint32_t e1, uint32_t e2) {
    std::array<uint32_t, 2> es = {e1, e2};
    return pack_exps(es);
  };
  std::array<FpElem, 6> a = {g1.coeff_of(k(1, 0)), g1.coeff_of(k(0, 1)),
                             g1.coeff_of(k(0, 0)), g2.coeff_of(k(1, 0)),
                             g2.coeff_of(k(0, 1)), g2.coeff_of(k(0, 0))};
  if ((a[0] * a[4] - a[1] * a[3]).is_zero()) return std::nullopt;
  bool id = a[0] == ctx.one() && a[1].is_zero() && a[2].is_zero() &&
            a[3].is_zero() && a[4] == ctx.one() && a[5].is_zero();
  return AffineCoeffs{a, id};
}

}  // namespace

AutomorphicDecision is_automorphic_pair(const MultiPoly& f1,
                                        const MultiPoly& f2) {
  require_pair(f1, f2);
  FieldCtx ctx = f1.ctx();
  MultiPoly g1 = f1, g2 = f2;
  std::vector<ElementaryMap> ops;  // reductions in the order performed

  for (;;) {
    if (g1.is_zero() || g2.is_zero()) return {};
    int d1 = g1.total_degree(), d2 = g2.total_degree();
    if (d1 <= 1 && d2 <= 1) break;

    bool first = d1 >= d2;
    const MultiPoly& big = first ? g1 : g2;
    const MultiPoly& small = first ? g2 : g1;
    int db = first ? d1 : d2, ds = first ? d2 : d1;
    if (ds == 0 || db % ds != 0) return {};

    int m = db / ds;
    MultiPoly top = leading_form(big);
    MultiPoly base = pow(leading_form(small), m);
    FpElem c = top.leading_coeff() / base.leading_coeff();
    // Proportionality of equal-degree forms is symmetric, so a failed tie
    // needs no second direction.
    if (top != c * base) return {};

    ops.push_back(shear(ctx, first ? 1 : 2, -c, m));
    MultiPoly reduced = big - MultiPoly::constant(ctx, 2, c) * pow(small, m);
    (first ? g1 : g2) = std::move(reduced);
  }

  auto affine = read_affine(g1, g2);
  if (!affine) return {};

  std::vector<ElementaryMap> w;
  if (!affine->identity || ops.empty())
    w.push_back(ElementaryMap::type1(affine->a));
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    const Type2Map& t = it->as_type2();
    std::vector<uint32_t> coeffs(t.h.coeffs());
    for (uint32_t& v : coeffs) v = (-ctx.elem(v)).value();
    w.push_back(
        ElementaryMap::type2(ctx, t.axis, UniPoly::from_coeffs(ctx, coeffs)));
  }

  MorphismChain witness(std::move(w));
  auto [r1, r2] = apply_chain(witness);
  if (r1 != f1 || r2 != f2)
    throw std::logic_error("witness recomposition mismatch");
  return {true, std::move(witness)};
}

DerivationCtx::DerivationCtx(MultiPoly f1, MultiPoly f2)
    : f1_(std::move(f1)), f2_(std::move(f2)) {
  require_pair(f1_, f2_);
}

MultiPoly derivation(const DerivationCtx& d, int i, const MultiPoly& g) {
  if (i != 1 && i != 2) throw std::invalid_argument("slot must be 1 or 2");
  return i == 1 ? jac2(g, d.f2()) : jac2(d.f1(), g);
}

MultiPoly derivation_power(const DerivationCtx& d, int i, int times,
                           MultiPoly g) {
  for (int k = 0; k < times; ++k) g = derivation(d, i, g);
  return g;
}

namespace {

// Dense bivariate coefficient grids. The identity sweeps below multiply
// thousands of medium-degree polynomials per pair; the sparse representation
// spends its time hashing exponent keys, flat row-major arrays do not.
struct Grid {
  int deg;  // degree bound; storage is (deg+1) x (deg+1), row [e1]
  std::vector<uint32_t> a;

  explicit Grid(int d) : deg(d), a(cells(d), 0) {}
  static size_t cells(int d) {
    return static_cast<size_t>(d + 1) * static_cast<size_t>(d + 1);
  }
  size_t idx(int e1, int e2) const {
    return static_cast<size_t>(e1) * static_cast<size_t>(deg + 1) +
           static_cast<size_t>(e2);
  }
  uint32_t at(int e1, int e2) const {
    return (e1 <= deg && e2 <= deg) ? a[idx(e1, e2)] : 0;
  }
};

Grid to_grid(const MultiPoly& f) {
  Grid g(std::max(f.total_degree(), 0));
  for (const Term& t : f.terms())
    g.a[g.idx(static_cast<int>(exp_of(t.key, 0)),
              static_cast<int>(exp_of(t.key, 1)))] = t.c;
  return g;
}

int live_degree(const Grid& g) {
  int d = -1;
  for (int e1 = 0; e1 <= g.deg; ++e1)
    for (int e2 = 0; e1 + e2 <= g.deg; ++e2)
      if (g.a[g.idx(e1, e2)] != 0) d = std::max(d, e1 + e2);
  return d;
}

bool grid_is_zero(const Grid& g) { return live_degree(g) < 0; }

Grid shrink(const Grid& g) {
  int d = std::max(live_degree(g), 0);
  if (d == g.deg) return g;
  Grid out(d);
  for (int e1 = 0; e1 <= d; ++e1)
    for (int e2 = 0; e1 + e2 <= d; ++e2)
      out.a[out.idx(e1, e2)] = g.a[g.idx(e1, e2)];
  return out;
}

Grid mul(const Grid& A, const Grid& B, uint32_t p) {
  // Deferred reduction with the same fold guard as the sparse accumulator:
  // one product is < 2^62, so the running cell never reaches 2^63.
  constexpr uint64_t kFold = 1ull << 62;
  int d = A.deg + B.deg;
  std::vector<uint64_t> acc(Grid::cells(d), 0);
  const size_t w = static_cast<size_t>(d) + 1;
  for (int b1 = 0; b1 <= B.deg; ++b1) {
    for (int b2 = 0; b1 + b2 <= B.deg; ++b2) {
      const uint64_t v = B.a[B.idx(b1, b2)];
      if (v == 0) continue;
      for (int a1 = 0; a1 <= A.deg; ++a1) {
        const uint32_t* src = &A.a[A.idx(a1, 0)];
        uint64_t* dst = &acc[static_cast<size_t>(a1 + b1) * w + b2];
        for (int a2 = 0; a1 + a2 <= A.deg; ++a2) {
          dst[a2] += v * src[a2];
          if (dst[a2] >= kFold) dst[a2] %= p;
        }
      }
    }
  }
  Grid out(d);
  for (size_t i = 0; i < acc.size(); ++i)
    out.a[i] = static_cast<uint32_t>(acc[i] % p);
  return shrink(out);
}

Grid dx(const Grid& A, int var, uint32_t p) {
  Grid out(std::max(A.deg - 1, 0));
  for (int e1 = 0; e1 <= A.deg; ++e1) {
    for (int e2 = 0; e1 + e2 <= A.deg; ++e2) {
      uint64_t c = A.a[A.idx(e1, e2)];
      if (c == 0) continue;
      if (var == 0 && e1 > 0)
        out.a[out.idx(e1 - 1, e2)] = static_cast<uint32_t>(c * (e1 % p) % p);
      if (var == 1 && e2 > 0)
        out.a[out.idx(e1, e2 - 1)] = static_cast<uint32_t>(c * (e2 % p) % p);
    }
  }
  return out;
}

Grid add_sub(const Grid& A, const Grid& B, uint32_t p, bool subtract) {
  Grid out(std::max(A.deg, B.deg));
  for (int e1 = 0; e1 <= out.deg; ++e1)
    for (int e2 = 0; e1 + e2 <= out.deg; ++e2) {
      uint32_t b = B.at(e1, e2);
      out.a[out.idx(e1, e2)] =
          (A.at(e1, e2) + (subtract ? p - b : b)) % p;
    }
  return shrink(out);
}

// See nabla: the (p-1)-fold partial in each variable, coefficientwise a
// falling-factorial scale and an exponent shift.
Grid nabla_grid(const Grid& A, uint32_t p) {
  const int q = static_cast<int>(p) - 1;
  auto falling = [&](int e) {
    uint64_t c = 1;
    for (int s = 0; s < q && c != 0; ++s)
      c = c * (static_cast<uint32_t>(e - s) % p) % p;
    return c;
  };
  Grid out(std::max(A.deg - 2 * q, 0));
  for (int e1 = q; e1 <= A.deg; ++e1) {
    uint64_t s1 = falling(e1);
    if (s1 == 0) continue;
    for (int e2 = q; e1 + e2 <= A.deg; ++e2) {
      uint64_t c = A.a[A.idx(e1, e2)];
      if (c == 0) continue;
      uint64_t s = s1 * falling(e2) % p;
      if (s == 0) continue;
      out.a[out.idx(e1 - q, e2 - q)] = static_cast<uint32_t>(c * s % p);
    }
  }
  return out;
}

bool grids_equal(const Grid& A, const Grid& B) {
  int d = std::max(A.deg, B.deg);
  for (int e1 = 0; e1 <= d; ++e1)
    for (int e2 = 0; e1 + e2 <= d; ++e2)
      if (A.at(e1, e2) != B.at(e1, e2)) return false;
  return true;
}

std::vector<Grid> grid_powers(const Grid& base, uint32_t p) {
  std::vector<Grid> out;
  Grid one(0);
  one.a[0] = 1;
  out.push_back(std::move(one));
  for (uint32_t k = 1; k < p; ++k) out.push_back(mul(out.back(), base, p));
  return out;
}

// lhs == alpha * rhs for the shared constant alpha in k^*, fixing alpha on
// the first non-vanishing instance.
bool match_scaled(const Grid& lhs, const Grid& rhs, FieldCtx ctx,
                  std::optional<FpElem>& alpha) {
  const uint32_t p = ctx.p();
  int pivot1 = -1, pivot2 = -1;
  for (int e1 = 0; e1 <= rhs.deg && pivot1 < 0; ++e1)
    for (int e2 = 0; e1 + e2 <= rhs.deg; ++e2)
      if (rhs.a[rhs.idx(e1, e2)] != 0) {
        pivot1 = e1;
        pivot2 = e2;
        break;
      }
  if (pivot1 < 0) return grid_is_zero(lhs);
  if (grid_is_zero(lhs)) return false;
  FpElem cand =
      ctx.elem(lhs.at(pivot1, pivot2)) / ctx.elem(rhs.at(pivot1, pivot2));
  if (alpha && *alpha != cand) return false;
  const uint64_t cv = cand.value();
  int d = std::max(lhs.deg, rhs.deg);
  for (int e1 = 0; e1 <= d; ++e1)
    for (int e2 = 0; e1 + e2 <= d; ++e2)
      if (lhs.at(e1, e2) != cv * rhs.at(e1, e2) % p) return false;
  alpha = cand;
  return true;
}

}  // namespace

DerivationIdentityReport check_derivation_identities(
    const MultiPoly& f1, const MultiPoly& f2,
    std::span<const MultiPoly> probes) {
  require_pair(f1, f2);
  FieldCtx ctx = f1.ctx();
  const uint32_t p = ctx.p();
  DerivationIdentityReport rep;

  Grid g1 = to_grid(f1), g2 = to_grid(f2);
  std::array<Grid, 2> f1d = {dx(g1, 0, p), dx(g1, 1, p)};
  std::array<Grid, 2> f2d = {dx(g2, 0, p), dx(g2, 1, p)};
  auto derive = [&](int slot, const Grid& g) {
    Grid gx1 = dx(g, 0, p), gx2 = dx(g, 1, p);
    if (slot == 1)
      return add_sub(mul(gx1, f2d[1], p), mul(gx2, f2d[0], p), p, true);
    return add_sub(mul(f1d[0], gx2, p), mul(f1d[1], gx1, p), p, true);
  };
  auto derive_n = [&](int slot, Grid g, uint32_t times) {
    for (uint32_t k = 0; k < times; ++k) g = derive(slot, g);
    return g;
  };

  std::vector<Grid> pow1 = grid_powers(g1, p);
  std::vector<Grid> pow2 = grid_powers(g2, p);

  rep.reconstruction = true;
  for (int i = 1; i <= 2 && rep.reconstruction; ++i) {
    const std::vector<Grid>& fp = i == 1 ? pow1 : pow2;
    for (const MultiPoly& g : probes) {
      Grid pg = to_grid(g);
      Grid sum(0);
      for (uint32_t j = 0; j < p; ++j)
        sum = add_sub(sum,
                      mul(fp[j],
                          derive_n(i, mul(fp[p - 1 - j], pg, p), p - 1), p),
                      p, false);
      if (!match_scaled(pg, sum, ctx, rep.alpha_reconstruction)) {
        rep.reconstruction = false;
        break;
      }
    }
  }

  rep.factorization = true;
  for (const MultiPoly& g : probes) {
    Grid pg = to_grid(g);
    Grid lhs = nabla_grid(pg, p);
    Grid rhs = derive_n(1, derive_n(2, pg, p - 1), p - 1);
    if (!match_scaled(lhs, rhs, ctx, rep.alpha_factorization)) {
      rep.factorization = false;
      break;
    }
  }

  rep.table = true;
  for (uint32_t r1 = 0; r1 < p && rep.table; ++r1) {
    Grid row = pow1[r1];
    for (uint32_t r2 = 0; r2 < p; ++r2) {
      Grid v = nabla_grid(row, p);
      if (r1 == p - 1 && r2 == p - 1) {
        if (live_degree(v) == 0) {
          rep.alpha_table = ctx.elem(v.a[0]);
        } else {
          rep.table = false;
        }
      } else if (!grid_is_zero(v)) {
        rep.table = false;
        break;
      }
      if (r2 + 1 < p) row = mul(row, g2, p);
    }
  }

  return rep;
}

bool check_nabla_jacobian_identity(std::span<const MultiPoly> fs) {
  if (fs.empty() || fs.size() > 3)
    throw std::invalid_argument("identity needs 1 to 3 polynomials");
  const int n = static_cast<int>(fs.size());
  FieldCtx ctx = fs[0].ctx();
  const uint32_t p = ctx.p();
  for (const MultiPoly& f : fs) {
    if (f.ctx() != ctx) throw FieldMismatchError("mixed field contexts");
    if (f.vars() != n)
      throw std::invalid_argument("polynomial count must match ring size");
  }

  if (n == 2) {
    std::vector<Grid> pa = grid_powers(to_grid(fs[0]), p);
    std::vector<Grid> pb = grid_powers(to_grid(fs[1]), p);
    Grid lhs(0);
    for (uint32_t i = 0; i < p; ++i) {
      for (uint32_t j = 0; j < p; ++j) {
        Grid comono = mul(pa[p - 1 - i], pb[p - 1 - j], p);
        Grid term =
            mul(mul(pa[i], pb[j], p), nabla_grid(comono, p), p);
        lhs = add_sub(lhs, term, p, false);
      }
    }
    std::vector<Grid> jp = grid_powers(to_grid(jacobian_det(fs)), p);
    return grids_equal(lhs, jp[p - 1]);
  }

  std::vector<std::vector<MultiPoly>> pows;
  for (const MultiPoly& f : fs) {
    std::vector<MultiPoly> row = {MultiPoly::constant(ctx, n, ctx.one())};
    for (uint32_t k = 1; k < p; ++k) row.push_back(row.back() * f);
    pows.push_back(std::move(row));
  }

  MultiPoly lhs = MultiPoly::zero(ctx, n);
  std::vector<uint32_t> idx(static_cast<size_t>(n), 0);
  for (;;) {
    MultiPoly mono = MultiPoly::constant(ctx, n, ctx.one());
    MultiPoly comono = mono;
    for (int v = 0; v < n; ++v) {
      mono = mono * pows[static_cast<size_t>(v)][idx[static_cast<size_t>(v)]];
      comono = comono *
               pows[static_cast<size_t>(v)][p - 1 - idx[static_cast<size_t>(v)]];
    }
    lhs = lhs + mono * nabla(comono);

    int v = 0;
    while (v < n && ++idx[static_cast<size_t>(v)] == p) {
      idx[static_cast<size_t>(v)] = 0;
      ++v;
    }
    if (v == n) break;
  }

  MultiPoly rhs = pow(jacobian_det(fs), p - 1);
  if (n % 2 == 1) rhs = -ctx.one() * rhs;
  return lhs == rhs;
}

MinPoly primitive_min_poly(const MultiPoly& u, const UniPoly& h1,
                           const UniPoly& h2) {
  if (u.vars() != 2) throw std::invalid_argument("u must be two-variable");
  if (u.is_zero()) throw std::invalid_argument("u must be nonzero");
  if (h1.is_zero() || h2.is_zero())
    throw std::invalid_argument("h1, h2 must be nonzero");
  FieldCtx ctx = u.ctx();
  if (h1.ctx() != ctx || h2.ctx() != ctx)
    throw FieldMismatchError("mixed field contexts");

  const int d = u.total_degree();
  int s = d, t = 0;
  for (const Term& term : u.terms()) {
    if (static_cast<int>(key_degree(term.key)) != d)
      throw std::invalid_argument("u must be homogeneous");
    int j = static_cast<int>(exp_of(term.key, 0));
    s = std::min(s, j);
    t = std::max(t, j);
  }

  MultiPoly x1 = MultiPoly::variable(ctx, 2, 0);
  MultiPoly x2 = MultiPoly::variable(ctx, 2, 1);
  MultiPoly f1 = x1 * eval_at(h1, u);
  MultiPoly f2 = x2 * eval_at(h2, u);
  if (!is_jacobian_pair(f1, f2))
    throw ConstraintError("not-jacobian",
                          "the pair built from u, h1, h2 is not Jacobian");

  MinPoly m;
  m.degree = t * h1.degree() + (d - s) * h2.degree() + 1;
  m.coeffs.assign(static_cast<size_t>(m.degree) + 1,
                  MultiPoly::zero(ctx, 2));

  UniPoly lead = UniPoly::t(ctx) * pow(h1, t) * pow(h2, d - s);
  for (int k = 0; k <= lead.degree(); ++k)
    m.coeffs[static_cast<size_t>(k)] =
        MultiPoly::constant(ctx, 2, lead.coeff(k));

  for (const Term& term : u.terms()) {
    int j = static_cast<int>(exp_of(term.key, 0));
    UniPoly bj = pow(h1, t - j) * pow(h2, j - s);
    std::array<uint32_t, 2> es = {static_cast<uint32_t>(j),
                                  static_cast<uint32_t>(d - j)};
    MultiPoly sym = MultiPoly::monomial(ctx, 2, es, ctx.elem(term.c));
    for (int k = 0; k <= bj.degree(); ++k)
      m.coeffs[static_cast<size_t>(k)] =
          m.coeffs[static_cast<size_t>(k)] - bj.coeff(k) * sym;
  }

  if (!eval_min_poly(m, u, f1, f2).is_zero())
    throw std::logic_error("minimal polynomial does not vanish at u");
  return m;
}

MultiPoly eval_min_poly(const MinPoly& m, const MultiPoly& u,
                        const MultiPoly& f1, const MultiPoly& f2) {
  FieldCtx ctx = u.ctx();
  std::vector<MultiPoly> at = {f1, f2};
  MultiPoly acc = MultiPoly::zero(ctx, 2);
  for (size_t k = m.coeffs.size(); k-- > 0;)
    acc = acc * u + substitute(m.coeffs[k], at);
  return acc;
}

ResultantBound resultant_bound(const MultiPoly& f1, const MultiPoly& f2) {
  require_pair(f1, f2);
  if (!is_jacobian_pair(f1, f2))
    throw ConstraintError("not-jacobian", "resultant bound needs J in k^*");
  FieldCtx ctx = f1.ctx();

  ResultantBound out;
  out.product = static_cast<uint64_t>(f1.total_degree()) *
                static_cast<uint64_t>(f2.total_degree());

  // Four-variable ring (t1, t2, x1, x2); F_i = f_i(t1, t2) - f_i(x1, x2).
  std::vector<MultiPoly> ts = {MultiPoly::variable(ctx, 4, 0),
                               MultiPoly::variable(ctx, 4, 1)};
  std::vector<MultiPoly> xs = {MultiPoly::variable(ctx, 4, 2),
                               MultiPoly::variable(ctx, 4, 3)};
  MultiPoly F1 = substitute(f1, ts) - substitute(f1, xs);
  MultiPoly F2 = substitute(f2, ts) - substitute(f2, xs);

  int d1 = F1.degree_in(1), d2 = F2.degree_in(1);
  MultiPoly r = MultiPoly::zero(ctx, 4);
  if (d1 == 0 && d2 == 0) return out;
  if (d1 == 0) {
    r = pow(F1, static_cast<uint32_t>(d2));
  } else if (d2 == 0) {
    r = pow(F2, static_cast<uint32_t>(d1));
  } else {
    r = resultant(F1, F2, 1);
  }
  if (r.is_zero()) return out;
  int cert = r.degree_in(0);
  if (cert >= 1) out.certificate = cert;
  return out;
}

PairReport conjecture_report(const MultiPoly& f1, const MultiPoly& f2,
                             std::optional<uint64_t> witness_degree) {
  require_pair(f1, f2);
  FieldCtx ctx = f1.ctx();
  const uint32_t p = ctx.p();

  PairReport r(jac2(f1, f2));
  r.p = p;
  r.deg1 = f1.total_degree();
  r.deg2 = f2.total_degree();
  r.is_jacobian = r.jacobian_value.is_constant() && !r.jacobian_value.is_zero();
  r.pts_inf_1 = points_at_infinity(f1);
  r.pts_inf_2 = points_at_infinity(f2);
  try {
    r.pts_inf_mod_p_1 = points_at_infinity_mod_p(f1);
  } catch (const NoBarFormError&) {
  }
  try {
    r.pts_inf_mod_p_2 = points_at_infinity_mod_p(f2);
  } catch (const NoBarFormError&) {
  }
  r.triangle_1 = is_triangle_polygon(f1);
  r.triangle_2 = is_triangle_polygon(f2);
  r.degree_divisibility = (r.deg2 != 0 && r.deg1 % r.deg2 == 0) ||
                          (r.deg1 != 0 && r.deg2 % r.deg1 == 0);
  r.low_degree_applicable =
      r.deg1 < static_cast<int>(p) && r.deg2 < static_cast<int>(p);

  AutomorphicDecision dec = is_automorphic_pair(f1, f2);
  r.automorphic = dec.automorphic;
  r.witness = std::move(dec.witness);
  if (r.automorphic)
    r.extension_degree = 1;
  else
    r.extension_degree = witness_degree;
  return r;
}

}  // namespace jacp
