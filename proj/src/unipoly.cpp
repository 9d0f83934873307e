#include "jacp/unipoly.hpp"

#include <algorithm>
#include <stdexcept>

#include "jacp/errors.hpp"

namespace jacp {

namespace {

void strip(std::vector<uint32_t>& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

void require_same(const UniPoly& a, const UniPoly& b) {
  if (a.ctx() != b.ctx()) throw FieldMismatchError("mixed field contexts");
}

}  // namespace

UniPoly UniPoly::constant(FieldCtx ctx, FpElem c) {
  return from_coeffs(ctx, {c.value()});
}

UniPoly UniPoly::t(FieldCtx ctx) { return from_coeffs(ctx, {0, 1}); }

UniPoly UniPoly::from_coeffs(FieldCtx ctx, std::vector<uint32_t> coeffs) {
  UniPoly f(ctx);
  for (uint32_t& c : coeffs) c %= ctx.p();
  strip(coeffs);
  f.coeffs_ = std::move(coeffs);
  return f;
}

FpElem UniPoly::coeff(int k) const {
  if (k < 0 || static_cast<size_t>(k) >= coeffs_.size()) return ctx_.zero();
  return ctx_.elem(coeffs_[static_cast<size_t>(k)]);
}

FpElem UniPoly::lc() const {
  if (is_zero()) throw std::domain_error("zero polynomial has no lc");
  return ctx_.elem(coeffs_.back());
}

UniPoly operator+(const UniPoly& a, const UniPoly& b) {
  require_same(a, b);
  const uint32_t p = a.ctx().p();
  std::vector<uint32_t> c(std::max(a.coeffs().size(), b.coeffs().size()), 0);
  for (size_t i = 0; i < c.size(); ++i) {
    uint32_t x = i < a.coeffs().size() ? a.coeffs()[i] : 0;
    uint32_t y = i < b.coeffs().size() ? b.coeffs()[i] : 0;
    c[i] = (x + y) % p;
  }
  return UniPoly::from_coeffs(a.ctx(), std::move(c));
}

UniPoly operator-(const UniPoly& a, const UniPoly& b) {
  require_same(a, b);
  const uint32_t p = a.ctx().p();
  std::vector<uint32_t> c(std::max(a.coeffs().size(), b.coeffs().size()), 0);
  for (size_t i = 0; i < c.size(); ++i) {
    uint32_t x = i < a.coeffs().size() ? a.coeffs()[i] : 0;
    uint32_t y = i < b.coeffs().size() ? b.coeffs()[i] : 0;
    c[i] = (x + p - y) % p;
  }
  return UniPoly::from_coeffs(a.ctx(), std::move(c));
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  require_same(a, b);
  if (a.is_zero() || b.is_zero()) return UniPoly::zero(a.ctx());
  const uint64_t p = a.ctx().p();
  std::vector<uint64_t> acc(a.coeffs().size() + b.coeffs().size() - 1, 0);
  for (size_t i = 0; i < a.coeffs().size(); ++i) {
    if (a.coeffs()[i] == 0) continue;
    for (size_t j = 0; j < b.coeffs().size(); ++j)
      acc[i + j] = (acc[i + j] + uint64_t{a.coeffs()[i]} * b.coeffs()[j]) % p;
  }
  std::vector<uint32_t> c(acc.begin(), acc.end());
  return UniPoly::from_coeffs(a.ctx(), std::move(c));
}

UniPoly operator*(FpElem c, const UniPoly& a) {
  if (c.modulus() != a.ctx().p())
    throw FieldMismatchError("mixed field contexts");
  std::vector<uint32_t> out(a.coeffs());
  const uint64_t p = a.ctx().p();
  for (uint32_t& x : out)
    x = static_cast<uint32_t>(uint64_t{x} * c.value() % p);
  return UniPoly::from_coeffs(a.ctx(), std::move(out));
}

std::pair<UniPoly, UniPoly> divrem(const UniPoly& a, const UniPoly& b) {
  require_same(a, b);
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  if (a.degree() < b.degree()) return {UniPoly::zero(a.ctx()), a};
  const uint32_t p = a.ctx().p();
  FpElem inv_lc = inv(b.lc());
  std::vector<uint32_t> rem(a.coeffs());
  std::vector<uint32_t> quo(
      static_cast<size_t>(a.degree() - b.degree()) + 1, 0);
  for (int k = a.degree() - b.degree(); k >= 0; --k) {
    uint64_t top = rem[static_cast<size_t>(k + b.degree())];
    if (top == 0) continue;
    uint32_t q = static_cast<uint32_t>(top * inv_lc.value() % p);
    quo[static_cast<size_t>(k)] = q;
    for (int i = 0; i <= b.degree(); ++i) {
      size_t idx = static_cast<size_t>(k + i);
      uint64_t sub = uint64_t{q} * b.coeffs()[static_cast<size_t>(i)] % p;
      rem[idx] = static_cast<uint32_t>((rem[idx] + p - sub) % p);
    }
  }
  rem.resize(static_cast<size_t>(b.degree() > 0 ? b.degree() : 0));
  return {UniPoly::from_coeffs(a.ctx(), std::move(quo)),
          UniPoly::from_coeffs(a.ctx(), std::move(rem))};
}

UniPoly gcd(UniPoly a, UniPoly b) {
  require_same(a, b);
  while (!b.is_zero()) {
    UniPoly r = divrem(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.is_zero() ? a : monic(a);
}

UniPoly derivative(const UniPoly& f) {
  if (f.is_constant()) return UniPoly::zero(f.ctx());
  const uint64_t p = f.ctx().p();
  std::vector<uint32_t> c(f.coeffs().size() - 1);
  for (size_t i = 1; i < f.coeffs().size(); ++i)
    c[i - 1] = static_cast<uint32_t>(uint64_t{f.coeffs()[i]} * (i % p) % p);
  return UniPoly::from_coeffs(f.ctx(), std::move(c));
}

FpElem eval(const UniPoly& f, FpElem x) {
  FpElem r = f.ctx().zero();
  for (size_t i = f.coeffs().size(); i-- > 0;)
    r = r * x + f.ctx().elem(f.coeffs()[i]);
  return r;
}

MultiPoly eval_at(const UniPoly& f, const MultiPoly& u) {
  if (f.ctx() != u.ctx()) throw FieldMismatchError("mixed field contexts");
  MultiPoly r = MultiPoly::zero(u.ctx(), u.vars());
  for (size_t i = f.coeffs().size(); i-- > 0;) {
    r = r * u;
    r = r + MultiPoly::constant(u.ctx(), u.vars(),
                                u.ctx().elem(f.coeffs()[i]));
  }
  return r;
}

UniPoly pow(const UniPoly& f, uint64_t e) {
  UniPoly acc = UniPoly::constant(f.ctx(), f.ctx().one());
  UniPoly base = f;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return acc;
}

UniPoly monic(const UniPoly& f) {
  if (f.is_zero() || f.lc().value() == 1) return f;
  return inv(f.lc()) * f;
}

UniPoly pth_root(const UniPoly& f) {
  const uint32_t p = f.ctx().p();
  std::vector<uint32_t> c((f.coeffs().size() + p - 1) / p, 0);
  for (size_t i = 0; i < f.coeffs().size(); ++i) {
    if (f.coeffs()[i] == 0) continue;
    if (i % p != 0)
      throw std::domain_error("polynomial is not a p-th power");
    c[i / p] = f.coeffs()[i];
  }
  return UniPoly::from_coeffs(f.ctx(), std::move(c));
}

SquarefreeDecomp squarefree_decomposition(const UniPoly& f) {
  if (f.is_zero())
    throw std::domain_error("zero polynomial has no squarefree splitting");
  const uint32_t p = f.ctx().p();
  SquarefreeDecomp out{f.lc(), {}};
  UniPoly g = monic(f);
  uint64_t n = 1;  // p-power multiplier picked up by root extractions
  while (g.degree() > 0) {
    UniPoly d = derivative(g);
    if (d.is_zero()) {
      g = pth_root(g);
      n *= p;
      continue;
    }
    UniPoly w = gcd(g, d);
    UniPoly h = divrem(g, w).first;  // product of factors with mult % p != 0
    for (uint64_t i = 1; !h.is_constant(); ++i) {
      UniPoly s = gcd(w, h);
      UniPoly piece = divrem(h, s).first;  // exact multiplicity i
      if (piece.degree() > 0) out.factors.push_back({piece, i * n});
      w = divrem(w, s).first;
      h = std::move(s);
    }
    // What is left of w collects the multiplicities divisible by p.
    g = std::move(w);
  }
  std::sort(out.factors.begin(), out.factors.end(),
            [](const SquarefreeFactor& a, const SquarefreeFactor& b) {
              return a.multiplicity < b.multiplicity;
            });
  return out;
}

UniPoly radical(const UniPoly& f) {
  UniPoly r = UniPoly::constant(f.ctx(), f.ctx().one());
  for (const SquarefreeFactor& sf : squarefree_decomposition(f).factors)
    r = r * sf.factor;
  return r;
}

namespace {

// h^p reduced mod f by binary powering.
UniPoly pow_mod(UniPoly h, uint64_t e, const UniPoly& f) {
  UniPoly acc = UniPoly::constant(f.ctx(), f.ctx().one());
  while (e > 0) {
    if (e & 1) acc = divrem(acc * h, f).second;
    e >>= 1;
    if (e > 0) h = divrem(h * h, f).second;
  }
  return acc;
}

}  // namespace

std::vector<std::pair<int, int>> distinct_degree_profile(const UniPoly& f) {
  std::vector<std::pair<int, int>> out;
  UniPoly g = radical(f);
  const uint32_t p = g.ctx().p();
  UniPoly t = UniPoly::t(g.ctx());
  UniPoly h = divrem(t, g).second;  // t^(p^d) mod g as d advances
  for (int d = 1; g.degree() > 0; ++d) {
    if (2 * d > g.degree()) {
      // The survivor is a single irreducible factor.
      out.emplace_back(g.degree(), 1);
      break;
    }
    h = pow_mod(h, p, g);
    UniPoly split = gcd(g, h - divrem(t, g).second);
    if (split.degree() > 0) {
      out.emplace_back(d, split.degree() / d);
      g = divrem(g, split).first;
      h = divrem(h, g).second;
    }
  }
  return out;
}

UniPoly uni_from_multi(const MultiPoly& f, int var) {
  if (var < 0 || var >= f.vars())
    throw std::invalid_argument("variable out of range");
  std::vector<uint32_t> c(static_cast<size_t>(
      f.is_zero() ? 0 : f.degree_in(var) + 1));
  for (const Term& t : f.terms()) {
    if (key_degree(t.key) != exp_of(t.key, var))
      throw std::invalid_argument("polynomial is not univariate");
    c[exp_of(t.key, var)] = t.c;
  }
  return UniPoly::from_coeffs(f.ctx(), std::move(c));
}

MultiPoly multi_from_uni(const UniPoly& f, int n, int var) {
  std::vector<Term> terms;
  terms.reserve(f.coeffs().size());
  std::vector<uint32_t> exps(static_cast<size_t>(n), 0);
  for (size_t i = f.coeffs().size(); i-- > 0;) {
    if (f.coeffs()[i] == 0) continue;
    exps[static_cast<size_t>(var)] = static_cast<uint32_t>(i);
    terms.push_back({pack_exps(exps), f.coeffs()[i]});
  }
  return MultiPoly::from_sorted_terms(f.ctx(), n, std::move(terms));
}

std::string to_string(const UniPoly& f) {
  return to_string(multi_from_uni(f, 1, 0));
}

UniPoly parse_unipoly(const std::string& text, FieldCtx ctx) {
  return uni_from_multi(parse_poly(text, ctx, 1), 0);
}

}  // namespace jacp
