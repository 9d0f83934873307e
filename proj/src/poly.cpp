#include "jacp/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <stdexcept>
#include <unordered_map>

#include "jacp/errors.hpp"

namespace jacp {

namespace {

void require_vars(int n) {
  if (n < 1 || n > kMaxVars) {
    throw std::invalid_argument("variable count must be between 1 and 4");
  }
}

void require_compatible(const MultiPoly& a, const MultiPoly& b) {
  if (a.ctx() != b.ctx()) {
    throw FieldMismatchError("polynomials over different prime fields");
  }
  if (a.vars() != b.vars()) {
    throw std::invalid_argument("polynomials with different variable counts");
  }
}

void check_exp(uint64_t e, int var) {
  if (e >= kExpCap) {
    throw std::overflow_error("exponent on x" + std::to_string(var + 1) +
                              " reaches the 2^16 cap");
  }
}

// Adds packed keys, checking each lane against the cap.
ExpKey add_keys_checked(ExpKey a, ExpKey b) {
  for (int v = 0; v < kMaxVars; ++v) {
    check_exp(static_cast<uint64_t>(exp_of(a, v)) + exp_of(b, v), v);
  }
  return a + b;
}

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Open-addressing accumulator for term maps; coefficients accumulate as
// u64 sums and are reduced lazily, which keeps polynomial multiplication
// a tight probe-add loop.
class TermAccumulator {
 public:
  TermAccumulator(uint64_t p, size_t expected) : p_(p) {
    size_t cap = 16;
    while (cap < expected * 2) cap <<= 1;
    keys_.assign(cap, 0);
    vals_.assign(cap, 0);
    used_.assign(cap, 0);
    mask_ = cap - 1;
  }

  void add(ExpKey key, uint64_t delta) {
    size_t i = splitmix64(key) & mask_;
    for (;;) {
      if (!used_[i]) {
        used_[i] = 1;
        keys_[i] = key;
        vals_[i] = delta;
        if (++count_ * 2 > mask_) grow();
        return;
      }
      if (keys_[i] == key) {
        vals_[i] += delta;
        if (vals_[i] >= kGuard) vals_[i] %= p_;
        return;
      }
      i = (i + 1) & mask_;
    }
  }

  std::vector<Term> finalize() {
    std::vector<Term> out;
    out.reserve(count_);
    for (size_t i = 0; i <= mask_; ++i) {
      if (!used_[i]) continue;
      uint32_t c = static_cast<uint32_t>(vals_[i] % p_);
      if (c != 0) out.push_back({keys_[i], c});
    }
    std::sort(out.begin(), out.end(), term_before);
    return out;
  }

 private:
  static constexpr uint64_t kGuard = 1ull << 62;

  void grow() {
    std::vector<ExpKey> okeys = std::move(keys_);
    std::vector<uint64_t> ovals = std::move(vals_);
    std::vector<uint8_t> oused = std::move(used_);
    size_t ocap = mask_ + 1;
    size_t cap = ocap * 2;
    keys_.assign(cap, 0);
    vals_.assign(cap, 0);
    used_.assign(cap, 0);
    mask_ = cap - 1;
    count_ = 0;
    for (size_t i = 0; i < ocap; ++i) {
      if (!oused[i]) continue;
      size_t j = splitmix64(okeys[i]) & mask_;
      while (used_[j]) j = (j + 1) & mask_;
      used_[j] = 1;
      keys_[j] = okeys[i];
      vals_[j] = ovals[i];
      ++count_;
    }
  }

  std::vector<ExpKey> keys_;
  std::vector<uint64_t> vals_;
  std::vector<uint8_t> used_;
  size_t mask_ = 0;
  size_t count_ = 0;
  uint64_t p_;
};

uint32_t max_exp_in(const MultiPoly& f, int var) {
  uint32_t m = 0;
  for (const Term& t : f.terms()) m = std::max(m, exp_of(t.key, var));
  return m;
}

}  // namespace

ExpKey pack_exps(std::span<const uint32_t> exps) {
  if (exps.size() > static_cast<size_t>(kMaxVars)) {
    throw std::invalid_argument("too many exponents");
  }
  ExpKey key = 0;
  for (size_t v = 0; v < exps.size(); ++v) {
    check_exp(exps[v], static_cast<int>(v));
    key |= static_cast<ExpKey>(exps[v]) << lane_shift(static_cast<int>(v));
  }
  return key;
}

MultiPoly::MultiPoly(FieldCtx ctx, int n) : ctx_(ctx), n_(n) {
  require_vars(n);
}

MultiPoly MultiPoly::constant(FieldCtx ctx, int n, FpElem c) {
  MultiPoly f(ctx, n);
  if (c.modulus() != ctx.p()) {
    throw FieldMismatchError("constant from a different field");
  }
  if (!c.is_zero()) f.terms_.push_back({0, c.value()});
  return f;
}

MultiPoly MultiPoly::variable(FieldCtx ctx, int n, int var) {
  require_vars(n);
  if (var < 0 || var >= n) throw std::invalid_argument("variable out of range");
  MultiPoly f(ctx, n);
  f.terms_.push_back({static_cast<ExpKey>(1) << lane_shift(var), 1 % ctx.p()});
  return f;
}

MultiPoly MultiPoly::monomial(FieldCtx ctx, int n,
                              std::span<const uint32_t> exps, FpElem c) {
  require_vars(n);
  if (exps.size() != static_cast<size_t>(n)) {
    throw std::invalid_argument("exponent count differs from variable count");
  }
  MultiPoly f(ctx, n);
  if (c.modulus() != ctx.p()) {
    throw FieldMismatchError("coefficient from a different field");
  }
  if (!c.is_zero()) f.terms_.push_back({pack_exps(exps), c.value()});
  return f;
}

MultiPoly MultiPoly::from_terms(FieldCtx ctx, int n, std::vector<Term> terms) {
  MultiPoly f(ctx, n);
  TermAccumulator acc(ctx.p(), terms.size());
  for (const Term& t : terms) {
    for (int v = n; v < kMaxVars; ++v) {
      if (exp_of(t.key, v) != 0) {
        throw std::invalid_argument("exponent set on an absent variable");
      }
    }
    acc.add(t.key, t.c % ctx.p());
  }
  f.terms_ = acc.finalize();
  return f;
}

MultiPoly MultiPoly::from_sorted_terms(FieldCtx ctx, int n,
                                       std::vector<Term> terms) {
  MultiPoly f(ctx, n);
#ifndef NDEBUG
  for (size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].c == 0 || terms[i].c >= ctx.p()) std::abort();
    if (i > 0 && !term_before(terms[i - 1], terms[i])) std::abort();
    for (int v = n; v < kMaxVars; ++v) {
      if (exp_of(terms[i].key, v) != 0) std::abort();
    }
  }
#endif
  f.terms_ = std::move(terms);
  return f;
}

bool MultiPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].key == 0);
}

FpElem MultiPoly::constant_value() const {
  if (!is_constant()) throw std::logic_error("polynomial is not constant");
  return terms_.empty() ? ctx_.zero() : ctx_.elem(terms_[0].c);
}

int MultiPoly::total_degree() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(key_degree(terms_[0].key));
}

int MultiPoly::degree_in(int var) const {
  if (var < 0 || var >= n_) throw std::invalid_argument("variable out of range");
  if (terms_.empty()) return -1;
  uint32_t m = 0;
  for (const Term& t : terms_) m = std::max(m, exp_of(t.key, var));
  return static_cast<int>(m);
}

FpElem MultiPoly::coeff_of(ExpKey key) const {
  for (const Term& t : terms_) {
    if (t.key == key) return ctx_.elem(t.c);
  }
  return ctx_.zero();
}

FpElem MultiPoly::leading_coeff() const {
  if (terms_.empty()) throw std::logic_error("zero polynomial");
  return ctx_.elem(terms_[0].c);
}

MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
  require_compatible(a, b);
  const uint32_t p = a.ctx().p();
  std::vector<Term> out;
  out.reserve(a.terms().size() + b.terms().size());
  size_t i = 0, j = 0;
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  while (i < ta.size() || j < tb.size()) {
    if (j == tb.size() || (i < ta.size() && term_before(ta[i], tb[j]))) {
      out.push_back(ta[i++]);
    } else if (i == ta.size() || term_before(tb[j], ta[i])) {
      out.push_back(tb[j++]);
    } else {
      uint32_t c = ta[i].c + tb[j].c;
      if (c >= p) c -= p;
      if (c != 0) out.push_back({ta[i].key, c});
      ++i;
      ++j;
    }
  }
  return MultiPoly::from_sorted_terms(a.ctx(), a.vars(), std::move(out));
}

MultiPoly operator-(const MultiPoly& a) {
  const uint32_t p = a.ctx().p();
  std::vector<Term> terms = a.terms();
  for (Term& t : terms) t.c = p - t.c;
  return MultiPoly::from_sorted_terms(a.ctx(), a.vars(), std::move(terms));
}

MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
  return a + (-b);
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  require_compatible(a, b);
  MultiPoly r(a.ctx(), a.vars());
  if (a.is_zero() || b.is_zero()) return r;

  // When no per-variable pair of maxima can reach the cap, lane overflow is
  // impossible and the inner loop skips the checks.
  bool safe = true;
  for (int v = 0; v < a.vars(); ++v) {
    if (static_cast<uint64_t>(max_exp_in(a, v)) + max_exp_in(b, v) >= kExpCap)
      safe = false;
  }

  TermAccumulator acc(a.ctx().p(),
                      std::min(a.term_count() * b.term_count(), size_t{1} << 22));
  for (const Term& ta : a.terms()) {
    for (const Term& tb : b.terms()) {
      ExpKey key = safe ? ta.key + tb.key : add_keys_checked(ta.key, tb.key);
      acc.add(key, static_cast<uint64_t>(ta.c) * tb.c);
    }
  }
  return MultiPoly::from_sorted_terms(a.ctx(), a.vars(), acc.finalize());
}

MultiPoly operator*(FpElem c, const MultiPoly& a) {
  if (c.modulus() != a.ctx().p()) {
    throw FieldMismatchError("scalar from a different field");
  }
  if (c.is_zero()) return MultiPoly::zero(a.ctx(), a.vars());
  std::vector<Term> terms = a.terms();
  const uint64_t cv = c.value();
  const uint32_t p = a.ctx().p();
  for (Term& t : terms) t.c = static_cast<uint32_t>(cv * t.c % p);
  return MultiPoly::from_sorted_terms(a.ctx(), a.vars(), std::move(terms));
}

MultiPoly frobenius(const MultiPoly& f) {
  const uint32_t p = f.ctx().p();
  std::vector<Term> terms;
  terms.reserve(f.term_count());
  for (const Term& t : f.terms()) {
    ExpKey key = 0;
    for (int v = 0; v < f.vars(); ++v) {
      uint64_t e = static_cast<uint64_t>(exp_of(t.key, v)) * p;
      check_exp(e, v);
      key |= static_cast<ExpKey>(e) << lane_shift(v);
    }
    terms.push_back({key, t.c});
  }
  std::sort(terms.begin(), terms.end(), term_before);
  return MultiPoly::from_sorted_terms(f.ctx(), f.vars(), std::move(terms));
}

MultiPoly pow(const MultiPoly& f, uint64_t e) {
  FieldCtx ctx = f.ctx();
  if (e == 0) return MultiPoly::constant(ctx, f.vars(), ctx.one());
  const uint32_t p = ctx.p();
  uint64_t q = e / p, r = e % p;
  // Small power by square-and-multiply.
  MultiPoly acc = MultiPoly::constant(ctx, f.vars(), ctx.one());
  if (r > 0) {
    MultiPoly base = f;
    uint64_t k = r;
    for (;;) {
      if (k & 1) acc = acc * base;
      k >>= 1;
      if (k == 0) break;
      base = base * base;
    }
  }
  if (q > 0) acc = acc * frobenius(pow(f, q));
  return acc;
}

MultiPoly derivative(const MultiPoly& f, int var) {
  if (var < 0 || var >= f.vars()) {
    throw std::invalid_argument("variable out of range");
  }
  const uint32_t p = f.ctx().p();
  std::vector<Term> out;
  out.reserve(f.term_count());
  for (const Term& t : f.terms()) {
    uint32_t e = exp_of(t.key, var);
    if (e == 0) continue;
    uint32_t c = static_cast<uint32_t>(static_cast<uint64_t>(t.c) * (e % p) % p);
    if (c == 0) continue;
    out.push_back({t.key - (static_cast<ExpKey>(1) << lane_shift(var)), c});
  }
  std::sort(out.begin(), out.end(), term_before);
  return MultiPoly::from_sorted_terms(f.ctx(), f.vars(), std::move(out));
}

MultiPoly nabla(const MultiPoly& f) {
  const uint32_t p = f.ctx().p();
  std::vector<Term> out;
  for (const Term& t : f.terms()) {
    uint64_t c = t.c;
    ExpKey key = t.key;
    for (int v = 0; v < f.vars() && c != 0; ++v) {
      uint32_t e = exp_of(t.key, v);
      if (e < p - 1) {
        c = 0;
        break;
      }
      // Falling factorial e(e-1)...(e-p+2) mod p; zero unless e = p-1 mod p.
      for (uint32_t s = 0; s + 1 < p && c != 0; ++s) {
        c = c * ((e - s) % p) % p;
      }
      key -= static_cast<ExpKey>(p - 1) << lane_shift(v);
    }
    if (c != 0) out.push_back({key, static_cast<uint32_t>(c)});
  }
  std::sort(out.begin(), out.end(), term_before);
  return MultiPoly::from_sorted_terms(f.ctx(), f.vars(), std::move(out));
}

MultiPoly substitute(const MultiPoly& f, std::span<const MultiPoly> gs) {
  if (gs.size() != static_cast<size_t>(f.vars())) {
    throw std::invalid_argument("substitution needs one polynomial per variable");
  }
  for (const MultiPoly& g : gs) {
    if (g.ctx() != f.ctx()) {
      throw FieldMismatchError("substitution values over a different field");
    }
    if (g.vars() != gs[0].vars()) {
      throw std::invalid_argument("substitution values in different rings");
    }
  }
  FieldCtx ctx = f.ctx();
  const int n_out = gs.empty() ? f.vars() : gs[0].vars();
  MultiPoly result(ctx, n_out);
  // Per-variable power cache; exponents repeat heavily across terms.
  std::vector<std::unordered_map<uint32_t, MultiPoly>> powers(gs.size());
  auto power = [&](size_t v, uint32_t e) -> const MultiPoly& {
    auto it = powers[v].find(e);
    if (it == powers[v].end()) {
      it = powers[v].emplace(e, pow(gs[v], e)).first;
    }
    return it->second;
  };
  for (const Term& t : f.terms()) {
    MultiPoly prod = MultiPoly::constant(ctx, n_out, ctx.elem(t.c));
    for (size_t v = 0; v < gs.size(); ++v) {
      uint32_t e = exp_of(t.key, static_cast<int>(v));
      if (e != 0) prod = prod * power(v, e);
    }
    result = result + prod;
  }
  return result;
}

FpElem eval(const MultiPoly& f, std::span<const FpElem> point) {
  if (point.size() != static_cast<size_t>(f.vars())) {
    throw std::invalid_argument("evaluation needs one value per variable");
  }
  FieldCtx ctx = f.ctx();
  FpElem acc = ctx.zero();
  for (const Term& t : f.terms()) {
    FpElem v = ctx.elem(t.c);
    for (size_t i = 0; i < point.size(); ++i) {
      if (point[i].modulus() != ctx.p()) {
        throw FieldMismatchError("evaluation point over a different field");
      }
      v = v * pow(point[i], exp_of(t.key, static_cast<int>(i)));
    }
    acc = acc + v;
  }
  return acc;
}

std::vector<HomogComponent> homogeneous_components(const MultiPoly& f) {
  std::vector<HomogComponent> out;
  // Terms are sorted by descending degree, so components are suffix slices.
  const auto& terms = f.terms();
  size_t i = 0;
  while (i < terms.size()) {
    uint32_t d = key_degree(terms[i].key);
    std::vector<Term> ct;
    while (i < terms.size() && key_degree(terms[i].key) == d) {
      ct.push_back(terms[i++]);
    }
    out.push_back({static_cast<int>(d),
                   MultiPoly::from_sorted_terms(f.ctx(), f.vars(), std::move(ct))});
  }
  std::reverse(out.begin(), out.end());
  return out;
}

MultiPoly leading_form(const MultiPoly& f) {
  if (f.is_zero()) throw std::domain_error("zero polynomial has no leading form");
  const auto& terms = f.terms();
  uint32_t d = key_degree(terms[0].key);
  std::vector<Term> ct;
  for (const Term& t : terms) {
    if (key_degree(t.key) != d) break;
    ct.push_back(t);
  }
  return MultiPoly::from_sorted_terms(f.ctx(), f.vars(), std::move(ct));
}

bool is_in_pth_subring(const MultiPoly& f) {
  const uint32_t p = f.ctx().p();
  for (const Term& t : f.terms()) {
    for (int v = 0; v < f.vars(); ++v) {
      if (exp_of(t.key, v) % p != 0) return false;
    }
  }
  return true;
}

MultiPoly bar(const MultiPoly& f) {
  std::vector<HomogComponent> comps = homogeneous_components(f);
  int cut = -1;
  for (int i = static_cast<int>(comps.size()) - 1; i >= 0; --i) {
    if (!is_in_pth_subring(comps[i].form)) {
      cut = i;
      break;
    }
  }
  if (cut < 0) {
    throw NoBarFormError("polynomial lies in k[x1^p, ..., xn^p]");
  }
  MultiPoly r(f.ctx(), f.vars());
  for (int i = 0; i <= cut; ++i) r = r + comps[i].form;
  return r;
}

namespace {

using Pt = std::pair<long, long>;

long cross(const Pt& o, const Pt& a, const Pt& b) {
  return (a.first - o.first) * (b.second - o.second) -
         (a.second - o.second) * (b.first - o.first);
}

}  // namespace

std::vector<Pt> newton_polygon(const MultiPoly& f) {
  if (f.vars() != 2) throw std::invalid_argument("newton polygon needs n = 2");
  if (f.is_zero()) throw std::domain_error("zero polynomial has no polygon");
  std::vector<Pt> pts;
  pts.reserve(f.term_count() + 1);
  pts.emplace_back(0, 0);
  for (const Term& t : f.terms()) {
    pts.emplace_back(exp_of(t.key, 0), exp_of(t.key, 1));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() == 1) return pts;

  // Monotone chain with strict turns, so collinear points are not vertices.
  std::vector<Pt> hull(2 * pts.size());
  size_t k = 0;
  for (const Pt& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  size_t lower = k + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);  // last point repeats the first
  // (0,0) is the lexicographic minimum, hence the first lower-hull vertex.
  return hull;
}

bool is_triangle_polygon(const MultiPoly& f) {
  std::vector<Pt> hull = newton_polygon(f);
  switch (hull.size()) {
    case 1:
      return hull[0] == Pt{0, 0};
    case 2:
      return hull[1].second == 0 || hull[1].first == 0;
    case 3:
      return hull[1].second == 0 && hull[2].first == 0;
    default:
      return false;
  }
}

namespace {

MultiPoly monomial_shift(const MultiPoly& f, ExpKey key, FpElem c) {
  std::vector<Term> terms;
  terms.reserve(f.term_count());
  const uint32_t p = f.ctx().p();
  for (const Term& t : f.terms()) {
    uint32_t cc = static_cast<uint32_t>(
        static_cast<uint64_t>(t.c) * c.value() % p);
    if (cc != 0) terms.push_back({add_keys_checked(t.key, key), cc});
  }
  return MultiPoly::from_sorted_terms(f.ctx(), f.vars(), std::move(terms));
}

bool key_divides(ExpKey a, ExpKey b) {
  for (int v = 0; v < kMaxVars; ++v) {
    if (exp_of(a, v) > exp_of(b, v)) return false;
  }
  return true;
}

}  // namespace

MultiPoly divexact(const MultiPoly& a, const MultiPoly& b) {
  require_compatible(a, b);
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  if (a.is_zero()) return a;
  if (b.is_constant()) return inv(b.constant_value()) * a;

  MultiPoly r = a;
  const Term& lb = b.terms()[0];
  FpElem lb_inv = inv(b.ctx().elem(lb.c));
  std::vector<Term> quot;
  while (!r.is_zero()) {
    const Term& lr = r.terms()[0];
    if (!key_divides(lb.key, lr.key)) {
      throw std::logic_error("inexact polynomial division");
    }
    ExpKey qk = lr.key - lb.key;
    FpElem qc = r.ctx().elem(lr.c) * lb_inv;
    quot.push_back({qk, qc.value()});
    r = r - monomial_shift(b, qk, qc);
  }
  // Leading terms strictly decrease, so quot is already sorted.
  return MultiPoly::from_sorted_terms(a.ctx(), a.vars(), std::move(quot));
}

namespace {

// Coefficient of var^k, as a polynomial with the var lane cleared.
MultiPoly coeff_in_var(const MultiPoly& f, int var, uint32_t k) {
  std::vector<Term> terms;
  for (const Term& t : f.terms()) {
    if (exp_of(t.key, var) == k) {
      terms.push_back({t.key - (static_cast<ExpKey>(k) << lane_shift(var)), t.c});
    }
  }
  std::sort(terms.begin(), terms.end(), term_before);
  return MultiPoly::from_sorted_terms(f.ctx(), f.vars(), std::move(terms));
}

// Fraction-free determinant (Bareiss); exact divisions stay in the ring.
MultiPoly bareiss_det(std::vector<std::vector<MultiPoly>> m, FieldCtx ctx,
                      int n_vars) {
  const size_t d = m.size();
  MultiPoly one = MultiPoly::constant(ctx, n_vars, ctx.one());
  MultiPoly zero = MultiPoly::zero(ctx, n_vars);
  MultiPoly prev = one;
  bool negate = false;
  for (size_t k = 0; k + 1 < d; ++k) {
    if (m[k][k].is_zero()) {
      size_t r = k + 1;
      while (r < d && m[r][k].is_zero()) ++r;
      if (r == d) return zero;
      std::swap(m[k], m[r]);
      negate = !negate;
    }
    for (size_t i = k + 1; i < d; ++i) {
      for (size_t j = k + 1; j < d; ++j) {
        m[i][j] = divexact(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev);
      }
      m[i][k] = zero;
    }
    prev = m[k][k];
  }
  MultiPoly det = m[d - 1][d - 1];
  return negate ? -det : det;
}

}  // namespace

MultiPoly resultant(const MultiPoly& f, const MultiPoly& g, int var) {
  require_compatible(f, g);
  if (var < 0 || var >= f.vars()) {
    throw std::invalid_argument("variable out of range");
  }
  int df = f.is_zero() ? -1 : f.degree_in(var);
  int dg = g.is_zero() ? -1 : g.degree_in(var);
  if (df < 1 || dg < 1) {
    throw std::invalid_argument("resultant needs positive degree in the variable");
  }
  std::vector<MultiPoly> fc, gc;  // descending coefficients
  for (int k = df; k >= 0; --k) fc.push_back(coeff_in_var(f, var, k));
  for (int k = dg; k >= 0; --k) gc.push_back(coeff_in_var(g, var, k));

  const size_t d = static_cast<size_t>(df + dg);
  MultiPoly zero = MultiPoly::zero(f.ctx(), f.vars());
  std::vector<std::vector<MultiPoly>> m(d, std::vector<MultiPoly>(d, zero));
  for (int r = 0; r < dg; ++r) {
    for (int t = 0; t <= df; ++t) m[r][r + t] = fc[t];
  }
  for (int r = 0; r < df; ++r) {
    for (int t = 0; t <= dg; ++t) m[dg + r][r + t] = gc[t];
  }
  return bareiss_det(std::move(m), f.ctx(), f.vars());
}

MultiPoly jacobian_det(std::span<const MultiPoly> fs) {
  if (fs.empty() || fs.size() > 3) {
    throw std::invalid_argument("jacobian determinant needs 1 to 3 polynomials");
  }
  const int n = static_cast<int>(fs.size());
  for (const MultiPoly& f : fs) {
    if (f.vars() != n) {
      throw std::invalid_argument("tuple size must match variable count");
    }
    if (f.ctx() != fs[0].ctx()) {
      throw FieldMismatchError("tuple over different fields");
    }
  }
  if (n == 1) return derivative(fs[0], 0);
  if (n == 2) {
    return derivative(fs[0], 0) * derivative(fs[1], 1) -
           derivative(fs[0], 1) * derivative(fs[1], 0);
  }
  std::vector<std::vector<MultiPoly>> d;
  d.reserve(3);
  for (int i = 0; i < 3; ++i) {
    d.push_back({derivative(fs[i], 0), derivative(fs[i], 1),
                 derivative(fs[i], 2)});
  }
  return d[0][0] * (d[1][1] * d[2][2] - d[1][2] * d[2][1]) -
         d[0][1] * (d[1][0] * d[2][2] - d[1][2] * d[2][0]) +
         d[0][2] * (d[1][0] * d[2][1] - d[1][1] * d[2][0]);
}

namespace {

class Parser {
 public:
  Parser(const std::string& text, FieldCtx ctx, int n)
      : text_(text), ctx_(ctx), n_(n) {}

  MultiPoly parse() {
    skip_ws();
    if (at_end()) fail("empty input");
    MultiPoly acc = parse_term();
    skip_ws();
    while (!at_end()) {
      char op = peek();
      if (op != '+' && op != '-') fail("expected '+' or '-'");
      advance();
      skip_ws();
      MultiPoly t = parse_term();
      acc = (op == '+') ? acc + t : acc - t;
      skip_ws();
    }
    return acc;
  }

 private:
  MultiPoly parse_term() {
    skip_ws();
    if (at_end()) fail("expected term");
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      FpElem c = ctx_.elem(parse_uint("coefficient"));
      skip_ws();
      if (!at_end() && peek() == '*') {
        advance();
        skip_ws();
        return MultiPoly::constant(ctx_, n_, c) * parse_factors();
      }
      return MultiPoly::constant(ctx_, n_, c);
    }
    if (peek() == 'x') return parse_factors();
    fail("expected term");
  }

  MultiPoly parse_factors() {
    MultiPoly acc = parse_varpow();
    skip_ws();
    while (!at_end() && peek() == '*') {
      advance();
      skip_ws();
      if (at_end() || peek() != 'x') fail("expected variable after '*'");
      acc = acc * parse_varpow();
      skip_ws();
    }
    return acc;
  }

  MultiPoly parse_varpow() {
    if (at_end() || peek() != 'x') fail("expected variable");
    size_t var_pos = pos_;
    advance();
    if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) {
      fail("expected variable index");
    }
    int idx = peek() - '0';
    advance();
    if (idx < 1 || idx > 3) fail_at(var_pos, "unknown variable");
    if (idx > n_) {
      fail_at(var_pos, "variable x" + std::to_string(idx) +
                           " not allowed with " + std::to_string(n_) +
                           " variable(s)");
    }
    uint64_t e = 1;
    skip_ws();
    if (!at_end() && peek() == '^') {
      advance();
      skip_ws();
      if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) {
        fail("expected exponent");
      }
      e = parse_uint("exponent");
    }
    if (e >= kExpCap) fail_at(var_pos, "exponent reaches the 2^16 cap");
    std::vector<uint32_t> exps(static_cast<size_t>(n_), 0);
    exps[static_cast<size_t>(idx - 1)] = static_cast<uint32_t>(e);
    return MultiPoly::monomial(ctx_, n_, exps, ctx_.one());
  }

  uint64_t parse_uint(const char* what) {
    size_t start = pos_;
    uint64_t v = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      uint64_t d = static_cast<uint64_t>(peek() - '0');
      if (v > (UINT64_MAX - d) / 10) fail_at(start, std::string(what) + " too large");
      v = v * 10 + d;
      advance();
    }
    return v;
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  void advance() { ++pos_; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) {
      advance();
    }
  }

  [[noreturn]] void fail(const std::string& what) { fail_at(pos_, what); }

  [[noreturn]] void fail_at(size_t pos, const std::string& what) {
    // Recompute line/column for the reported position.
    int line = 1, col = 1;
    for (size_t i = 0; i < pos && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(what, line, col);
  }

  const std::string& text_;
  FieldCtx ctx_;
  int n_;
  size_t pos_ = 0;
};

}  // namespace

MultiPoly parse_poly(const std::string& text, FieldCtx ctx, int n) {
  require_vars(n);
  if (n > 3) throw std::invalid_argument("the text grammar covers x1..x3 only");
  return Parser(text, ctx, n).parse();
}

std::string to_string(const MultiPoly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const Term& t : f.terms()) {
    if (!first) out += " + ";
    first = false;
    bool has_vars = t.key != 0;
    if (!has_vars) {
      out += std::to_string(t.c);
      continue;
    }
    bool wrote = false;
    if (t.c != 1) {
      out += std::to_string(t.c);
      wrote = true;
    }
    for (int v = 0; v < f.vars(); ++v) {
      uint32_t e = exp_of(t.key, v);
      if (e == 0) continue;
      if (wrote) out += '*';
      out += 'x';
      out += std::to_string(v + 1);
      if (e > 1) {
        out += '^';
        out += std::to_string(e);
      }
      wrote = true;
    }
  }
  return out;
}

}  // namespace jacp
