#include "jacp/families.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <stdexcept>
#include <utility>

#include "jacp/errors.hpp"

namespace jacp {

namespace {

constexpr uint32_t kExpCap = 1u << 16;

MultiPoly var1(FieldCtx ctx) { return MultiPoly::variable(ctx, 2, 0); }
MultiPoly var2(FieldCtx ctx) { return MultiPoly::variable(ctx, 2, 1); }

MultiPoly mono(FieldCtx ctx, uint32_t e1, uint32_t e2) {
  std::vector<uint32_t> exps = {e1, e2};
  return MultiPoly::monomial(ctx, 2, exps, ctx.one());
}

uint32_t checked_exp(int64_t e, const char* what) {
  if (e < 0 || e >= static_cast<int64_t>(kExpCap))
    throw std::invalid_argument(std::string(what) +
                                " exponent leaves the supported range");
  return static_cast<uint32_t>(e);
}

// Unit-Jacobian postcondition shared by every generator. Constructions are
// proven correct, so a miss here is an internal error, not bad input.
FpElem require_unit_jacobian(const MultiPoly& f1, const MultiPoly& f2) {
  std::vector<MultiPoly> fs = {f1, f2};
  MultiPoly j = jacobian_det(fs);
  if (j.is_zero() || j.total_degree() != 0)
    throw std::logic_error("generated pair lost the unit Jacobian");
  return j.leading_coeff();
}

// w(t) = h1 h2 + a t h1' h2 + b t h1 h2', the symbolic Jacobian of the
// pair (x1 h1(u), x2 h2(u)) for u = x1^a x2^b.
UniPoly jacobian_form(FieldCtx ctx, uint64_t a, uint64_t b, const UniPoly& h1,
                      const UniPoly& h2) {
  UniPoly t = UniPoly::t(ctx);
  return h1 * h2 + ctx.elem(a % ctx.p()) * (t * derivative(h1) * h2) +
         ctx.elem(b % ctx.p()) * (t * h1 * derivative(h2));
}

uint64_t addm(uint64_t x, uint64_t y, uint64_t p) { return (x + y) % p; }
uint64_t subm(uint64_t x, uint64_t y, uint64_t p) { return (x + p - y % p) % p; }
uint64_t mulm(uint64_t x, uint64_t y, uint64_t p) { return x * y % p; }

// Row-reduces M x = rhs over F_p. Returns false when inconsistent;
// otherwise yields one particular solution (free variables zero) and a
// nullspace basis vector per free column.
bool solve_mod_p(uint64_t p, std::vector<std::vector<uint32_t>> M,
                 std::vector<uint32_t> rhs, std::vector<uint32_t>& particular,
                 std::vector<std::vector<uint32_t>>& nullbasis) {
  const size_t rows = M.size();
  const size_t cols = rows == 0 ? 0 : M[0].size();
  FieldCtx ctx(static_cast<uint32_t>(p));

  std::vector<int> pivot_of_col(cols, -1);
  size_t rank = 0;
  for (size_t col = 0; col < cols && rank < rows; ++col) {
    size_t sel = rank;
    while (sel < rows && M[sel][col] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(M[sel], M[rank]);
    std::swap(rhs[sel], rhs[rank]);
    uint64_t scale = inv(ctx.elem(M[rank][col])).value();
    for (size_t c = col; c < cols; ++c)
      M[rank][c] = static_cast<uint32_t>(mulm(M[rank][c], scale, p));
    rhs[rank] = static_cast<uint32_t>(mulm(rhs[rank], scale, p));
    for (size_t r = 0; r < rows; ++r) {
      if (r == rank || M[r][col] == 0) continue;
      uint64_t f = M[r][col];
      for (size_t c = col; c < cols; ++c)
        M[r][c] = static_cast<uint32_t>(subm(M[r][c], mulm(f, M[rank][c], p), p));
      rhs[r] = static_cast<uint32_t>(subm(rhs[r], mulm(f, rhs[rank], p), p));
    }
    pivot_of_col[col] = static_cast<int>(rank);
    ++rank;
  }
  for (size_t r = rank; r < rows; ++r)
    if (rhs[r] != 0) return false;

  particular.assign(cols, 0);
  for (size_t col = 0; col < cols; ++col)
    if (pivot_of_col[col] >= 0)
      particular[col] = rhs[static_cast<size_t>(pivot_of_col[col])];

  nullbasis.clear();
  for (size_t free_col = 0; free_col < cols; ++free_col) {
    if (pivot_of_col[free_col] >= 0) continue;
    std::vector<uint32_t> v(cols, 0);
    v[free_col] = 1;
    for (size_t col = 0; col < cols; ++col) {
      if (pivot_of_col[col] < 0) continue;
      size_t r = static_cast<size_t>(pivot_of_col[col]);
      v[col] = static_cast<uint32_t>(subm(0, M[r][free_col], p));
    }
    nullbasis.push_back(std::move(v));
  }
  return true;
}

}  // namespace

std::string to_string(const FamilySpec& s) {
  std::string out = "family=" + s.family + " p=" + std::to_string(s.p);
  for (const auto& [k, v] : s.params) out += " " + k + "=" + v;
  return out;
}

std::pair<MultiPoly, MultiPoly> gen_linear_unit_pair(FieldCtx ctx, int64_t a,
                                                     int64_t m, FpElem alpha) {
  const int64_t p = static_cast<int64_t>(ctx.p());
  if (p == 2)
    throw ConstraintError("odd-prime", "the construction needs p > 2");
  if (alpha == ctx.zero())
    throw ConstraintError("alpha-zero", "alpha must be a unit");
  if (a <= 1)
    throw ConstraintError("a-min", "a must exceed 1");
  if (a % p == 0)
    throw ConstraintError("a-zero-mod-p", "a = 0 (mod p) kills the slope");
  if (a % p == 1)
    throw ConstraintError("a-one-mod-p",
                          "a = 1 (mod p) makes the slope a/(a-1) undefined");
  if (m < 1 || m * p <= a)
    throw ConstraintError("degree-positive", "mp must exceed a");

  MultiPoly u = mono(ctx, checked_exp(a - 1, "u"), checked_exp(m * p - a, "u"));
  FpElem beta = ctx.elem_signed(a) * alpha * inv(ctx.elem_signed(a - 1));
  MultiPoly one = MultiPoly::constant(ctx, 2, ctx.one());
  MultiPoly f1 = var1(ctx) * (alpha * u + one);
  MultiPoly f2 = var2(ctx) * (beta * u + one);
  require_unit_jacobian(f1, f2);
  return {f1, f2};
}

std::pair<MultiPoly, MultiPoly> gen_balanced_product_pair(FieldCtx ctx,
                                                          const UniPoly& h1,
                                                          const UniPoly& h2) {
  if (h1.degree() < 1 || h2.degree() < 1)
    throw std::invalid_argument("h1 and h2 must have positive degree");
  UniPoly w = derivative(UniPoly::t(ctx) * h1 * h2);
  if (w.is_zero() || w.degree() > 0)
    throw ConstraintError("derivative-not-constant",
                          "d/du of u*h1*h2 is " + to_string(w) +
                              ", not a nonzero constant");
  MultiPoly u = var1(ctx) * var2(ctx);
  MultiPoly f1 = var1(ctx) * eval_at(h1, u);
  MultiPoly f2 = var2(ctx) * eval_at(h2, u);
  require_unit_jacobian(f1, f2);
  return {f1, f2};
}

std::pair<MultiPoly, MultiPoly> gen_quadratic_unit_pair(FieldCtx ctx,
                                                        int64_t a, int64_t s,
                                                        FpElem alpha1) {
  const int64_t p = static_cast<int64_t>(ctx.p());
  if (p == 2)
    throw ConstraintError("odd-prime", "the construction needs p > 2");
  if (alpha1 == ctx.zero())
    throw ConstraintError("alpha-zero", "alpha1 must be a unit");
  if (a < 1)
    throw ConstraintError("a-min", "a must be a positive integer");
  if (a % p == 0)
    throw ConstraintError("a-zero-mod-p", "a = 0 (mod p) is excluded");
  if ((a + 1) % p == 0)
    throw ConstraintError("a-plus-one", "a = -1 (mod p) is excluded");
  if ((2 * a + 1) % p == 0)
    throw ConstraintError("half-condition", "a = -1/2 (mod p) is excluded");
  const int64_t b = s * p - 1 - 2 * a;
  if (s < 1 || b < 1)
    throw ConstraintError("b-positive", "sp must exceed 1 + 2a");

  FpElem beta1 = ctx.elem_signed(a + 1) * inv(ctx.elem_signed(2 * a)) * alpha1;
  // The degree-2 coefficient is forced by the vanishing of the u^2 term of
  // the Jacobian: (1 + 2a)*alpha2 = a*alpha1*beta1.
  FpElem alpha2 = ctx.elem_signed(a) * alpha1 * beta1 *
                  inv(ctx.elem_signed(2 * a + 1));

  MultiPoly u = mono(ctx, checked_exp(a, "u"), checked_exp(b, "u"));
  MultiPoly one = MultiPoly::constant(ctx, 2, ctx.one());
  MultiPoly f1 = var1(ctx) * (one + alpha1 * u + alpha2 * (u * u));
  MultiPoly f2 = var2(ctx) * (one + beta1 * u);
  require_unit_jacobian(f1, f2);
  if (f1.total_degree() != 2 * (s * p - a) - 1 ||
      f2.total_degree() != s * p - a)
    throw std::logic_error("generated pair missed the degree display");
  return {f1, f2};
}

std::vector<std::pair<UniPoly, UniPoly>> search_type_b(FieldCtx ctx,
                                                       uint32_t a, uint32_t b,
                                                       uint32_t m, uint32_t n,
                                                       uint64_t budget) {
  const uint64_t p = ctx.p();
  if (m < 1 || n < 1)
    throw std::invalid_argument("h degrees m and n must be positive");
  if (a % p == 0 || b % p == 0)
    throw ConstraintError("ab-mod-p", "a and b must be prime to p");
  if ((1 + static_cast<uint64_t>(a) * m + static_cast<uint64_t>(b) * n) % p !=
      0)
    throw ConstraintError("necessary-condition",
                          "1 + am + bn = 0 (mod p) is required for the top "
                          "coefficient to vanish");

  auto cond = [&](uint64_t i, uint64_t j) {
    return (1 + a * i + b * j) % p;
  };

  std::vector<std::pair<UniPoly, UniPoly>> out;
  uint64_t processed = 0;

  // One candidate h1 coefficient vector: alpha_0 = 1, alpha[0..m-1] holds
  // alpha_1..alpha_m.
  auto try_alpha = [&](const std::vector<uint32_t>& alpha) {
    auto alpha_at = [&](uint64_t i) -> uint64_t {
      if (i == 0) return 1;
      if (i > m) return 0;
      return alpha[i - 1];
    };
    // Equations r = 1..m+n in the unknowns beta_1..beta_n, beta_0 = 1.
    std::vector<std::vector<uint32_t>> M(m + n, std::vector<uint32_t>(n, 0));
    std::vector<uint32_t> rhs(m + n, 0);
    for (uint64_t r = 1; r <= m + n; ++r) {
      for (uint64_t j = 1; j <= n && j <= r; ++j) {
        if (r - j > m) continue;
        M[r - 1][j - 1] = static_cast<uint32_t>(
            mulm(cond(r - j, j), alpha_at(r - j), p));
      }
      if (r <= m)
        rhs[r - 1] =
            static_cast<uint32_t>(subm(0, mulm(cond(r, 0), alpha_at(r), p), p));
    }
    std::vector<uint32_t> part;
    std::vector<std::vector<uint32_t>> basis;
    if (!solve_mod_p(p, M, rhs, part, basis)) return;

    // Every solution, free directions swept by an odometer with the last
    // basis vector fastest.
    std::vector<uint32_t> weights(basis.size(), 0);
    while (true) {
      std::vector<uint32_t> beta = part;
      for (size_t k = 0; k < basis.size(); ++k)
        for (size_t c = 0; c < beta.size(); ++c)
          beta[c] = static_cast<uint32_t>(
              addm(beta[c], mulm(weights[k], basis[k][c], p), p));
      if (beta[n - 1] != 0) {
        std::vector<uint32_t> c1 = {1};
        c1.insert(c1.end(), alpha.begin(), alpha.end());
        std::vector<uint32_t> c2 = {1};
        c2.insert(c2.end(), beta.begin(), beta.end());
        UniPoly h1 = UniPoly::from_coeffs(ctx, c1);
        UniPoly h2 = UniPoly::from_coeffs(ctx, c2);
        UniPoly w = jacobian_form(ctx, a, b, h1, h2);
        if (w.is_zero() || w.degree() > 0)
          throw std::logic_error("solved coefficients fail the unit test");
        out.emplace_back(std::move(h1), std::move(h2));
      }
      size_t k = basis.size();
      while (k > 0 && weights[k - 1] + 1 == p) weights[--k] = 0;
      if (k == 0) break;
      ++weights[k - 1];
    }
  };

  // Graded-lex sweep: coefficient sum ascending, then lex ascending with
  // alpha_1 most significant; only vectors with alpha_m != 0 count.
  const uint64_t max_grade = m * (p - 1);
  std::vector<uint32_t> alpha(m, 0);
  bool done = false;
  for (uint64_t g = 0; g <= max_grade && !done; ++g) {
    auto rec = [&](auto&& self, uint32_t idx, uint64_t rem) -> void {
      if (done) return;
      if (idx == m - 1) {
        if (rem > p - 1) return;
        alpha[idx] = static_cast<uint32_t>(rem);
        if (alpha[m - 1] == 0) return;
        if (processed == budget) {
          done = true;
          return;
        }
        ++processed;
        try_alpha(alpha);
        return;
      }
      for (uint32_t v = 0; v < p && v <= rem && !done; ++v) {
        alpha[idx] = v;
        self(self, idx + 1, rem - v);
      }
    };
    rec(rec, 0, g);
  }
  return out;
}

std::pair<MultiPoly, MultiPoly> gen_type_b_pair(FieldCtx ctx, int64_t a,
                                                int64_t b,
                                                const MultiPoly& hcore,
                                                const UniPoly& h1,
                                                const UniPoly& h2) {
  HomogComponent core{hcore.is_zero() ? 0 : hcore.total_degree(), hcore};
  ElementaryMap m = ElementaryMap::type_b(ctx, a, b, core, h1, h2);
  auto imgs = apply_map(m);
  require_unit_jacobian(imgs.first, imgs.second);
  return imgs;
}

bool degree_drop_condition(const MultiPoly& u, int m, int n) {
  if (u.is_zero()) throw std::invalid_argument("u must be nonzero");
  const int64_t p = static_cast<int64_t>(u.ctx().p());
  const int64_t d = u.total_degree();
  for (const HomogComponent& comp : homogeneous_components(u))
    if (comp.degree != d)
      throw std::invalid_argument("u must be homogeneous");
  for (int64_t i = 0; i <= d; ++i) {
    std::vector<uint32_t> exps = {static_cast<uint32_t>(i),
                                  static_cast<uint32_t>(d - i)};
    if (u.coeff_of(pack_exps(exps)) == u.ctx().zero()) continue;
    int64_t scalar = ((m - n) * i + 1 + n * d) % p;
    if ((scalar % p + p) % p != 0) return false;
  }
  return true;
}

std::vector<NonexistenceHit> nonexistence_search(FieldCtx ctx, uint32_t d,
                                                 uint32_t m, uint32_t n,
                                                 uint64_t budget) {
  const uint64_t p = ctx.p();
  if (p > 5 || d < 1 || d > 6 || m < 1 || m > 2 || n < 1 || n > 2)
    throw ConstraintError("bounds",
                          "search is sized for p <= 5, d <= 6, m, n <= 2");
  if (m % p != n % p)
    throw ConstraintError("m-n-congruence", "m = n (mod p) is required");
  if (d % p == 0)
    throw ConstraintError("d-mod-p", "d must be prime to p");
  if ((1 + static_cast<uint64_t>(n) * d) % p != 0)
    throw ConstraintError("claim-condition", "1 + nd = 0 (mod p) is required");

  std::vector<NonexistenceHit> hits;
  uint64_t tested = 0;

  // u coefficient vectors (a_0..a_d), lex ascending, first nonzero pinned
  // to 1; skipped unless x1*u_x1 and x2*u_x2 are independent.
  std::vector<uint32_t> ac(d + 1, 0);
  auto next_vec = [&](std::vector<uint32_t>& v) {
    size_t i = v.size();
    while (i > 0 && v[i - 1] + 1 == p) v[--i] = 0;
    if (i == 0) return false;
    ++v[i - 1];
    return true;
  };

  while (next_vec(ac)) {
    size_t lead = 0;
    while (lead <= d && ac[lead] == 0) ++lead;
    if (ac[lead] != 1) continue;

    bool independent = false;
    for (uint32_t i = 0; i <= d && !independent; ++i) {
      for (uint32_t j = i + 1; j <= d && !independent; ++j) {
        uint64_t v1i = mulm(i % p, ac[i], p), v2i = mulm((d - i) % p, ac[i], p);
        uint64_t v1j = mulm(j % p, ac[j], p), v2j = mulm((d - j) % p, ac[j], p);
        if (subm(mulm(v1i, v2j, p), mulm(v1j, v2i, p), p) != 0)
          independent = true;
      }
    }
    if (!independent) continue;

    MultiPoly u = MultiPoly::zero(ctx, 2);
    for (uint32_t i = 0; i <= d; ++i) {
      if (ac[i] == 0) continue;
      u = u + ctx.elem(ac[i]) * mono(ctx, i, d - i);
    }
    std::vector<MultiPoly> upow = {MultiPoly::constant(ctx, 2, ctx.one())};
    for (uint32_t k = 1; k <= std::max(m, n); ++k)
      upow.push_back(upow.back() * u);

    auto poly_from = [&](const std::vector<uint32_t>& coef) {
      MultiPoly acc = upow[0];
      for (size_t k = 0; k < coef.size(); ++k) {
        if (coef[k] == 0) continue;
        acc = acc + ctx.elem(coef[k]) * upow[k + 1];
      }
      return acc;
    };

    std::vector<uint32_t> al(m, 0), be(n, 0);
    al[m - 1] = 1;
    bool more_alpha = true;
    while (more_alpha) {
      std::fill(be.begin(), be.end(), 0);
      be[n - 1] = 1;
      bool more_beta = true;
      while (more_beta) {
        if (tested == budget) return hits;
        ++tested;
        MultiPoly f1 = var1(ctx) * poly_from(al);
        MultiPoly f2 = var2(ctx) * poly_from(be);
        std::vector<MultiPoly> fs = {f1, f2};
        MultiPoly j = jacobian_det(fs);
        if (!j.is_zero() && j.total_degree() == 0) {
          std::vector<uint32_t> c1 = {1}, c2 = {1};
          c1.insert(c1.end(), al.begin(), al.end());
          c2.insert(c2.end(), be.begin(), be.end());
          hits.push_back({u, UniPoly::from_coeffs(ctx, c1),
                          UniPoly::from_coeffs(ctx, c2)});
        }
        do {
          more_beta = next_vec(be);
        } while (more_beta && be[n - 1] == 0);
      }
      do {
        more_alpha = next_vec(al);
      } while (more_alpha && al[m - 1] == 0);
    }
  }
  return hits;
}

MixedComposition compose_mixed(const MorphismChain& chain) {
  auto [f1, f2] = apply_chain(chain);
  InfinityReport r1 = points_at_infinity_mod_p(f1);
  InfinityReport r2 = points_at_infinity_mod_p(f2);
  return {std::move(f1), std::move(f2), std::move(r1), std::move(r2)};
}

namespace {

class IntParser {
 public:
  explicit IntParser(const std::string& text) : text_(text) {}

  IntPoly parse() {
    skip_ws();
    if (at_end()) fail("empty input");
    IntPoly acc;
    int64_t sign = 1;
    if (peek() == '-') {
      sign = -1;
      advance();
      skip_ws();
    }
    parse_term(acc, sign);
    skip_ws();
    while (!at_end()) {
      char op = peek();
      if (op != '+' && op != '-') fail("expected '+' or '-'");
      advance();
      skip_ws();
      parse_term(acc, op == '+' ? 1 : -1);
      skip_ws();
    }
    return acc;
  }

 private:
  void parse_term(IntPoly& acc, int64_t sign) {
    skip_ws();
    if (at_end()) fail("expected term");
    int64_t c = 1;
    bool saw_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      c = parse_int();
      saw_coeff = true;
      skip_ws();
      if (!at_end() && peek() == '*') {
        advance();
        skip_ws();
      } else {
        acc.set_add(0, 0, sign * c);
        return;
      }
    }
    if (at_end() || peek() != 'x') {
      if (saw_coeff) fail("expected variable after '*'");
      fail("expected term");
    }
    uint32_t e1 = 0, e2 = 0;
    parse_varpow(e1, e2);
    skip_ws();
    while (!at_end() && peek() == '*') {
      advance();
      skip_ws();
      parse_varpow(e1, e2);
      skip_ws();
    }
    acc.set_add(e1, e2, sign * c);
  }

  void parse_varpow(uint32_t& e1, uint32_t& e2) {
    if (at_end() || peek() != 'x') fail("expected variable");
    advance();
    if (at_end() || (peek() != '1' && peek() != '2'))
      fail("expected variable index 1 or 2");
    int idx = peek() - '0';
    advance();
    uint64_t e = 1;
    skip_ws();
    if (!at_end() && peek() == '^') {
      advance();
      skip_ws();
      if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
        fail("expected exponent");
      e = static_cast<uint64_t>(parse_int());
    }
    if (e >= kExpCap) fail("exponent reaches the 2^16 cap");
    if (idx == 1)
      e1 += static_cast<uint32_t>(e);
    else
      e2 += static_cast<uint32_t>(e);
  }

  int64_t parse_int() {
    int64_t v = 0;
    if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
      fail("expected number");
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (peek() - '0');
      if (v > (int64_t{1} << 31)) fail("coefficient exceeds the 2^31 bound");
      advance();
    }
    return v;
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  void advance() { ++pos_; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek())))
      advance();
  }

  [[noreturn]] void fail(const std::string& what) {
    int line = 1, col = 1;
    for (size_t i = 0; i < pos_ && i < text_.size(); ++i) {
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
  size_t pos_ = 0;
};

std::string monomial_name(uint32_t e1, uint32_t e2) {
  if (e1 == 0 && e2 == 0) return "1";
  std::string out;
  if (e1 > 0) {
    out += "x1";
    if (e1 > 1) out += "^" + std::to_string(e1);
  }
  if (e2 > 0) {
    if (!out.empty()) out += "*";
    out += "x2";
    if (e2 > 1) out += "^" + std::to_string(e2);
  }
  return out;
}

}  // namespace

IntPoly IntPoly::parse(const std::string& text) {
  return IntParser(text).parse();
}

void IntPoly::set(uint32_t e1, uint32_t e2, int64_t c) {
  if (std::llabs(c) > (int64_t{1} << 31))
    throw std::invalid_argument("coefficient exceeds the 2^31 bound");
  Key k = {e1, e2};
  if (c == 0)
    terms_.erase(k);
  else
    terms_[k] = c;
}

void IntPoly::set_add(uint32_t e1, uint32_t e2, int64_t c) {
  Key k = {e1, e2};
  auto it = terms_.find(k);
  int64_t v = (it == terms_.end() ? 0 : it->second) + c;
  set(e1, e2, v);
}

std::string to_string(const IntPoly& f) {
  if (f.is_zero()) return "0";
  std::vector<std::pair<IntPoly::Key, int64_t>> terms(f.terms().begin(),
                                                      f.terms().end());
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    uint32_t da = a.first[0] + a.first[1], db = b.first[0] + b.first[1];
    if (da != db) return da > db;
    return a.first > b.first;
  });
  std::string out;
  bool first = true;
  for (const auto& [k, c] : terms) {
    int64_t v = c;
    if (first) {
      if (v < 0) {
        out += "-";
        v = -v;
      }
    } else {
      out += v < 0 ? " - " : " + ";
      if (v < 0) v = -v;
    }
    first = false;
    std::string name = monomial_name(k[0], k[1]);
    if (name == "1") {
      out += std::to_string(v);
    } else {
      if (v != 1) out += std::to_string(v) + "*";
      out += name;
    }
  }
  return out;
}

std::pair<MultiPoly, MultiPoly> reduce_mod_p(const IntPolyPair& pair,
                                             uint32_t p) {
  if (p < 2) throw std::invalid_argument("p must be prime");
  for (uint32_t q = 2; q * q <= p; ++q)
    if (p % q == 0) throw std::invalid_argument("p must be prime");

  FieldCtx ctx(p);
  std::string vanished;
  auto reduce_one = [&](const IntPoly& f, const char* tag) {
    MultiPoly out = MultiPoly::zero(ctx, 2);
    for (const auto& [k, c] : f.terms()) {
      int64_t r = ((c % p) + p) % p;
      if (r == 0) {
        if (!vanished.empty()) vanished += ", ";
        vanished += std::string(tag) + ": " + monomial_name(k[0], k[1]);
        continue;
      }
      out = out + ctx.elem(static_cast<uint64_t>(r)) * mono(ctx, k[0], k[1]);
    }
    return out;
  };

  MultiPoly f1 = reduce_one(pair.f1, "f1");
  MultiPoly f2 = reduce_one(pair.f2, "f2");
  if (!vanished.empty())
    throw ConstraintError("support-shrink",
                          "reduction mod " + std::to_string(p) +
                              " kills " + vanished);

  std::vector<MultiPoly> fs = {f1, f2};
  MultiPoly j = jacobian_det(fs);
  if (j.is_zero() || j.total_degree() != 0)
    throw ConstraintError("not-jacobian",
                          "reduced Jacobian is " + to_string(j) +
                              ", not a nonzero constant");
  return {f1, f2};
}

}  // namespace jacp
