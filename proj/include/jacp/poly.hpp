#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jacp/field.hpp"

namespace jacp {

// Sparse multivariate polynomials over F_p in up to four variables.
//
// Public surfaces (grammar, CLI) use x1..x3; the fourth slot exists so the
// analyzer can adjoin two fresh variables to a bivariate pair in one ring.
// Exponent vectors are packed 16 bits per variable into a u64 with x1 in the
// top lane, so plain integer comparison of keys is lexicographic with
// x1 > x2 > x3 > x4. Terms are kept in descending graded-lex order (compare
// total degree, then key), which is also the serialization order.
//
// Exponents must stay below 2^16 per variable; any operation that would
// produce a larger exponent throws std::overflow_error.

inline constexpr int kMaxVars = 4;
inline constexpr uint32_t kExpCap = 1u << 16;

using ExpKey = uint64_t;

inline constexpr int lane_shift(int var) { return 16 * (kMaxVars - 1 - var); }

inline uint32_t exp_of(ExpKey key, int var) {
  return static_cast<uint32_t>(key >> lane_shift(var)) & 0xFFFFu;
}

inline uint32_t key_degree(ExpKey key) {
  return exp_of(key, 0) + exp_of(key, 1) + exp_of(key, 2) + exp_of(key, 3);
}

ExpKey pack_exps(std::span<const uint32_t> exps);

struct Term {
  ExpKey key;
  uint32_t c;

  friend bool operator==(const Term&, const Term&) = default;
};

// Descending canonical order: higher total degree first, ties by packed key
// (lexicographic, x1 most significant).
inline bool term_before(const Term& a, const Term& b) {
  uint32_t da = key_degree(a.key), db = key_degree(b.key);
  if (da != db) return da > db;
  return a.key > b.key;
}

class MultiPoly {
 public:
  MultiPoly(FieldCtx ctx, int n);  // the zero polynomial

  static MultiPoly zero(FieldCtx ctx, int n) { return MultiPoly(ctx, n); }
  static MultiPoly constant(FieldCtx ctx, int n, FpElem c);
  static MultiPoly variable(FieldCtx ctx, int n, int var);
  static MultiPoly monomial(FieldCtx ctx, int n,
                            std::span<const uint32_t> exps, FpElem c);
  // Takes unnormalized (key, coeff) pairs; merges duplicates, drops zeros,
  // sorts canonically. Coefficients are reduced residues already.
  static MultiPoly from_terms(FieldCtx ctx, int n, std::vector<Term> terms);
  // Trusted fast path: terms must already be canonical (strictly descending,
  // nonzero reduced coefficients, no exponents on absent variables).
  // Validated only in debug builds.
  static MultiPoly from_sorted_terms(FieldCtx ctx, int n,
                                     std::vector<Term> terms);

  FieldCtx ctx() const { return ctx_; }
  int vars() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // Pre: is_constant(); zero gives 0.
  FpElem constant_value() const;
  // -1 for the zero polynomial.
  int total_degree() const;
  int degree_in(int var) const;
  size_t term_count() const { return terms_.size(); }
  FpElem coeff_of(ExpKey key) const;
  // Leading coefficient in canonical order. Pre: nonzero.
  FpElem leading_coeff() const;

  friend bool operator==(const MultiPoly&, const MultiPoly&) = default;

 private:
  FieldCtx ctx_;
  int n_;
  std::vector<Term> terms_;
};

MultiPoly operator+(const MultiPoly& a, const MultiPoly& b);
MultiPoly operator-(const MultiPoly& a, const MultiPoly& b);
MultiPoly operator-(const MultiPoly& a);
MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
MultiPoly operator*(FpElem c, const MultiPoly& a);

// f^e by base-p splitting: f^(qp + r) = frobenius(f^q) * f^r, so powers in
// characteristic p cost O(log_p e) generic multiplies. pow(f, 0) = 1.
MultiPoly pow(const MultiPoly& f, uint64_t e);

// f(x1..xn)^p = f applied to p-th powers of the variables; exponents scale
// by p, coefficients are fixed by Frobenius on F_p.
MultiPoly frobenius(const MultiPoly& f);

MultiPoly derivative(const MultiPoly& f, int var);

// The composite operator (d/dx1...d/dxn)^(p-1) over all n ambient variables.
// Per term, each variable contributes the falling factorial
// e(e-1)...(e-p+2) mod p and drops its exponent by p-1; cost O(#terms).
MultiPoly nabla(const MultiPoly& f);

// f(g1, ..., gn). All gs must live in one ring (common ctx and var count),
// and gs.size() must equal f.vars().
MultiPoly substitute(const MultiPoly& f, std::span<const MultiPoly> gs);

FpElem eval(const MultiPoly& f, std::span<const FpElem> point);

struct HomogComponent {
  int degree;
  MultiPoly form;
};

// Nonzero homogeneous components in ascending degree order.
std::vector<HomogComponent> homogeneous_components(const MultiPoly& f);

// Highest-degree homogeneous component. Pre: nonzero.
MultiPoly leading_form(const MultiPoly& f);

// True iff every exponent of every term is divisible by p (zero and
// constants included).
bool is_in_pth_subring(const MultiPoly& f);

// Truncation at the highest component outside k[x1^p, ..., xn^p]: drops the
// components of degree above the highest one not in the p-th subring.
// Throws NoBarFormError when the whole polynomial lies in the subring.
MultiPoly bar(const MultiPoly& f);

// Vertices of the convex hull of the support with the origin adjoined,
// counterclockwise starting at (0, 0); collinear interior points are not
// vertices. Degenerate hulls are a single point [(0,0)] or a segment.
// Pre: n = 2, f nonzero.
std::vector<std::pair<long, long>> newton_polygon(const MultiPoly& f);

// True iff the polygon is exactly {(0,0), (n,0), (0,m)} for some n, m >= 0
// (the degenerate point and axis-segment cases count as triangles).
bool is_triangle_polygon(const MultiPoly& f);

// Sylvester resultant with respect to `var`; rows of f's coefficients come
// first. Pre: both inputs have positive degree in `var`. The determinant is
// computed fraction-free (Bareiss) so entries stay in the polynomial ring.
MultiPoly resultant(const MultiPoly& f, const MultiPoly& g, int var);

// det(d f_i / d x_j) for n = fs.size() polynomials in n variables.
MultiPoly jacobian_det(std::span<const MultiPoly> fs);

// Exact division; throws std::logic_error if b does not divide a.
MultiPoly divexact(const MultiPoly& a, const MultiPoly& b);

// Text format (whitespace-insensitive):
//   poly    := term (('+' | '-') term)*
//   term    := coeff | coeff '*' factors | factors
//   factors := var ('^' uint)? ('*' var ('^' uint)?)*
//   var     := "x1" | "x2" | "x3"
//   coeff   := uint   (reduced mod p on parse)
// Serialization emits canonical order with '+' only and reduced
// coefficients, so parse(to_string(f)) == f exactly.
MultiPoly parse_poly(const std::string& text, FieldCtx ctx, int n);
std::string to_string(const MultiPoly& f);

}  // namespace jacp
