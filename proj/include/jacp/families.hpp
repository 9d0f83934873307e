#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "jacp/field.hpp"
#include "jacp/forms.hpp"
#include "jacp/morph.hpp"
#include "jacp/poly.hpp"
#include "jacp/unipoly.hpp"

namespace jacp {

// Identification line for a generated pair, embedded in sweep reports as
// "family=<tag> p=<p> <key>=<value> ...". Parameters keep insertion order.
struct FamilySpec {
  std::string family;
  uint32_t p = 0;
  std::vector<std::pair<std::string, std::string>> params;
};

std::string to_string(const FamilySpec& s);

// Pair x_i * h_i(u) with both h_i linear in u = x1^(a-1) * x2^(mp-a). The
// second slope is a*alpha/(a-1), the unique choice making the Jacobian 1.
// Requires p > 2, a > 1 with a != 0, 1 mod p, mp > a, alpha != 0; throws
// ConstraintError with a stable code per violated constraint.
std::pair<MultiPoly, MultiPoly> gen_linear_unit_pair(FieldCtx ctx, int64_t a,
                                                     int64_t m, FpElem alpha);

// Pair x_i * h_i(u) over the balanced monomial u = x1 * x2. Accepted when
// d/dt (t * h1 * h2) is a nonzero constant, which is exactly the Jacobian
// condition here; the rejection message carries the offending derivative.
// deg h1, deg h2 >= 1 is a precondition.
std::pair<MultiPoly, MultiPoly> gen_balanced_product_pair(FieldCtx ctx,
                                                          const UniPoly& h1,
                                                          const UniPoly& h2);

// Pair with h1 quadratic and h2 linear over u = x1^a * x2^(sp-1-2a):
//   f1 = x1 (1 + alpha1 u + alpha2 u^2), f2 = x2 (1 + beta1 u),
// where beta1 = (1+a)/(2a) alpha1 and alpha2 = (a+1)/(2a(2a+1)) alpha1^2.
// Degrees are 2(sp-a)-1 and sp-a. Requires p > 2, alpha1 != 0, a >= 1 with
// a != 0, -1, -1/2 mod p, and sp > 1 + 2a.
std::pair<MultiPoly, MultiPoly> gen_quadratic_unit_pair(FieldCtx ctx,
                                                        int64_t a, int64_t s,
                                                        FpElem alpha1);

// Exhaustive coefficient search for unit-Jacobian pairs x_i * h_i(u) over
// u = x1^a * x2^b with deg h1 = m, deg h2 = n and h1(0) = h2(0) = 1 (the
// k^*-scaling normalization). Candidate vectors (alpha_1..alpha_m) with
// alpha_m != 0 are visited in graded-lex order (coefficient sum ascending,
// then leftmost-significant lex) until `budget` of them have been
// processed; for each, the per-degree linear conditions on the beta_j are
// solved exactly over F_p and every solution with beta_n != 0 is emitted.
// Requires a*b prime to p and the top-degree condition 1 + am + bn = 0
// mod p, without which no solution exists.
std::vector<std::pair<UniPoly, UniPoly>> search_type_b(FieldCtx ctx,
                                                       uint32_t a, uint32_t b,
                                                       uint32_t m, uint32_t n,
                                                       uint64_t budget);

// Pair x_i * h_i(u) for the powered core u = x1^a * x2^b * hcore^p.
// Validation is shared with the TypeB map constructor; the result is that
// map's image pair.
std::pair<MultiPoly, MultiPoly> gen_type_b_pair(FieldCtx ctx, int64_t a,
                                                int64_t b,
                                                const MultiPoly& hcore,
                                                const UniPoly& h1,
                                                const UniPoly& h2);

// Coefficient condition forced on a homogeneous u of degree d when the
// Jacobian of (x1 h1(u), x2 h2(u)) has degree below d(m+n): every support
// exponent i of u must satisfy ((m-n) i + 1 + n d) a_i = 0. Constant
// Jacobians drop degree, so every unit-Jacobian instance satisfies this.
bool degree_drop_condition(const MultiPoly& u, int m, int n);

struct NonexistenceHit {
  MultiPoly u;
  UniPoly h1;
  UniPoly h2;
};

// Exhaustive search for unit-Jacobian pairs x_i * h_i(u) where u ranges
// over homogeneous degree-d forms with x1*u_x1 and x2*u_x2 linearly
// independent (first nonzero coefficient normalized to 1) and the h_i over
// monic-constant-term polynomials of exact degrees m and n. Admissible
// parameters require m = n and 1 + nd = 0 mod p with d prime to p; the
// degree-drop argument proves the result is empty, so any hit is a finding.
// Desk-scale bounds: p <= 5, d <= 6, m, n <= 2. The budget caps the number
// of (u, h1, h2) triples tested.
std::vector<NonexistenceHit> nonexistence_search(FieldCtx ctx, uint32_t d,
                                                 uint32_t m, uint32_t n,
                                                 uint64_t budget);

struct MixedComposition {
  MultiPoly f1;
  MultiPoly f2;
  InfinityReport inf1;
  InfinityReport inf2;
};

// Image pair of a chain together with both mod-p infinity counts.
MixedComposition compose_mixed(const MorphismChain& chain);

// Bivariate polynomial with signed integer coefficients, the input side of
// operational mod-p reduction. Coefficients are bounded by 2^31 in absolute
// value so the reduction is faithful.
class IntPoly {
 public:
  using Key = std::array<uint32_t, 2>;

  IntPoly() = default;

  // Same grammar as the field polynomials, plus signed coefficients.
  static IntPoly parse(const std::string& text);

  // c == 0 erases the monomial.
  void set(uint32_t e1, uint32_t e2, int64_t c);
  // Adds into the monomial's coefficient, erasing on cancellation.
  void set_add(uint32_t e1, uint32_t e2, int64_t c);
  const std::map<Key, int64_t>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

 private:
  std::map<Key, int64_t> terms_;
};

std::string to_string(const IntPoly& f);

struct IntPolyPair {
  IntPoly f1;
  IntPoly f2;
};

// Reduces both members mod p and accepts only when no support point
// vanishes and the reduced Jacobian is a nonzero constant. The
// support-shrink rejection names the vanishing monomials.
std::pair<MultiPoly, MultiPoly> reduce_mod_p(const IntPolyPair& pair,
                                             uint32_t p);

}  // namespace jacp
