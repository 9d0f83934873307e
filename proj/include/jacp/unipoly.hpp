#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "jacp/field.hpp"
#include "jacp/poly.hpp"

namespace jacp {

// Dense univariate polynomial over F_p: coefficient residues in ascending
// degree order with no trailing zeros. Used for one-variable factor
// structure (gcds, squarefree splitting, degree profiles) where the sparse
// multivariate representation would be a poor fit.
class UniPoly {
 public:
  explicit UniPoly(FieldCtx ctx) : ctx_(ctx) {}

  static UniPoly zero(FieldCtx ctx) { return UniPoly(ctx); }
  static UniPoly constant(FieldCtx ctx, FpElem c);
  // The variable t itself.
  static UniPoly t(FieldCtx ctx);
  // Ascending coefficients, arbitrary residues; normalizes.
  static UniPoly from_coeffs(FieldCtx ctx, std::vector<uint32_t> coeffs);

  FieldCtx ctx() const { return ctx_; }
  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  // Zero beyond the degree.
  FpElem coeff(int k) const;
  // Pre: nonzero.
  FpElem lc() const;
  const std::vector<uint32_t>& coeffs() const { return coeffs_; }

  friend bool operator==(const UniPoly&, const UniPoly&) = default;

 private:
  FieldCtx ctx_;
  std::vector<uint32_t> coeffs_;
};

UniPoly operator+(const UniPoly& a, const UniPoly& b);
UniPoly operator-(const UniPoly& a, const UniPoly& b);
UniPoly operator*(const UniPoly& a, const UniPoly& b);
UniPoly operator*(FpElem c, const UniPoly& a);

// Quotient and remainder; throws std::domain_error on zero divisor.
std::pair<UniPoly, UniPoly> divrem(const UniPoly& a, const UniPoly& b);

// Monic gcd; gcd(0, 0) = 0.
UniPoly gcd(UniPoly a, UniPoly b);

UniPoly derivative(const UniPoly& f);
FpElem eval(const UniPoly& f, FpElem x);
// f(u) by Horner in the multivariate ring.
MultiPoly eval_at(const UniPoly& f, const MultiPoly& u);
UniPoly pow(const UniPoly& f, uint64_t e);
UniPoly monic(const UniPoly& f);

// Inverse of the p-th power map. Pre: f lies in k[t^p]; coefficients are
// fixed because Frobenius is the identity on F_p.
UniPoly pth_root(const UniPoly& f);

struct SquarefreeFactor {
  UniPoly factor;  // monic, squarefree
  uint64_t multiplicity;
};

// unit * prod factor^multiplicity reconstructs the input exactly; the
// factors are pairwise coprime with strictly increasing multiplicities.
struct SquarefreeDecomp {
  FpElem unit;
  std::vector<SquarefreeFactor> factors;
};

// Squarefree splitting valid in characteristic p: when the derivative
// vanishes the polynomial is a p-th power and the splitting recurses on its
// p-th root with multiplicities scaled by p. Pre: nonzero.
SquarefreeDecomp squarefree_decomposition(const UniPoly& f);

// Product of the distinct monic irreducible factors. Pre: nonzero.
UniPoly radical(const UniPoly& f);

// (degree d, number of distinct monic irreducible factors of degree d) in
// ascending d, computed on the radical. Pre: nonzero.
std::vector<std::pair<int, int>> distinct_degree_profile(const UniPoly& f);

// Pre: f involves no variable except `var`.
UniPoly uni_from_multi(const MultiPoly& f, int var);
MultiPoly multi_from_uni(const UniPoly& f, int n, int var);

// Text form reuses the one-variable grammar with t written as x1.
std::string to_string(const UniPoly& f);
UniPoly parse_unipoly(const std::string& text, FieldCtx ctx);

}  // namespace jacp
