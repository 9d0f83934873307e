#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "jacp/field.hpp"
#include "jacp/poly.hpp"
#include "jacp/unipoly.hpp"

namespace jacp {

// The five elementary endomorphism kinds of the plane over F_p.
//
// Axis convention for types 2, 2* and 3: the map acts on x_axis and leaves
// the other coordinate fixed. The parameter h is written in the natural
// variables x1, x2; on application the acted variable is replaced by its
// p-th power inside h (types 2* and 3), so e.g. a Type2Star on axis 2 sends
// x2 to x2 + h(x1, x2^p). Acting on x1 is the conjugate of the same map by
// the coordinate swap, which simply renames the variables in that formula.

enum class MapKind { Type1, Type2, Type2Star, Type3, TypeB };

// Affine: x1 -> a11 x1 + a12 x2 + a13, x2 -> a21 x1 + a22 x2 + a23,
// with the linear part invertible.
struct Type1Map {
  std::array<FpElem, 6> a;  // a11 a12 a13 a21 a22 a23
};

// x_axis -> x_axis + h(other coordinate).
struct Type2Map {
  int axis;
  UniPoly h;
};

// x_axis -> x_axis + h with the acted variable p-powered inside h.
struct Type2StarMap {
  int axis;
  MultiPoly h;
};

// x_axis -> x_axis + x_axis^p * h with the acted variable p-powered inside
// h; h nonzero.
struct Type3Map {
  int axis;
  MultiPoly h;
};

// x1 -> x1 * h1(u), x2 -> x2 * h2(u) for u = x1^a * x2^b * hcore^p.
// Accepted only when the symbolic Jacobian form
//   w(t) = h1 h2 + a t h1' h2 + b t h1 h2'
// is a nonzero constant; that constant is stored as `unit` and equals the
// Jacobian determinant of the map. The check does not involve hcore:
// hcore^p has vanishing partials, so x1 u_x1 = a u and x2 u_x2 = b u.
struct TypeBMap {
  long a;
  long b;
  HomogComponent hcore;
  UniPoly h1;
  UniPoly h2;
  FpElem unit;
};

class ElementaryMap {
 public:
  // Validates the linear-part determinant.
  static ElementaryMap type1(std::array<FpElem, 6> a);
  // Convenience: entries as signed integers reduced into F_p.
  static ElementaryMap type1(FieldCtx ctx, std::array<int64_t, 6> a);
  static ElementaryMap type2(FieldCtx ctx, int axis, UniPoly h);
  static ElementaryMap type2star(FieldCtx ctx, int axis, MultiPoly h);
  // h must be nonzero.
  static ElementaryMap type3(FieldCtx ctx, int axis, MultiPoly h);
  // Validates: a, b >= 1, a*b prime to p, deg h1 >= 1, deg h2 >= 1, hcore a
  // nonzero form, and the Jacobian condition above. Throws ConstraintError
  // with a stable code on violation.
  static ElementaryMap type_b(FieldCtx ctx, long a, long b,
                              HomogComponent hcore, UniPoly h1, UniPoly h2);

  MapKind kind() const;
  FieldCtx ctx() const { return ctx_; }
  const Type1Map& as_type1() const { return std::get<Type1Map>(m_); }
  const Type2Map& as_type2() const { return std::get<Type2Map>(m_); }
  const Type2StarMap& as_type2star() const {
    return std::get<Type2StarMap>(m_);
  }
  const Type3Map& as_type3() const { return std::get<Type3Map>(m_); }
  const TypeBMap& as_type_b() const { return std::get<TypeBMap>(m_); }

  // The constant Jacobian determinant contributed by this map: the linear
  // part's determinant for Type1, the stored unit for TypeB, 1 otherwise.
  FpElem jacobian_unit() const;

 private:
  using Storage =
      std::variant<Type1Map, Type2Map, Type2StarMap, Type3Map, TypeBMap>;
  ElementaryMap(FieldCtx ctx, Storage m) : ctx_(ctx), m_(std::move(m)) {}

  FieldCtx ctx_;
  Storage m_;
};

// The image pair (phi(x1), phi(x2)) in the two-variable ring.
std::pair<MultiPoly, MultiPoly> apply_map(const ElementaryMap& m);

// Extension-degree exponent: 0 for Type1/Type2, deg of h in the acted
// variable for Type2Star, 1 + that for Type3. Throws on TypeB, whose
// degree is not a p-power.
int deg_p(const ElementaryMap& m);

// Nonempty list of maps over one field, stored in application order: the
// first element acts on (x1, x2) first under the induced-map evaluation.
// Note the order reversal against endomorphism composition: the chain
// [s, t] realizes the composite s . t (s outermost), because the induced
// maps apply in the opposite order of the endomorphisms they come from.
class MorphismChain {
 public:
  explicit MorphismChain(std::vector<ElementaryMap> maps);

  const std::vector<ElementaryMap>& maps() const { return maps_; }
  FieldCtx ctx() const { return maps_.front().ctx(); }

 private:
  std::vector<ElementaryMap> maps_;
};

// Iterated substitution: fold the current pair into each successive map's
// coordinate formulas.
std::pair<MultiPoly, MultiPoly> apply_chain(const MorphismChain& c);

// Product over the maps of the per-map field extension degree: p^deg_p for
// the p-morphism kinds; for TypeB with u of total degree d and extreme
// x1-exponents s <= t, the factor t*deg(h1) + (d-s)*deg(h2) + 1. Throws
// std::overflow_error if the product leaves uint64.
uint64_t chain_degree(const MorphismChain& c);

// True iff chain_degree == 1.
bool is_automorphism_chain(const MorphismChain& c);

// Product of the maps' constant Jacobian determinants; equals
// jacobian_det(apply_chain(c)) by the chain rule.
FpElem chain_jacobian_unit(const MorphismChain& c);

// Splits a Type2Star map m as the composite tau . rho where rho is the
// Type2 part x_a -> x_a + h(..., 0) and tau the Type3 part carrying
// h3 = (h - h(..., 0)) / x_a on the same axis; tau is absent when h3 = 0.
// The chain [tau, rho] (or [rho] alone) reproduces apply_map(m).
std::pair<std::optional<ElementaryMap>, ElementaryMap> split_type2star(
    const ElementaryMap& m);

// One map per line:
//   T1 a11 a12 a13 a21 a22 a23
//   T2 [axis=1] <poly in x1>
//   T2S axis=<1|2> <poly in x1,x2>
//   T3 axis=<1|2> <poly in x1,x2>
//   TB a=<int> b=<int> hcore=<poly> h1=<poly in x1> h2=<poly in x1>
// T2 omits the axis marker in the default axis-2 orientation.
std::string to_string(const ElementaryMap& m);
std::string to_string(const MorphismChain& c);
ElementaryMap parse_map_line(const std::string& line, FieldCtx ctx);
MorphismChain parse_chain(const std::string& text, FieldCtx ctx);

// Reproducible chain generator. Weights choose among the five kinds in the
// order T1, T2, T2S, T3, TB; a kind whose candidate would push the running
// image-degree estimate past degree_budget degrades to a Type1 map so the
// requested length is always delivered. degree_budget 0 means 3p^2.
struct ChainGenOptions {
  int length = 3;
  std::array<int, 5> kind_weights = {2, 3, 3, 2, 0};
  uint64_t degree_budget = 0;
};

MorphismChain random_chain(FieldCtx ctx, uint64_t seed,
                           const ChainGenOptions& opts);

}  // namespace jacp
