#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <random>
#include <string>
#include <vector>

#include "jacp/errors.hpp"
#include "jacp/field.hpp"
#include "jacp/gen.hpp"
#include "jacp/poly.hpp"

using namespace jacp;

namespace {

MultiPoly P(FieldCtx ctx, int n, const std::string& text) {
  return parse_poly(text, ctx, n);
}

ExpKey K2(uint32_t e1, uint32_t e2) {
  std::array<uint32_t, 2> es = {e1, e2};
  return pack_exps(es);
}

// (p-1)-fold plain derivative in each variable; independent oracle for nabla.
MultiPoly nabla_oracle(const MultiPoly& f) {
  MultiPoly g = f;
  uint32_t p = g.ctx().p();
  for (int v = 0; v < g.vars(); ++v)
    for (uint32_t k = 0; k + 1 < p; ++k) g = derivative(g, v);
  return g;
}

}  // namespace

TEST_CASE("parse and serialize round-trip pinned forms") {
  FieldCtx f5(5);
  CHECK(to_string(P(f5, 2, "x1^2 + 4*x2^2")) == "x1^2 + 4*x2^2");
  CHECK(to_string(P(f5, 2, "4*x2^2+x1^2")) == "x1^2 + 4*x2^2");
  CHECK(to_string(P(f5, 2, "0")) == "0");
  CHECK(to_string(P(f5, 2, "x1 - x1")) == "0");
  CHECK(to_string(P(f5, 2, "3")) == "3");
  CHECK(to_string(P(f5, 2, "x1*x2")) == "x1*x2");
  CHECK(to_string(P(f5, 2, "1*x1^1")) == "x1");
  CHECK(to_string(P(f5, 2, "7*x1")) == "2*x1");
  CHECK(to_string(P(f5, 2, "x2 + x1^3")) == "x1^3 + x2");
  CHECK(to_string(P(f5, 3, "x3^2*x1")) == "x1*x3^2");
  // Same total degree orders by exponents of x1, then x2.
  CHECK(to_string(P(f5, 2, "x2^2 + x1*x2 + x1^2")) ==
        "x1^2 + x1*x2 + x2^2");
}

TEST_CASE("parse rejects malformed input with position info") {
  FieldCtx f5(5);
  CHECK_THROWS_AS(P(f5, 2, ""), ParseError);
  CHECK_THROWS_AS(P(f5, 2, "x1 +"), ParseError);
  CHECK_THROWS_AS(P(f5, 2, "+x1"), ParseError);
  CHECK_THROWS_AS(P(f5, 2, "x4"), ParseError);
  CHECK_THROWS_AS(P(f5, 2, "x3"), ParseError);  // n = 2 forbids x3
  CHECK_THROWS_AS(P(f5, 2, "x1^"), ParseError);
  CHECK_THROWS_AS(P(f5, 2, "x1*"), ParseError);
  CHECK_THROWS_AS(P(f5, 2, "x1 x2"), ParseError);
  CHECK_THROWS_AS(P(f5, 2, "3*4"), ParseError);
  CHECK_THROWS_AS(P(f5, 2, "x0"), ParseError);
  try {
    P(f5, 2, "x1 + @");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 6);
  }
  try {
    P(f5, 2, "x1 +\n x9");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 2);
  }
}

TEST_CASE("exponent cap is a hard error") {
  FieldCtx f5(5);
  CHECK_THROWS_AS(P(f5, 1, "x1^65536"), ParseError);
  MultiPoly x = P(f5, 1, "x1^60000");
  CHECK_THROWS_AS(x * x, std::overflow_error);
  CHECK_THROWS_AS(pow(x, 2), std::overflow_error);
  CHECK_THROWS_AS(frobenius(x), std::overflow_error);
  CHECK(to_string(P(f5, 1, "x1^65535")) == "x1^65535");
}

TEST_CASE("arithmetic pinned values") {
  FieldCtx f2(2);
  FieldCtx f5(5);
  CHECK(to_string(P(f2, 2, "x1 + x2") * P(f2, 2, "x1 + x2")) ==
        "x1^2 + x2^2");
  CHECK(to_string(P(f5, 2, "x1 + 2*x2") + P(f5, 2, "4*x1 + 3*x2")) == "0");
  CHECK(to_string(P(f5, 2, "x1*x2 + 1") - P(f5, 2, "x1*x2")) == "1");
  MultiPoly f = P(f5, 2, "x1 + x2");
  CHECK(pow(f, 0).is_constant());
  CHECK(pow(f, 0).constant_value().value() == 1);
  CHECK(to_string(pow(f, 5)) == "x1^5 + x2^5");
  CHECK(pow(f, 7) == pow(f, 5) * f * f);
  CHECK(to_string(frobenius(f)) == "x1^5 + x2^5");
}

TEST_CASE("degrees and coefficients") {
  FieldCtx f5(5);
  MultiPoly f = P(f5, 2, "x1^2*x2 + 3*x2^2 + 1");
  CHECK(f.total_degree() == 3);
  CHECK(f.degree_in(0) == 2);
  CHECK(f.degree_in(1) == 2);
  CHECK(f.term_count() == 3);
  CHECK(f.coeff_of(K2(2, 1)).value() == 1);
  CHECK(f.coeff_of(K2(0, 2)).value() == 3);
  CHECK(f.coeff_of(K2(1, 1)).is_zero());
  CHECK(f.leading_coeff().value() == 1);
  CHECK(MultiPoly::zero(f5, 2).total_degree() == -1);
}

TEST_CASE("derivative pinned values") {
  FieldCtx f3(3);
  CHECK(derivative(P(f3, 2, "x1^3*x2"), 0).is_zero());
  CHECK(to_string(derivative(P(f3, 2, "x1^3*x2"), 1)) == "x1^3");
  CHECK(to_string(derivative(P(f3, 2, "x1^2 + x1*x2"), 0)) == "2*x1 + x2");
}

TEST_CASE("nabla pinned values and oracle") {
  FieldCtx f3(3);
  CHECK(to_string(nabla(P(f3, 2, "x1^2*x2^2"))) == "1");
  CHECK(nabla(P(f3, 2, "x1^2*x2")).is_zero());
  // x1^5*x2^2 contributes (5*4)(2*1) = 40 = 1 mod 3 on x1^3.
  CHECK(to_string(nabla(P(f3, 2, "x1^2*x2^2 + x1^5*x2^2"))) == "x1^3 + 1");

  std::mt19937_64 rng(2024);
  for (uint32_t p : {2u, 3u, 5u}) {
    FieldCtx ctx(p);
    for (int n = 1; n <= 3; ++n)
      for (int rep = 0; rep < 20; ++rep) {
        MultiPoly g = random_poly(ctx, n, rng, 7, 6);
        CHECK(nabla(g) == nabla_oracle(g));
      }
  }
}

TEST_CASE("frobenius splits addition and pow uses base-p structure") {
  std::mt19937_64 rng(7);
  for (uint32_t p : {2u, 3u, 5u, 7u}) {
    FieldCtx ctx(p);
    for (int rep = 0; rep < 15; ++rep) {
      MultiPoly f = random_poly(ctx, 2, rng, 4, 4);
      MultiPoly g = random_poly(ctx, 2, rng, 4, 4);
      CHECK(frobenius(f + g) == frobenius(f) + frobenius(g));
      CHECK(pow(f, p) == frobenius(f));
      MultiPoly acc = MultiPoly::constant(ctx, 2, ctx.one());
      for (uint64_t e = 1; e <= 2 * p + 1; ++e) {
        acc = acc * f;
        CHECK(pow(f, e) == acc);
      }
    }
  }
}

TEST_CASE("ring axioms on random polynomials") {
  std::mt19937_64 rng(11);
  for (uint32_t p : {2u, 3u, 5u}) {
    FieldCtx ctx(p);
    for (int n = 1; n <= 3; ++n)
      for (int rep = 0; rep < 12; ++rep) {
        MultiPoly a = random_poly(ctx, n, rng, 5, 5);
        MultiPoly b = random_poly(ctx, n, rng, 5, 5);
        MultiPoly c = random_poly(ctx, n, rng, 5, 5);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a - b) + b == a);
      }
  }
}

TEST_CASE("Leibniz rule on random polynomials") {
  std::mt19937_64 rng(13);
  for (uint32_t p : {2u, 3u, 5u, 7u}) {
    FieldCtx ctx(p);
    for (int rep = 0; rep < 20; ++rep) {
      MultiPoly f = random_poly(ctx, 2, rng, 6, 5);
      MultiPoly g = random_poly(ctx, 2, rng, 6, 5);
      for (int v = 0; v < 2; ++v)
        CHECK(derivative(f * g, v) ==
              derivative(f, v) * g + f * derivative(g, v));
    }
  }
}

TEST_CASE("substitution pinned value and homomorphism laws") {
  FieldCtx f5(5);
  MultiPoly f = P(f5, 2, "x1*x2");
  std::vector<MultiPoly> gs = {P(f5, 2, "x1 + x2"), P(f5, 2, "x2")};
  CHECK(to_string(substitute(f, gs)) == "x1*x2 + x2^2");

  std::mt19937_64 rng(17);
  for (uint32_t p : {2u, 3u, 5u}) {
    FieldCtx ctx(p);
    for (int rep = 0; rep < 12; ++rep) {
      MultiPoly a = random_poly(ctx, 2, rng, 4, 4);
      MultiPoly b = random_poly(ctx, 2, rng, 4, 4);
      std::vector<MultiPoly> sub = {random_poly(ctx, 2, rng, 3, 3),
                                    random_poly(ctx, 2, rng, 3, 3)};
      CHECK(substitute(a + b, sub) == substitute(a, sub) + substitute(b, sub));
      CHECK(substitute(a * b, sub) == substitute(a, sub) * substitute(b, sub));
    }
  }
}

TEST_CASE("evaluation agrees with substitution by constants") {
  std::mt19937_64 rng(19);
  for (uint32_t p : {2u, 3u, 5u, 7u}) {
    FieldCtx ctx(p);
    for (int rep = 0; rep < 10; ++rep) {
      MultiPoly f = random_poly(ctx, 3, rng, 5, 6);
      std::vector<FpElem> pt = {ctx.elem(draw(rng, p)), ctx.elem(draw(rng, p)),
                                ctx.elem(draw(rng, p))};
      std::vector<MultiPoly> consts;
      for (auto& e : pt) consts.push_back(MultiPoly::constant(ctx, 3, e));
      MultiPoly s = substitute(f, consts);
      CHECK(s.is_constant());
      CHECK(s.constant_value() == eval(f, pt));
    }
  }
}

TEST_CASE("homogeneous components decompose and recompose") {
  FieldCtx f5(5);
  MultiPoly f = P(f5, 2, "x2 + x1^3");
  auto comps = homogeneous_components(f);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].degree == 1);
  CHECK(to_string(comps[0].form) == "x2");
  CHECK(comps[1].degree == 3);
  CHECK(to_string(comps[1].form) == "x1^3");
  CHECK(to_string(leading_form(f)) == "x1^3");

  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 20; ++rep) {
    MultiPoly g = random_poly(f5, 3, rng, 6, 8);
    MultiPoly sum = MultiPoly::zero(f5, 3);
    int last = -1;
    for (const auto& hc : homogeneous_components(g)) {
      CHECK(hc.degree > last);
      last = hc.degree;
      CHECK(hc.form.total_degree() == hc.degree);
      for (const auto& t : hc.form.terms())
        CHECK(key_degree(t.key) == static_cast<uint32_t>(hc.degree));
      sum = sum + hc.form;
    }
    CHECK(sum == g);
  }
}

TEST_CASE("pth-power subring membership and bar truncation") {
  FieldCtx f5(5);
  CHECK(is_in_pth_subring(P(f5, 2, "x1^5 + x2^10")));
  CHECK(is_in_pth_subring(P(f5, 2, "3")));
  CHECK(is_in_pth_subring(MultiPoly::zero(f5, 2)));
  CHECK_FALSE(is_in_pth_subring(P(f5, 2, "x1^5 + x2^3")));

  CHECK(to_string(bar(P(f5, 2, "x1^5 + x1^2*x2"))) == "x1^2*x2");
  CHECK(to_string(bar(P(f5, 2, "x1 + x2^25"))) == "x1");
  CHECK(to_string(bar(P(f5, 2, "x1^3 + x2"))) == "x1^3 + x2");
  CHECK_THROWS_AS(bar(P(f5, 2, "x1^5 + 2")), NoBarFormError);
  CHECK_THROWS_AS(bar(P(f5, 2, "4")), NoBarFormError);
  CHECK_THROWS_AS(bar(MultiPoly::zero(f5, 2)), NoBarFormError);

  // bar keeps everything up to the highest non-subring component.
  CHECK(to_string(bar(P(f5, 2, "x1^5 + x1^2*x2 + x2^5 + x1"))) ==
        "x1^2*x2 + x1");
}

TEST_CASE("newton polygon pinned hulls") {
  FieldCtx f5(5);
  using Pt = std::pair<long, long>;
  auto hull = [&](const std::string& s) { return newton_polygon(P(f5, 2, s)); };
  CHECK(hull("x2 + x1^3") == std::vector<Pt>{{0, 0}, {3, 0}, {0, 1}});
  CHECK(hull("x1*x2 + 1") == std::vector<Pt>{{0, 0}, {1, 1}});
  // Interior and collinear points are excluded from the hull.
  CHECK(hull("x1 + x1^2*x2^2 + x1^3*x2^4") ==
        std::vector<Pt>{{0, 0}, {1, 0}, {3, 4}});
  CHECK(hull("3") == std::vector<Pt>{{0, 0}});
  CHECK(hull("x1^2") == std::vector<Pt>{{0, 0}, {2, 0}});
  CHECK(hull("x1 + x2") == std::vector<Pt>{{0, 0}, {1, 0}, {0, 1}});
  CHECK(hull("x1^3 + x1*x2 + x2^2") ==
        std::vector<Pt>{{0, 0}, {3, 0}, {0, 2}});
  CHECK_THROWS_AS(newton_polygon(MultiPoly::zero(f5, 2)), std::domain_error);
}

TEST_CASE("triangle polygon classification") {
  FieldCtx f5(5);
  auto tri = [&](const std::string& s) {
    return is_triangle_polygon(P(f5, 2, s));
  };
  CHECK(tri("x2 + x1^3"));
  CHECK(tri("x1 + x2"));
  CHECK(tri("3"));
  CHECK(tri("x1^2"));
  CHECK(tri("x2^4"));
  CHECK_FALSE(tri("x1*x2 + 1"));
  CHECK_FALSE(tri("x1^3 + x1*x2^3"));
}

TEST_CASE("resultant pinned values") {
  FieldCtx f5(5);
  MultiPoly a = P(f5, 3, "x2 + 4*x1");  // x2 - x1
  MultiPoly b = P(f5, 3, "x2 + 4*x3");  // x2 - x3
  CHECK(to_string(resultant(a, b, 1)) == "x1 + 4*x3");
  CHECK(to_string(resultant(P(f5, 2, "x2^2 + x1"), P(f5, 2, "x2 + 1"), 1)) ==
        "x1 + 1");
  MultiPoly f = P(f5, 2, "x2 + x1");
  CHECK(resultant(f, f, 1).is_zero());
  // res(f, g*h) = res(f, g) * res(f, h)
  std::mt19937_64 rng(29);
  for (int rep = 0; rep < 10; ++rep) {
    MultiPoly u = random_poly(f5, 2, rng, 3, 4, true);
    MultiPoly v = random_poly(f5, 2, rng, 3, 4, true);
    MultiPoly w = random_poly(f5, 2, rng, 3, 4, true);
    if (u.degree_in(1) < 1 || v.degree_in(1) < 1 || w.degree_in(1) < 1)
      continue;
    CHECK(resultant(u, v * w, 1) == resultant(u, v, 1) * resultant(u, w, 1));
  }
}

TEST_CASE("jacobian determinant pinned values and degree bound") {
  FieldCtx f5(5);
  std::vector<MultiPoly> pair = {P(f5, 2, "x1"), P(f5, 2, "x2")};
  CHECK(to_string(jacobian_det(pair)) == "1");

  std::vector<MultiPoly> shear = {P(f5, 2, "x1"), P(f5, 2, "x2 + x1^3")};
  CHECK(to_string(jacobian_det(shear)) == "1");

  std::vector<MultiPoly> one = {P(f5, 1, "x1^2")};
  CHECK(to_string(jacobian_det(one)) == "2*x1");

  std::mt19937_64 rng(31);
  for (uint32_t p : {3u, 5u}) {
    FieldCtx ctx(p);
    for (int rep = 0; rep < 25; ++rep) {
      MultiPoly f1 = random_poly(ctx, 2, rng, 6, 5);
      MultiPoly f2 = random_poly(ctx, 2, rng, 6, 5);
      std::vector<MultiPoly> fs = {f1, f2};
      MultiPoly j = jacobian_det(fs);
      if (!j.is_zero() && f1.total_degree() > 0 && f2.total_degree() > 0)
        CHECK(j.total_degree() <= f1.total_degree() + f2.total_degree() - 2);
      // The truncation only drops components inside the pth-power subring,
      // whose partials vanish, so the Jacobian determinant is unchanged.
      if (!is_in_pth_subring(f1) && !is_in_pth_subring(f2)) {
        std::vector<MultiPoly> bars = {bar(f1), bar(f2)};
        CHECK(jacobian_det(bars) == j);
      }
    }
  }

  std::vector<MultiPoly> three = {P(f5, 3, "x1"), P(f5, 3, "x2 + x1^2"),
                                  P(f5, 3, "x3 + x1*x2")};
  CHECK(to_string(jacobian_det(three)) == "1");
}

TEST_CASE("divexact recovers factors") {
  std::mt19937_64 rng(37);
  FieldCtx f7(7);
  for (int rep = 0; rep < 25; ++rep) {
    MultiPoly a = random_poly(f7, 2, rng, 5, 5);
    MultiPoly b = random_poly(f7, 2, rng, 5, 5, true);
    CHECK(divexact(a * b, b) == a);
  }
  CHECK_THROWS_AS(divexact(P(f7, 2, "x1 + 1"), P(f7, 2, "x2")),
                  std::logic_error);
}

TEST_CASE("serialization round-trips random polynomials bit-exactly") {
  std::mt19937_64 rng(43);
  for (uint32_t p : {2u, 5u, 101u}) {
    FieldCtx ctx(p);
    for (int n = 1; n <= 3; ++n)
      for (int rep = 0; rep < 15; ++rep) {
        MultiPoly f = random_poly(ctx, n, rng, 8, 8);
        std::string s = to_string(f);
        CHECK(parse_poly(s, ctx, n) == f);
        CHECK(to_string(parse_poly(s, ctx, n)) == s);
      }
  }
}

TEST_CASE("field mismatch is rejected across contexts") {
  FieldCtx f3(3);
  FieldCtx f5(5);
  MultiPoly a = P(f3, 2, "x1");
  MultiPoly b = P(f5, 2, "x1");
  CHECK_THROWS_AS(a + b, FieldMismatchError);
  CHECK_THROWS_AS(a * b, FieldMismatchError);
}
