#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <stdexcept>
#include <vector>

#include "jacp/analyze.hpp"
#include "jacp/errors.hpp"
#include "jacp/gen.hpp"
#include "jacp/morph.hpp"

using namespace jacp;

namespace {

MultiPoly P(const char* text, FieldCtx ctx) { return parse_poly(text, ctx, 2); }

std::pair<MultiPoly, MultiPoly> scaled_pair_5() {
  FieldCtx F5(5);
  return {P("x1^2*x2^3 + x1", F5), P("2*x1*x2^4 + x2", F5)};
}

std::vector<MultiPoly> basic_probes(FieldCtx ctx) {
  return {P("x1", ctx), P("x2", ctx), P("x1*x2", ctx)};
}

}  // namespace

TEST_CASE("jacobian pair detection") {
  FieldCtx F5(5);
  auto unit = is_jacobian_pair(P("x1", F5), P("x2", F5));
  REQUIRE(unit.has_value());
  CHECK(*unit == F5.one());

  CHECK_FALSE(is_jacobian_pair(P("x1", F5), P("x1", F5)).has_value());
  CHECK_FALSE(is_jacobian_pair(P("x1", F5), P("x1*x2", F5)).has_value());

  auto [f1, f2] = scaled_pair_5();
  auto v = is_jacobian_pair(f1, f2);
  REQUIRE(v.has_value());
  CHECK(*v == F5.one());
}

TEST_CASE("automorphic pair decision with witness") {
  FieldCtx F5(5);

  auto simple = is_automorphic_pair(P("x1", F5), P("x2 + x1^3", F5));
  REQUIRE(simple.automorphic);
  REQUIRE(simple.witness.has_value());
  CHECK(to_string(*simple.witness) == "T2 x1^3\n");

  auto swapped = is_automorphic_pair(P("x2", F5), P("x1", F5));
  REQUIRE(swapped.automorphic);
  CHECK(to_string(*swapped.witness) == "T1 0 1 0 1 0 0\n");

  auto ident = is_automorphic_pair(P("x1", F5), P("x2", F5));
  REQUIRE(ident.automorphic);
  CHECK(to_string(*ident.witness) == "T1 1 0 0 0 1 0\n");

  CHECK_FALSE(is_automorphic_pair(P("x1", F5), P("x1*x2", F5)).automorphic);
  CHECK_FALSE(is_automorphic_pair(P("x1", F5), P("x1", F5)).automorphic);
  CHECK_FALSE(is_automorphic_pair(P("x2^3", F5), P("x2", F5)).automorphic);
  CHECK_FALSE(is_automorphic_pair(P("x1", F5), P("3", F5)).automorphic);
  CHECK_FALSE(
      is_automorphic_pair(P("x1 + x2", F5), P("x1 + x2 + 1", F5)).automorphic);

  auto [f1, f2] = scaled_pair_5();
  CHECK_FALSE(is_automorphic_pair(f1, f2).automorphic);

  CHECK_THROWS_AS(is_automorphic_pair(MultiPoly::zero(F5, 2), P("x1", F5)),
                  std::invalid_argument);

  MorphismChain c = parse_chain("T2 x1^2\nT2 axis=1 x1^3\nT1 2 1 3 1 1 0\n", F5);
  auto [g1, g2] = apply_chain(c);
  auto dec = is_automorphic_pair(g1, g2);
  REQUIRE(dec.automorphic);
  CHECK(apply_chain(*dec.witness) == std::make_pair(g1, g2));

  for (uint64_t seed = 1; seed <= 15; ++seed) {
    for (uint32_t p : {2u, 3u, 5u}) {
      FieldCtx ctx(p);
      ChainGenOptions tame;
      tame.length = 4;
      tame.kind_weights = {2, 3, 0, 0, 0};
      auto img = apply_chain(random_chain(ctx, seed, tame));
      auto d = is_automorphic_pair(img.first, img.second);
      REQUIRE(d.automorphic);
      CHECK(apply_chain(*d.witness) == img);
    }
  }

  // Two independent procedures must agree on mixed chains.
  for (uint64_t seed = 1; seed <= 15; ++seed) {
    for (uint32_t p : {2u, 3u, 5u}) {
      FieldCtx ctx(p);
      ChainGenOptions o;
      o.length = 3;
      o.kind_weights = {1, 1, 2, 2, 1};
      MorphismChain c2 = random_chain(ctx, seed, o);
      auto img = apply_chain(c2);
      CHECK(is_automorphic_pair(img.first, img.second).automorphic ==
            is_automorphism_chain(c2));
    }
  }
}

TEST_CASE("derivation slots") {
  FieldCtx F5(5);
  DerivationCtx d(P("x1", F5), P("x2", F5));
  CHECK(derivation(d, 1, P("x1^2*x2", F5)) == P("2*x1*x2", F5));
  CHECK(derivation(d, 2, P("x1^2*x2", F5)) == P("x1^2", F5));
  CHECK(derivation_power(d, 1, 2, P("x1^3", F5)) == P("x1", F5));
  CHECK_THROWS_AS(derivation(d, 3, P("x1", F5)), std::invalid_argument);

  auto [f1, f2] = scaled_pair_5();
  DerivationCtx dj(f1, f2);
  CHECK(derivation(dj, 1, f1) == P("1", F5));
  CHECK(derivation(dj, 2, f2) == P("1", F5));
  CHECK(derivation(dj, 1, f2).is_zero());
  CHECK(derivation(dj, 2, f1).is_zero());
}

TEST_CASE("differential identities characterize jacobian pairs") {
  FieldCtx F3(3);
  std::vector<MultiPoly> probes = basic_probes(F3);
  probes.push_back(P("x1^2*x2^2", F3));

  auto rep = check_derivation_identities(P("x1", F3), P("x2", F3), probes);
  CHECK(rep.all());
  REQUIRE(rep.alpha_table.has_value());
  CHECK(*rep.alpha_table == F3.one());
  REQUIRE(rep.alpha_factorization.has_value());
  CHECK(*rep.alpha_factorization == F3.one());
  REQUIRE(rep.alpha_reconstruction.has_value());
  CHECK(*rep.alpha_reconstruction == F3.elem(2));

  auto [f1, f2] = scaled_pair_5();
  FieldCtx F5(5);
  auto rep41 = check_derivation_identities(f1, f2, basic_probes(F5));
  CHECK(rep41.all());
  REQUIRE(rep41.alpha_table.has_value());
  CHECK(*rep41.alpha_table == F5.one());

  auto degen = check_derivation_identities(P("x1", F3), P("x1^2", F3),
                                           basic_probes(F3));
  CHECK_FALSE(degen.table);
  CHECK_FALSE(degen.all());

  auto nonj = check_derivation_identities(P("x1", F3), P("x1*x2", F3),
                                          basic_probes(F3));
  CHECK_FALSE(nonj.all());

  // The exhaustive table must reject every non-Jacobian pair.
  std::mt19937_64 rng(11);
  int rejected = 0;
  while (rejected < 12) {
    MultiPoly a = random_poly(F3, 2, rng, 3, 4, true);
    MultiPoly b = random_poly(F3, 2, rng, 3, 4, true);
    if (is_jacobian_pair(a, b).has_value()) continue;
    auto r = check_derivation_identities(a, b, basic_probes(F3));
    CHECK_FALSE(r.table);
    ++rejected;
  }
}

TEST_CASE("nabla jacobian identity") {
  FieldCtx F2(2);
  std::vector<MultiPoly> pair2 = {P("x1", F2), P("x2", F2)};
  CHECK(check_nabla_jacobian_identity(pair2));

  FieldCtx F3(3);
  std::vector<MultiPoly> single = {parse_poly("x1^2", F3, 1)};
  CHECK(check_nabla_jacobian_identity(single));

  for (uint32_t p : {2u, 3u, 5u}) {
    FieldCtx ctx(p);
    std::mt19937_64 rng(p);
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<MultiPoly> one = {random_poly(ctx, 1, rng, 4, 5)};
      CHECK(check_nabla_jacobian_identity(one));
      std::vector<MultiPoly> two = {random_poly(ctx, 2, rng, 4, 5),
                                    random_poly(ctx, 2, rng, 4, 5)};
      CHECK(check_nabla_jacobian_identity(two));
    }
  }
  {
    FieldCtx ctx(2);
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 8; ++trial) {
      std::vector<MultiPoly> three = {random_poly(ctx, 3, rng, 2, 4),
                                      random_poly(ctx, 3, rng, 2, 4),
                                      random_poly(ctx, 3, rng, 2, 4)};
      CHECK(check_nabla_jacobian_identity(three));
    }
  }

  std::vector<MultiPoly> four(4, MultiPoly::zero(F2, 3));
  CHECK_THROWS_AS(check_nabla_jacobian_identity(four), std::invalid_argument);
}

TEST_CASE("minimal polynomial of the primitive element") {
  FieldCtx F5(5);
  MultiPoly u = P("x1*x2^3", F5);

  MinPoly lin = primitive_min_poly(u, parse_unipoly("1", F5),
                                   parse_unipoly("1", F5));
  CHECK(lin.degree == 1);
  REQUIRE(lin.coeffs.size() == 2);
  CHECK(lin.coeffs[1] == P("1", F5));
  CHECK(lin.coeffs[0] == P("4*x1*x2^3", F5));
  CHECK(eval_min_poly(lin, u, P("x1", F5), P("x2", F5)).is_zero());

  UniPoly h1 = parse_unipoly("x1 + 1", F5);
  UniPoly h2 = parse_unipoly("2*x1 + 1", F5);
  MinPoly m = primitive_min_poly(u, h1, h2);
  CHECK(m.degree == 5);
  REQUIRE(m.coeffs.size() == 6);
  CHECK(m.coeffs[5] == P("3", F5));
  auto [f1, f2] = scaled_pair_5();
  CHECK(eval_min_poly(m, u, f1, f2).is_zero());

  CHECK_THROWS_AS(primitive_min_poly(u, h1, h1), ConstraintError);
  CHECK_THROWS_AS(
      primitive_min_poly(P("x1 + x2^2", F5), h1, h2), std::invalid_argument);
  CHECK_THROWS_AS(
      primitive_min_poly(MultiPoly::zero(F5, 2), h1, h2),
      std::invalid_argument);
}

TEST_CASE("resultant certificate bounds the extension degree") {
  FieldCtx F5(5);

  ResultantBound triv = resultant_bound(P("x1", F5), P("x2", F5));
  CHECK(triv.product == 1);
  REQUIRE(triv.certificate.has_value());
  CHECK(*triv.certificate == 1);

  ResultantBound shear = resultant_bound(P("x1", F5), P("x2 + x1^3", F5));
  CHECK(shear.product == 3);
  REQUIRE(shear.certificate.has_value());
  CHECK(*shear.certificate == 1);

  // Extension degree here is 5; the certificate bounds it from above but
  // carries an extra factor (cross-checked against an independent CAS).
  auto [f1, f2] = scaled_pair_5();
  ResultantBound fam = resultant_bound(f1, f2);
  CHECK(fam.product == 25);
  REQUIRE(fam.certificate.has_value());
  CHECK(*fam.certificate == 8);
  CHECK(*fam.certificate >= 5);
  CHECK(*fam.certificate <= 25);

  CHECK_THROWS_AS(resultant_bound(P("x1", F5), P("x1*x2", F5)),
                  ConstraintError);
}

TEST_CASE("pair report assembly") {
  FieldCtx F5(5);

  PairReport a = conjecture_report(P("x1", F5), P("x2 + x1^3", F5));
  CHECK(a.p == 5);
  CHECK(a.deg1 == 1);
  CHECK(a.deg2 == 3);
  CHECK(a.is_jacobian);
  CHECK(a.jacobian_value == P("1", F5));
  CHECK(a.automorphic);
  REQUIRE(a.witness.has_value());
  CHECK(a.pts_inf_1.count == 1);
  CHECK(a.pts_inf_2.count == 1);
  REQUIRE(a.pts_inf_mod_p_1.has_value());
  CHECK(a.pts_inf_mod_p_1->count == 1);
  REQUIRE(a.pts_inf_mod_p_2.has_value());
  CHECK(a.pts_inf_mod_p_2->count == 1);
  CHECK(a.triangle_1);
  CHECK(a.triangle_2);
  CHECK(a.degree_divisibility);
  CHECK(a.low_degree_applicable);
  REQUIRE(a.extension_degree.has_value());
  CHECK(*a.extension_degree == 1);

  auto [f1, f2] = scaled_pair_5();
  PairReport b = conjecture_report(f1, f2, 5);
  CHECK(b.is_jacobian);
  CHECK_FALSE(b.automorphic);
  CHECK(b.deg1 == 5);
  CHECK(b.deg2 == 5);
  CHECK(b.pts_inf_1.count == 2);
  CHECK(b.pts_inf_2.count == 2);
  CHECK_FALSE(b.low_degree_applicable);
  CHECK(b.degree_divisibility);
  REQUIRE(b.extension_degree.has_value());
  CHECK(*b.extension_degree == 5);

  PairReport c = conjecture_report(f1, f2);
  CHECK_FALSE(c.extension_degree.has_value());

  // automorphic => Jacobian with extension degree 1.
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    for (uint32_t p : {2u, 5u}) {
      FieldCtx ctx(p);
      ChainGenOptions tame;
      tame.length = 3;
      tame.kind_weights = {2, 3, 0, 0, 0};
      auto img = apply_chain(random_chain(ctx, seed, tame));
      PairReport r = conjecture_report(img.first, img.second);
      REQUIRE(r.automorphic);
      CHECK(r.is_jacobian);
      CHECK(*r.extension_degree == 1);
    }
  }
}

TEST_CASE("low degree images satisfy the conjecture predicates") {
  for (uint32_t p : {3u, 5u, 7u}) {
    FieldCtx ctx(p);
    for (uint64_t seed = 1; seed <= 15; ++seed) {
      ChainGenOptions o;
      o.length = 3;
      o.kind_weights = {2, 3, 3, 2, 0};
      o.degree_budget = p - 1;
      auto img = apply_chain(random_chain(ctx, seed, o));
      PairReport r = conjecture_report(img.first, img.second);
      REQUIRE(r.low_degree_applicable);
      CHECK(r.automorphic);
      CHECK(r.pts_inf_1.count == 1);
      CHECK(r.pts_inf_2.count == 1);
      CHECK(r.triangle_1);
      CHECK(r.triangle_2);
      CHECK(r.degree_divisibility);
    }
  }
}

TEST_CASE("degree product bounds the witness extension degree") {
  FieldCtx F3(3);
  for (uint64_t seed = 1; seed <= 8; ++seed) {
    ChainGenOptions o;
    o.length = 2;
    o.kind_weights = {1, 2, 2, 1, 1};
    o.degree_budget = 6;
    MorphismChain c = random_chain(F3, seed, o);
    auto [g1, g2] = apply_chain(c);
    uint64_t k = chain_degree(c);
    ResultantBound rb = resultant_bound(g1, g2);
    CHECK(k <= rb.product);
    if (rb.certificate)
      CHECK(static_cast<uint64_t>(*rb.certificate) <= rb.product);
  }
}
