// Acceptance gate: one line per criterion, exit nonzero if any fails.
// Everything is exact and seeded; re-runs print the same lines.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "jacp/analyze.hpp"
#include "jacp/errors.hpp"
#include "jacp/families.hpp"
#include "jacp/forms.hpp"
#include "jacp/gen.hpp"
#include "jacp/morph.hpp"

using namespace jacp;

namespace {

// Empty on pass, first offense on fail.
using Result = std::optional<std::string>;

std::string at(uint32_t p, uint64_t seed) {
  return "p=" + std::to_string(p) + " seed=" + std::to_string(seed);
}

// One corpus drives criteria 2 through 5: 200 seeded chains per prime with
// a uniform image-degree budget of 12, inside the 3p^2 cap for every p.
struct ChainCase {
  uint32_t p;
  uint64_t seed;
  MorphismChain chain;
  MultiPoly f1, f2;
  PairReport rep;
};

std::vector<ChainCase> build_corpus() {
  std::vector<ChainCase> out;
  out.reserve(800);
  for (uint32_t p : {2u, 3u, 5u, 7u}) {
    FieldCtx ctx(p);
    ChainGenOptions opts;
    opts.degree_budget = 12;
    for (uint64_t seed = 0; seed < 200; ++seed) {
      MorphismChain chain = random_chain(ctx, seed, opts);
      auto [f1, f2] = apply_chain(chain);
      PairReport rep = conjecture_report(f1, f2, chain_degree(chain));
      out.push_back({p, seed, std::move(chain), std::move(f1), std::move(f2),
                     std::move(rep)});
    }
  }
  return out;
}

Result c01_differential_sum() {
  const std::pair<int, uint32_t> grid[] = {{1, 2}, {1, 3}, {1, 5}, {2, 2},
                                           {2, 3}, {2, 5}, {3, 2}};
  for (auto [n, p] : grid) {
    FieldCtx ctx(p);
    std::mt19937_64 rng(1000ull * n + p);
    const int tuples = n == 3 ? 25 : 100;
    for (int t = 0; t < tuples; ++t) {
      std::vector<MultiPoly> fs;
      for (int k = 0; k < n; ++k)
        fs.push_back(random_poly(ctx, n, rng, 6, 8, true));
      if (!check_nabla_jacobian_identity(fs))
        return "n=" + std::to_string(n) + " p=" + std::to_string(p) +
               " tuple " + std::to_string(t);
    }
  }
  // Random tuples are almost never Jacobian; pin one that is.
  FieldCtx ctx(5);
  auto [f1, f2] = gen_linear_unit_pair(ctx, 2, 1, ctx.one());
  std::vector<MultiPoly> fs = {f1, f2};
  if (!check_nabla_jacobian_identity(fs))
    return std::string("generated Jacobian pair at p=5");
  return std::nullopt;
}

Result c02_derivation_identities(const std::vector<ChainCase>& corpus) {
  for (size_t i = 0; i < corpus.size(); ++i) {
    const ChainCase& cc = corpus[i];
    FieldCtx ctx(cc.p);
    std::mt19937_64 rng(7000 + i);
    std::vector<MultiPoly> probes = {MultiPoly::variable(ctx, 2, 0),
                                     MultiPoly::variable(ctx, 2, 1),
                                     random_poly(ctx, 2, rng, 3, 4, true)};
    DerivationIdentityReport rep =
        check_derivation_identities(cc.f1, cc.f2, probes);
    if (!rep.all()) return "chain image " + at(cc.p, cc.seed);
  }
  // 50 seeded non-Jacobian pairs must each fail at least one identity.
  FieldCtx ctx(3);
  std::mt19937_64 rng(99);
  int found = 0;
  for (uint64_t draws = 0; found < 50; ++draws) {
    if (draws > 100000)
      return std::string("could not draw 50 non-Jacobian pairs");
    MultiPoly f1 = random_poly(ctx, 2, rng, 4, 6, true);
    MultiPoly f2 = random_poly(ctx, 2, rng, 4, 6, true);
    if (is_jacobian_pair(f1, f2)) continue;
    ++found;
    std::vector<MultiPoly> probes = {MultiPoly::variable(ctx, 2, 0),
                                     MultiPoly::variable(ctx, 2, 1),
                                     random_poly(ctx, 2, rng, 3, 4, true)};
    if (check_derivation_identities(f1, f2, probes).all())
      return "non-Jacobian pair " + std::to_string(found) +
             " passed every probe";
  }
  return std::nullopt;
}

Result c03_procedure_agreement(const std::vector<ChainCase>& corpus) {
  for (const ChainCase& cc : corpus) {
    bool by_chain = is_automorphism_chain(cc.chain);
    if (cc.rep.automorphic != by_chain)
      return "disagreement on " + at(cc.p, cc.seed);
    if (cc.rep.automorphic) {
      if (!cc.rep.witness) return "missing witness " + at(cc.p, cc.seed);
      auto [g1, g2] = apply_chain(*cc.rep.witness);
      if (!(g1 == cc.f1 && g2 == cc.f2))
        return "witness recomposition " + at(cc.p, cc.seed);
    }
  }
  return std::nullopt;
}

Result c04_mod_p_points(const std::vector<ChainCase>& corpus) {
  for (const ChainCase& cc : corpus) {
    if (!cc.rep.pts_inf_mod_p_1 || !cc.rep.pts_inf_mod_p_2)
      return "no truncation " + at(cc.p, cc.seed);
    if (cc.rep.pts_inf_mod_p_1->count != 1 ||
        cc.rep.pts_inf_mod_p_2->count != 1)
      return at(cc.p, cc.seed) + " counts " +
             std::to_string(cc.rep.pts_inf_mod_p_1->count) + "," +
             std::to_string(cc.rep.pts_inf_mod_p_2->count);
  }
  return std::nullopt;
}

Result c05_low_degree(const std::vector<ChainCase>& corpus) {
  for (const ChainCase& cc : corpus) {
    const PairReport& r = cc.rep;
    if (r.deg1 < static_cast<int>(cc.p) && r.deg2 < static_cast<int>(cc.p)) {
      if (!r.automorphic) return "low-degree not automorphic " + at(cc.p, cc.seed);
      if (r.pts_inf_1.count != 1 || r.pts_inf_2.count != 1)
        return "low-degree point count " + at(cc.p, cc.seed);
      if (!r.triangle_1 || !r.triangle_2)
        return "low-degree polygon " + at(cc.p, cc.seed);
      if (!r.degree_divisibility)
        return "low-degree divisibility " + at(cc.p, cc.seed);
    }
    if (!r.automorphic &&
        std::max(r.deg1, r.deg2) < static_cast<int>(cc.p))
      return "non-automorphic below degree p " + at(cc.p, cc.seed);
  }
  return std::nullopt;
}

Result c06_families() {
  // Linear-unit family: every valid a at m <= 2, two unit scales.
  for (uint32_t p : {3u, 5u, 7u, 11u}) {
    FieldCtx ctx(p);
    int checked = 0;
    for (int64_t m = 1; m <= 2; ++m)
      for (int64_t a = 2; a < m * static_cast<int64_t>(p); ++a)
        for (int64_t al : {int64_t{1}, static_cast<int64_t>(p) - 1}) {
          std::pair<MultiPoly, MultiPoly> pr = {MultiPoly::zero(ctx, 2),
                                                MultiPoly::zero(ctx, 2)};
          try {
            pr = gen_linear_unit_pair(ctx, a, m, ctx.elem_signed(al));
          } catch (const ConstraintError&) {
            continue;
          }
          ++checked;
          PairReport r = conjecture_report(pr.first, pr.second,
                                           static_cast<uint64_t>(m) * p);
          std::string where = "linear p=" + std::to_string(p) +
                              " a=" + std::to_string(a) +
                              " m=" + std::to_string(m);
          if (!r.is_jacobian) return where + ": not Jacobian";
          if (r.automorphic) return where + ": automorphic";
          if (r.pts_inf_1.count != 2 || r.pts_inf_2.count != 2)
            return where + ": points at infinity";
          if (r.deg1 % static_cast<int>(p) != 0 ||
              r.deg2 % static_cast<int>(p) != 0)
            return where + ": degree not 0 mod p";
        }
    if (checked == 0) return "linear grid empty at p=" + std::to_string(p);
  }
  // Quadratic-unit family: exact degrees; at s=1 only the second member
  // drops below p and it keeps two points at infinity.
  for (uint32_t p : {5u, 7u, 11u}) {
    FieldCtx ctx(p);
    int checked = 0;
    for (int64_t s = 1; s <= 2; ++s)
      for (int64_t a = 1; 2 * a + 1 < s * static_cast<int64_t>(p); ++a) {
        std::pair<MultiPoly, MultiPoly> pr = {MultiPoly::zero(ctx, 2),
                                              MultiPoly::zero(ctx, 2)};
        try {
          pr = gen_quadratic_unit_pair(ctx, a, s, ctx.one());
        } catch (const ConstraintError&) {
          continue;
        }
        ++checked;
        PairReport r = conjecture_report(pr.first, pr.second,
                                         static_cast<uint64_t>(s) * p);
        std::string where = "quadratic p=" + std::to_string(p) +
                            " a=" + std::to_string(a) +
                            " s=" + std::to_string(s);
        int64_t sp = s * static_cast<int64_t>(p);
        if (!r.is_jacobian) return where + ": not Jacobian";
        if (r.deg1 != 2 * (sp - a) - 1 || r.deg2 != sp - a)
          return where + ": degrees " + std::to_string(r.deg1) + "," +
                 std::to_string(r.deg2);
        if (s == 1) {
          if (r.deg2 != static_cast<int64_t>(p) - a ||
              r.deg2 >= static_cast<int64_t>(p))
            return where + ": second member degree";
          if (r.deg1 < static_cast<int64_t>(p))
            return where + ": first member fell below p";
          if (r.pts_inf_2.count != 2)
            return where + ": second member points at infinity";
        }
      }
    if (checked == 0) return "quadratic grid empty at p=" + std::to_string(p);
  }
  return std::nullopt;
}

Result c07_coefficient_search() {
  FieldCtx ctx(5);
  // 20 candidate vectors in total, so this budget is exhaustive.
  auto sols = search_type_b(ctx, 1, 2, 2, 1, 1000);
  if (sols.size() != 4)
    return "expected 4 solutions, got " + std::to_string(sols.size());
  for (uint32_t a1 = 1; a1 <= 4; ++a1) {
    UniPoly h1 = UniPoly::from_coeffs(ctx, {1, a1, 2 * a1 * a1 % 5});
    UniPoly h2 = UniPoly::from_coeffs(ctx, {1, a1});
    bool present = false;
    for (const auto& [s1, s2] : sols) present |= s1 == h1 && s2 == h2;
    if (!present)
      return "closed-form solution alpha1=" + std::to_string(a1) + " missing";
  }
  MultiPoly u = parse_poly("x1*x2^2", ctx, 2);
  if (!degree_drop_condition(u, 2, 1))
    return std::string("degree-drop condition rejected the search core");
  MultiPoly one = parse_poly("1", ctx, 2);
  for (const auto& [h1, h2] : sols) {
    auto [f1, f2] = gen_type_b_pair(ctx, 1, 2, one, h1, h2);
    if (!is_jacobian_pair(f1, f2))
      return std::string("search output is not a Jacobian pair");
  }
  return std::nullopt;
}

Result c08_nonexistence() {
  FieldCtx c3(3);
  auto hits3 = nonexistence_search(c3, 4, 2, 2, uint64_t{1} << 22);
  if (!hits3.empty())
    return "p=3 d=4 m=n=2 found " + std::to_string(hits3.size()) + " hits";
  FieldCtx c5(5);
  auto hits5 = nonexistence_search(c5, 4, 1, 1, uint64_t{1} << 22);
  if (!hits5.empty())
    return "p=5 d=4 m=n=1 found " + std::to_string(hits5.size()) + " hits";
  return std::nullopt;
}

Result c09_mixed_composition() {
  FieldCtx ctx(5);
  ElementaryMap rho = ElementaryMap::type_b(
      ctx, 1, 3, HomogComponent{0, parse_poly("1", ctx, 2)},
      parse_unipoly("x1+1", ctx), parse_unipoly("2*x1+1", ctx));
  ElementaryMap tau = ElementaryMap::type1(ctx, {1, 1, 0, 1, -1, 0});
  MixedComposition mc = compose_mixed(MorphismChain({rho, tau}));
  if (mc.inf1.count != 3 || mc.inf2.count != 3)
    return "counts " + std::to_string(mc.inf1.count) + "," +
           std::to_string(mc.inf2.count);
  return std::nullopt;
}

Result c10_powered_core_chains() {
  FieldCtx ctx(5);
  ChainGenOptions opts;
  opts.kind_weights = {2, 2, 2, 1, 3};
  int found = 0;
  for (uint64_t seed = 0; found < 100; ++seed) {
    if (seed > 50000)
      return std::string("could not collect 100 chains with a powered-core map");
    MorphismChain chain = random_chain(ctx, seed, opts);
    bool has_b = false;
    for (const ElementaryMap& m : chain.maps())
      has_b |= m.kind() == MapKind::TypeB;
    if (!has_b) continue;
    ++found;
    if (is_automorphism_chain(chain))
      return "powered-core chain seed " + std::to_string(seed) +
             " claims automorphism";
    auto [f1, f2] = apply_chain(chain);
    if (std::max(f1.total_degree(), f2.total_degree()) < 5)
      return "seed " + std::to_string(seed) + " image degree below p";
  }
  return std::nullopt;
}

Result c11_sweep_determinism() {
  const std::string cli = JACP_CLI_PATH;
  auto slurp = [](const char* path) -> std::optional<std::string> {
    std::ifstream f(path, std::ios::binary);
    if (!f) return std::nullopt;
    std::stringstream buf;
    buf << f.rdbuf();
    return buf.str();
  };
  struct Run {
    const char* label;
    std::string first, second;
  };
  const Run runs[] = {
      {"chain json",
       "sweep --primes 3,5 --family chain --seeds 0..19 --out acc_a.tmp",
       "sweep --primes 3,5 --family chain --seeds 0..19 --out acc_b.tmp"},
      {"linear csv",
       "sweep --primes 5,7 --family linear --a 2..6 --m 1..2 --format csv "
       "--out acc_a.tmp",
       "JACP_THREADS=3 REUSE sweep --primes 5,7 --family linear --a 2..6 "
       "--m 1..2 --format csv --out acc_b.tmp"},
  };
  for (const Run& r : runs) {
    for (std::string cmd : {r.first, r.second}) {
      // An env assignment may precede the binary; splice it at the marker.
      size_t marker = cmd.find("REUSE");
      if (marker != std::string::npos)
        cmd = cmd.substr(0, marker) + "\"" + cli + "\"" +
              cmd.substr(marker + 5);
      else
        cmd = "\"" + cli + "\" " + cmd;
      cmd += " >/dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0)
        return std::string(r.label) + ": sweep invocation failed";
    }
    auto a = slurp("acc_a.tmp"), b = slurp("acc_b.tmp");
    std::remove("acc_a.tmp");
    std::remove("acc_b.tmp");
    if (!a || !b) return std::string(r.label) + ": missing output file";
    if (*a != *b) return std::string(r.label) + ": outputs differ";
    if (a->empty()) return std::string(r.label) + ": empty output";
  }
  return std::nullopt;
}

}  // namespace

int main() {
  std::vector<ChainCase> corpus = build_corpus();
  struct Entry {
    const char* what;
    std::function<Result()> fn;
  };
  const Entry entries[] = {
      {"differential-sum identity equals the signed Jacobian power on seeded "
       "tuples",
       c01_differential_sum},
      {"derivation identities hold on every chain image and reject 50 "
       "non-Jacobian pairs",
       [&] { return c02_derivation_identities(corpus); }},
      {"pair-level and chain-level automorphism decisions agree and "
       "witnesses recompose",
       [&] { return c03_procedure_agreement(corpus); }},
      {"every chain image keeps one point at infinity mod p in both members",
       [&] { return c04_mod_p_points(corpus); }},
      {"images below degree p are automorphic with one point and triangle "
       "polygons; non-automorphic images reach p",
       [&] { return c05_low_degree(corpus); }},
      {"family generators give unit Jacobians, two points at infinity, and "
       "exact degrees",
       c06_families},
      {"coefficient search recovers every closed-form solution under the "
       "degree-drop condition",
       c07_coefficient_search},
      {"exhaustive independent-core searches return no Jacobian pairs",
       c08_nonexistence},
      {"two-map mixed composition has three points at infinity mod p in both "
       "members",
       c09_mixed_composition},
      {"seeded powered-core chains are non-automorphic with image degree at "
       "least p",
       c10_powered_core_chains},
      {"sweep re-runs with identical arguments are byte-identical",
       c11_sweep_determinism},
  };
  int idx = 0, failed = 0;
  for (const Entry& e : entries) {
    ++idx;
    Result r;
    try {
      r = e.fn();
    } catch (const std::exception& ex) {
      r = std::string("exception: ") + ex.what();
    }
    if (r) {
      ++failed;
      std::printf("[FAIL] %02d %s: %s\n", idx, e.what, r->c_str());
    } else {
      std::printf("[PASS] %02d %s\n", idx, e.what);
    }
  }
  if (failed) {
    std::printf("%d of 11 criteria failed\n", failed);
    return 1;
  }
  std::printf("all 11 criteria passed\n");
  return 0;
}
