#pragma once

#include <random>

#include "jacp/poly.hpp"

namespace jacp {

// Deterministic draw in [0, n). Plain modulo on mt19937_64 rather than
// std::uniform_int_distribution, whose mapping is implementation-defined;
// seeded sweeps must reproduce byte-identically on any toolchain.
inline uint64_t draw(std::mt19937_64& rng, uint64_t n) {
  return n == 0 ? 0 : rng() % n;
}

// Seeded sparse polynomial: at most max_terms monomials of total degree at
// most max_deg (duplicate monomials merge, zero coefficients drop).
inline MultiPoly random_poly(FieldCtx ctx, int n, std::mt19937_64& rng,
                             int max_deg, int max_terms,
                             bool force_nonzero = false) {
  for (int attempt = 0;; ++attempt) {
    std::vector<Term> terms;
    uint64_t count = 1 + draw(rng, static_cast<uint64_t>(max_terms));
    for (uint64_t t = 0; t < count; ++t) {
      std::vector<uint32_t> exps(static_cast<size_t>(n), 0);
      int budget = max_deg;
      for (int v = 0; v < n; ++v) {
        uint32_t e = static_cast<uint32_t>(draw(rng, budget + 1));
        exps[static_cast<size_t>(v)] = e;
        budget -= static_cast<int>(e);
      }
      uint32_t c = static_cast<uint32_t>(draw(rng, ctx.p()));
      if (c != 0) terms.push_back({pack_exps(exps), c});
    }
    MultiPoly f = MultiPoly::from_terms(ctx, n, std::move(terms));
    if (!force_nonzero || !f.is_zero()) return f;
    if (attempt > 100) return MultiPoly::constant(ctx, n, ctx.one());
  }
}

}  // namespace jacp
