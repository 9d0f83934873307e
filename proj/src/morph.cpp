#include "jacp/morph.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "jacp/errors.hpp"
#include "jacp/gen.hpp"

namespace jacp {

namespace {

void require_axis(int axis) {
  if (axis != 1 && axis != 2) throw std::invalid_argument("axis must be 1 or 2");
}

void require_two_vars(const MultiPoly& h) {
  if (h.vars() != 2)
    throw std::invalid_argument("map parameter must live in k[x1, x2]");
}

MultiPoly var2(FieldCtx ctx, int v) { return MultiPoly::variable(ctx, 2, v); }

// h with the acted variable replaced by its p-th power.
MultiPoly powered(const MultiPoly& h, int axis) {
  FieldCtx ctx = h.ctx();
  std::vector<MultiPoly> gs = {var2(ctx, 0), var2(ctx, 1)};
  gs[static_cast<size_t>(axis - 1)] =
      pow(gs[static_cast<size_t>(axis - 1)], ctx.p());
  return substitute(h, gs);
}

}  // namespace

ElementaryMap ElementaryMap::type1(std::array<FpElem, 6> a) {
  FieldCtx ctx = a[0].ctx();
  FpElem det = a[0] * a[4] - a[1] * a[3];
  if (det.is_zero())
    throw ConstraintError("type1-singular",
                          "type 1 map needs an invertible linear part");
  return ElementaryMap(ctx, Type1Map{a});
}

ElementaryMap ElementaryMap::type1(FieldCtx ctx, std::array<int64_t, 6> a) {
  std::array<FpElem, 6> e = {ctx.elem_signed(a[0]), ctx.elem_signed(a[1]),
                             ctx.elem_signed(a[2]), ctx.elem_signed(a[3]),
                             ctx.elem_signed(a[4]), ctx.elem_signed(a[5])};
  return type1(e);
}

ElementaryMap ElementaryMap::type2(FieldCtx ctx, int axis, UniPoly h) {
  require_axis(axis);
  if (h.ctx() != ctx) throw FieldMismatchError("mixed field contexts");
  return ElementaryMap(ctx, Type2Map{axis, std::move(h)});
}

ElementaryMap ElementaryMap::type2star(FieldCtx ctx, int axis, MultiPoly h) {
  require_axis(axis);
  require_two_vars(h);
  if (h.ctx() != ctx) throw FieldMismatchError("mixed field contexts");
  return ElementaryMap(ctx, Type2StarMap{axis, std::move(h)});
}

ElementaryMap ElementaryMap::type3(FieldCtx ctx, int axis, MultiPoly h) {
  require_axis(axis);
  require_two_vars(h);
  if (h.ctx() != ctx) throw FieldMismatchError("mixed field contexts");
  if (h.is_zero())
    throw ConstraintError("type3-h-zero", "type 3 map needs h != 0");
  return ElementaryMap(ctx, Type3Map{axis, std::move(h)});
}

ElementaryMap ElementaryMap::type_b(FieldCtx ctx, long a, long b,
                                    HomogComponent hcore, UniPoly h1,
                                    UniPoly h2) {
  const long p = static_cast<long>(ctx.p());
  if (a < 1 || b < 1)
    throw ConstraintError("typeb-exponent-positive",
                          "type (b) map needs a, b >= 1");
  if (a % p == 0 || b % p == 0)
    throw ConstraintError("typeb-ab-mod-p",
                          "type (b) map needs a*b prime to p");
  if (h1.degree() < 1 || h2.degree() < 1)
    throw ConstraintError("typeb-h-degree",
                          "type (b) map needs deg h1, deg h2 >= 1");
  if (h1.ctx() != ctx || h2.ctx() != ctx || hcore.form.ctx() != ctx)
    throw FieldMismatchError("mixed field contexts");
  require_two_vars(hcore.form);
  if (hcore.form.is_zero())
    throw ConstraintError("typeb-hcore-zero",
                          "type (b) map needs a nonzero core form");
  for (const Term& t : hcore.form.terms())
    if (key_degree(t.key) != static_cast<uint32_t>(hcore.degree))
      throw ConstraintError("typeb-hcore-inhomogeneous",
                            "type (b) core must be homogeneous");

  // w(t) = h1 h2 + a t h1' h2 + b t h1 h2' must be a nonzero constant; it
  // equals the Jacobian determinant of the map because x1 u_x1 = a u and
  // x2 u_x2 = b u.
  UniPoly t = UniPoly::t(ctx);
  UniPoly w = h1 * h2 + ctx.elem_signed(a) * (t * derivative(h1) * h2) +
              ctx.elem_signed(b) * (t * h1 * derivative(h2));
  if (!w.is_constant() || w.is_zero())
    throw ConstraintError(
        "typeb-jacobian",
        "type (b) Jacobian form is not a nonzero constant: w(t) = " +
            to_string(w));
  FpElem unit = w.coeff(0);
  return ElementaryMap(ctx, TypeBMap{a, b, std::move(hcore), std::move(h1),
                                     std::move(h2), unit});
}

MapKind ElementaryMap::kind() const {
  switch (m_.index()) {
    case 0: return MapKind::Type1;
    case 1: return MapKind::Type2;
    case 2: return MapKind::Type2Star;
    case 3: return MapKind::Type3;
    default: return MapKind::TypeB;
  }
}

FpElem ElementaryMap::jacobian_unit() const {
  switch (kind()) {
    case MapKind::Type1: {
      const auto& t = as_type1();
      return t.a[0] * t.a[4] - t.a[1] * t.a[3];
    }
    case MapKind::TypeB:
      return as_type_b().unit;
    default:
      return ctx_.one();
  }
}

std::pair<MultiPoly, MultiPoly> apply_map(const ElementaryMap& m) {
  FieldCtx ctx = m.ctx();
  MultiPoly x1 = var2(ctx, 0);
  MultiPoly x2 = var2(ctx, 1);
  switch (m.kind()) {
    case MapKind::Type1: {
      const auto& t = m.as_type1();
      MultiPoly c1 = MultiPoly::constant(ctx, 2, t.a[2]);
      MultiPoly c2 = MultiPoly::constant(ctx, 2, t.a[5]);
      return {t.a[0] * x1 + t.a[1] * x2 + c1, t.a[3] * x1 + t.a[4] * x2 + c2};
    }
    case MapKind::Type2: {
      const auto& t = m.as_type2();
      MultiPoly shift = eval_at(t.h, t.axis == 1 ? x2 : x1);
      if (t.axis == 1) return {x1 + shift, x2};
      return {x1, x2 + shift};
    }
    case MapKind::Type2Star: {
      const auto& t = m.as_type2star();
      MultiPoly shift = powered(t.h, t.axis);
      if (t.axis == 1) return {x1 + shift, x2};
      return {x1, x2 + shift};
    }
    case MapKind::Type3: {
      const auto& t = m.as_type3();
      MultiPoly shift =
          pow(t.axis == 1 ? x1 : x2, ctx.p()) * powered(t.h, t.axis);
      if (t.axis == 1) return {x1 + shift, x2};
      return {x1, x2 + shift};
    }
    case MapKind::TypeB: {
      const auto& t = m.as_type_b();
      std::array<uint32_t, 2> es = {static_cast<uint32_t>(t.a),
                                    static_cast<uint32_t>(t.b)};
      MultiPoly u = MultiPoly::monomial(ctx, 2, es, ctx.one()) *
                    frobenius(t.hcore.form);
      return {x1 * eval_at(t.h1, u), x2 * eval_at(t.h2, u)};
    }
  }
  throw std::logic_error("unreachable");
}

int deg_p(const ElementaryMap& m) {
  switch (m.kind()) {
    case MapKind::Type1:
    case MapKind::Type2:
      return 0;
    case MapKind::Type2Star: {
      const auto& t = m.as_type2star();
      return t.h.is_zero() ? 0 : std::max(0, t.h.degree_in(t.axis - 1));
    }
    case MapKind::Type3: {
      const auto& t = m.as_type3();
      return 1 + std::max(0, t.h.degree_in(t.axis - 1));
    }
    case MapKind::TypeB:
      throw std::invalid_argument("type (b) maps have no p-power degree");
  }
  throw std::logic_error("unreachable");
}

MorphismChain::MorphismChain(std::vector<ElementaryMap> maps)
    : maps_(std::move(maps)) {
  if (maps_.empty()) throw std::invalid_argument("empty chain");
  for (const ElementaryMap& m : maps_)
    if (m.ctx() != maps_.front().ctx())
      throw FieldMismatchError("chain mixes field contexts");
}

std::pair<MultiPoly, MultiPoly> apply_chain(const MorphismChain& c) {
  FieldCtx ctx = c.ctx();
  MultiPoly g1 = var2(ctx, 0);
  MultiPoly g2 = var2(ctx, 1);
  for (const ElementaryMap& m : c.maps()) {
    auto [m1, m2] = apply_map(m);
    std::vector<MultiPoly> gs = {g1, g2};
    g1 = substitute(m1, gs);
    g2 = substitute(m2, gs);
  }
  return {std::move(g1), std::move(g2)};
}

namespace {

uint64_t type_b_degree(const TypeBMap& t, uint32_t p) {
  uint32_t min_x1 = static_cast<uint32_t>(t.hcore.form.degree_in(0));
  for (const Term& term : t.hcore.form.terms())
    min_x1 = std::min(min_x1, exp_of(term.key, 0));
  uint64_t s = static_cast<uint64_t>(t.a) + uint64_t{p} * min_x1;
  uint64_t tt = static_cast<uint64_t>(t.a) +
                uint64_t{p} * static_cast<uint64_t>(t.hcore.form.degree_in(0));
  uint64_t d = static_cast<uint64_t>(t.a) + static_cast<uint64_t>(t.b) +
               uint64_t{p} * static_cast<uint64_t>(t.hcore.degree);
  return tt * static_cast<uint64_t>(t.h1.degree()) +
         (d - s) * static_cast<uint64_t>(t.h2.degree()) + 1;
}

}  // namespace

uint64_t chain_degree(const MorphismChain& c) {
  const uint32_t p = c.ctx().p();
  unsigned __int128 acc = 1;
  for (const ElementaryMap& m : c.maps()) {
    unsigned __int128 factor = 1;
    if (m.kind() == MapKind::TypeB) {
      factor = type_b_degree(m.as_type_b(), p);
    } else {
      for (int k = deg_p(m); k > 0; --k) factor *= p;
    }
    acc *= factor;
    if (acc > UINT64_MAX) throw std::overflow_error("chain degree overflow");
  }
  return static_cast<uint64_t>(acc);
}

bool is_automorphism_chain(const MorphismChain& c) {
  return chain_degree(c) == 1;
}

FpElem chain_jacobian_unit(const MorphismChain& c) {
  FpElem u = c.ctx().one();
  for (const ElementaryMap& m : c.maps()) u = u * m.jacobian_unit();
  return u;
}

std::pair<std::optional<ElementaryMap>, ElementaryMap> split_type2star(
    const ElementaryMap& m) {
  if (m.kind() != MapKind::Type2Star)
    throw std::invalid_argument("split needs a type 2* map");
  const auto& t = m.as_type2star();
  FieldCtx ctx = m.ctx();
  int va = t.axis - 1;
  int vo = 1 - va;

  std::vector<MultiPoly> at_zero = {var2(ctx, 0), var2(ctx, 1)};
  at_zero[static_cast<size_t>(va)] = MultiPoly::zero(ctx, 2);
  MultiPoly h0 = substitute(t.h, at_zero);
  ElementaryMap rho =
      ElementaryMap::type2(ctx, t.axis, uni_from_multi(h0, vo));

  MultiPoly rest = t.h - h0;
  if (rest.is_zero()) return {std::nullopt, std::move(rho)};
  MultiPoly h3 = divexact(rest, var2(ctx, va));
  return {ElementaryMap::type3(ctx, t.axis, std::move(h3)), std::move(rho)};
}

std::string to_string(const ElementaryMap& m) {
  std::ostringstream os;
  switch (m.kind()) {
    case MapKind::Type1: {
      const auto& t = m.as_type1();
      os << "T1";
      for (const FpElem& e : t.a) os << ' ' << e.value();
      break;
    }
    case MapKind::Type2: {
      const auto& t = m.as_type2();
      os << "T2 ";
      if (t.axis == 1) os << "axis=1 ";
      os << to_string(t.h);
      break;
    }
    case MapKind::Type2Star: {
      const auto& t = m.as_type2star();
      os << "T2S axis=" << t.axis << ' ' << to_string(t.h);
      break;
    }
    case MapKind::Type3: {
      const auto& t = m.as_type3();
      os << "T3 axis=" << t.axis << ' ' << to_string(t.h);
      break;
    }
    case MapKind::TypeB: {
      const auto& t = m.as_type_b();
      os << "TB a=" << t.a << " b=" << t.b
         << " hcore=" << to_string(t.hcore.form) << " h1=" << to_string(t.h1)
         << " h2=" << to_string(t.h2);
      break;
    }
  }
  return os.str();
}

std::string to_string(const MorphismChain& c) {
  std::string out;
  for (const ElementaryMap& m : c.maps()) {
    out += to_string(m);
    out += '\n';
  }
  return out;
}

namespace {

[[noreturn]] void fail_line(const std::string& what, int line) {
  throw ParseError(what, line, 1);
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Parses "axis=1 " / "axis=2 " prefixes; defaults to 2 when absent and
// optional, errors when required.
int take_axis(std::string& rest, bool required, int line) {
  std::string t = trim(rest);
  if (t.rfind("axis=", 0) == 0) {
    if (t.size() < 6 || (t[5] != '1' && t[5] != '2'))
      fail_line("axis must be 1 or 2", line);
    rest = t.substr(6);
    return t[5] - '0';
  }
  if (required) fail_line("expected axis=<1|2>", line);
  rest = t;
  return 2;
}

long parse_long(const std::string& s, int line) {
  try {
    size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size()) fail_line("bad integer '" + s + "'", line);
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    fail_line("bad integer '" + s + "'", line);
  }
}

// Value of `key=` running until the next known marker or end of line.
std::string take_field(const std::string& rest, const std::string& key,
                       int line) {
  size_t at = rest.find(key + "=");
  if (at == std::string::npos) fail_line("missing " + key + "=", line);
  size_t begin = at + key.size() + 1;
  size_t end = rest.size();
  for (const char* marker : {" a=", " b=", " hcore=", " h1=", " h2="}) {
    size_t m = rest.find(marker, begin);
    if (m != std::string::npos) end = std::min(end, m);
  }
  return trim(rest.substr(begin, end - begin));
}

ElementaryMap parse_map_inner(const std::string& line, FieldCtx ctx,
                              int lineno) {
  std::string s = trim(line);
  size_t sp = s.find(' ');
  std::string tag = sp == std::string::npos ? s : s.substr(0, sp);
  std::string rest = sp == std::string::npos ? "" : trim(s.substr(sp + 1));

  try {
    if (tag == "T1") {
      std::istringstream is(rest);
      std::array<int64_t, 6> a;
      for (int64_t& v : a)
        if (!(is >> v)) fail_line("T1 needs six integers", lineno);
      std::string leftover;
      if (is >> leftover) fail_line("trailing input after T1", lineno);
      return ElementaryMap::type1(ctx, a);
    }
    if (tag == "T2") {
      int axis = take_axis(rest, false, lineno);
      return ElementaryMap::type2(ctx, axis, parse_unipoly(rest, ctx));
    }
    if (tag == "T2S") {
      int axis = take_axis(rest, true, lineno);
      return ElementaryMap::type2star(ctx, axis, parse_poly(rest, ctx, 2));
    }
    if (tag == "T3") {
      int axis = take_axis(rest, true, lineno);
      return ElementaryMap::type3(ctx, axis, parse_poly(rest, ctx, 2));
    }
    if (tag == "TB") {
      long a = parse_long(take_field(rest, "a", lineno), lineno);
      long b = parse_long(take_field(rest, "b", lineno), lineno);
      MultiPoly core = parse_poly(take_field(rest, "hcore", lineno), ctx, 2);
      UniPoly h1 = parse_unipoly(take_field(rest, "h1", lineno), ctx);
      UniPoly h2 = parse_unipoly(take_field(rest, "h2", lineno), ctx);
      int deg = core.is_zero() ? 0 : core.total_degree();
      return ElementaryMap::type_b(ctx, a, b, HomogComponent{deg, core},
                                   std::move(h1), std::move(h2));
    }
  } catch (const ParseError& e) {
    if (e.line() == lineno) throw;
    fail_line(e.what(), lineno);
  }
  fail_line("unknown map tag '" + tag + "'", lineno);
}

}  // namespace

ElementaryMap parse_map_line(const std::string& line, FieldCtx ctx) {
  return parse_map_inner(line, ctx, 1);
}

MorphismChain parse_chain(const std::string& text, FieldCtx ctx) {
  std::vector<ElementaryMap> maps;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    maps.push_back(parse_map_inner(line, ctx, lineno));
  }
  if (maps.empty()) throw ParseError("empty chain", 1, 1);
  return MorphismChain(std::move(maps));
}

namespace {

ElementaryMap random_type1(FieldCtx ctx, std::mt19937_64& rng) {
  const uint32_t p = ctx.p();
  for (;;) {
    std::array<FpElem, 6> a = {ctx.elem(draw(rng, p)), ctx.elem(draw(rng, p)),
                               ctx.elem(draw(rng, p)), ctx.elem(draw(rng, p)),
                               ctx.elem(draw(rng, p)), ctx.elem(draw(rng, p))};
    if (!(a[0] * a[4] - a[1] * a[3]).is_zero()) return ElementaryMap::type1(a);
  }
}

UniPoly random_uni_of_degree(FieldCtx ctx, std::mt19937_64& rng, int deg) {
  std::vector<uint32_t> c(static_cast<size_t>(deg) + 1);
  for (uint32_t& x : c) x = static_cast<uint32_t>(draw(rng, ctx.p()));
  c.back() = static_cast<uint32_t>(1 + draw(rng, ctx.p() - 1));
  return UniPoly::from_coeffs(ctx, std::move(c));
}

// Sparse two-variable parameter with the acted variable's exponent kept
// small; `min_axis_exp` forces powered terms for Type2Star coverage.
MultiPoly random_axis_param(FieldCtx ctx, std::mt19937_64& rng, int axis,
                            int min_axis_exp, int max_axis_exp) {
  for (;;) {
    std::vector<Term> terms;
    uint64_t count = 1 + draw(rng, 2);
    for (uint64_t i = 0; i < count; ++i) {
      uint32_t ea = static_cast<uint32_t>(
          min_axis_exp + draw(rng, max_axis_exp - min_axis_exp + 1));
      uint32_t eo = static_cast<uint32_t>(draw(rng, 3));
      std::array<uint32_t, 2> es = axis == 1 ? std::array<uint32_t, 2>{ea, eo}
                                             : std::array<uint32_t, 2>{eo, ea};
      terms.push_back(
          {pack_exps(es), static_cast<uint32_t>(1 + draw(rng, ctx.p() - 1))});
    }
    MultiPoly h = MultiPoly::from_terms(ctx, 2, std::move(terms));
    if (!h.is_zero()) return h;
  }
}

// Degree of the map's coordinate formulas; composing multiplies the image
// degree by at most this.
uint64_t formula_degree(const ElementaryMap& m) {
  switch (m.kind()) {
    case MapKind::Type1:
      return 1;
    case MapKind::Type2:
      return std::max(1, m.as_type2().h.degree());
    case MapKind::Type2Star:
    case MapKind::Type3: {
      const MultiPoly& h = m.kind() == MapKind::Type2Star
                               ? m.as_type2star().h
                               : m.as_type3().h;
      int axis = m.kind() == MapKind::Type2Star ? m.as_type2star().axis
                                                : m.as_type3().axis;
      const uint32_t p = h.ctx().p();
      uint64_t w = 0;
      for (const Term& t : h.terms()) {
        uint64_t wt = exp_of(t.key, 2 - axis) +
                      uint64_t{p} * exp_of(t.key, axis - 1);
        w = std::max(w, wt);
      }
      if (m.kind() == MapKind::Type3) w += p;
      return std::max<uint64_t>(1, w);
    }
    case MapKind::TypeB: {
      const auto& t = m.as_type_b();
      uint64_t d = static_cast<uint64_t>(t.a) + static_cast<uint64_t>(t.b) +
                   uint64_t{t.hcore.form.ctx().p()} *
                       static_cast<uint64_t>(t.hcore.degree);
      return 1 + d * static_cast<uint64_t>(
                         std::max(t.h1.degree(), t.h2.degree()));
    }
  }
  return 1;
}

ElementaryMap random_map_of_kind(FieldCtx ctx, std::mt19937_64& rng,
                                 int kind) {
  const uint32_t p = ctx.p();
  switch (kind) {
    case 0:
      return random_type1(ctx, rng);
    case 1: {
      int axis = 1 + static_cast<int>(draw(rng, 2));
      int deg = 1 + static_cast<int>(draw(rng, 3));
      return ElementaryMap::type2(ctx, axis,
                                  random_uni_of_degree(ctx, rng, deg));
    }
    case 2: {
      int axis = 1 + static_cast<int>(draw(rng, 2));
      int hi = draw(rng, 4) == 0 ? 2 : 1;
      return ElementaryMap::type2star(
          ctx, axis, random_axis_param(ctx, rng, axis, 1, hi));
    }
    case 3: {
      int axis = 1 + static_cast<int>(draw(rng, 2));
      return ElementaryMap::type3(ctx, axis,
                                  random_axis_param(ctx, rng, axis, 0, 1));
    }
    default: {
      // Linear h1, h2 solving the constant-Jacobian condition: with
      // a + b = p - 1 and beta = -alpha(1 + a)/(1 + b) the form w(t)
      // collapses to 1.
      long a = 1 + static_cast<long>(draw(rng, p - 2));
      long b = static_cast<long>(p) - 1 - a;
      if (draw(rng, 3) == 0) b += static_cast<long>(p);
      FpElem alpha = ctx.elem(1 + draw(rng, p - 1));
      FpElem beta = -(alpha * ctx.elem_signed(1 + a)) /
                    ctx.elem_signed(1 + b);
      UniPoly h1 = UniPoly::from_coeffs(ctx, {1, alpha.value()});
      UniPoly h2 = UniPoly::from_coeffs(ctx, {1, beta.value()});
      HomogComponent core{0, MultiPoly::constant(ctx, 2, ctx.one())};
      if (draw(rng, 4) == 0) {
        int v = static_cast<int>(draw(rng, 2));
        core = HomogComponent{1, var2(ctx, v)};
      }
      return ElementaryMap::type_b(ctx, a, b, std::move(core), std::move(h1),
                                   std::move(h2));
    }
  }
}

}  // namespace

MorphismChain random_chain(FieldCtx ctx, uint64_t seed,
                           const ChainGenOptions& opts) {
  if (opts.length < 1) throw std::invalid_argument("chain length must be >= 1");
  uint64_t total_weight = 0;
  for (int w : opts.kind_weights) {
    if (w < 0) throw std::invalid_argument("negative kind weight");
    total_weight += static_cast<uint64_t>(w);
  }
  if (total_weight == 0) throw std::invalid_argument("all kind weights zero");
  const uint32_t p = ctx.p();
  uint64_t budget = opts.degree_budget ? opts.degree_budget
                                       : uint64_t{3} * p * p;

  std::mt19937_64 rng(seed);
  std::vector<ElementaryMap> maps;
  uint64_t est = 1;
  for (int i = 0; i < opts.length; ++i) {
    uint64_t pick = draw(rng, total_weight);
    int kind = 0;
    for (uint64_t acc = 0; kind < 5; ++kind) {
      acc += static_cast<uint64_t>(opts.kind_weights[static_cast<size_t>(kind)]);
      if (pick < acc) break;
    }
    // Type (b) maps of the generated shape need p > 2.
    if (kind == 4 && p == 2) kind = 0;
    ElementaryMap m = random_map_of_kind(ctx, rng, kind);
    uint64_t factor = formula_degree(m);
    if (est > budget / std::max<uint64_t>(factor, 1)) {
      m = random_type1(ctx, rng);
      factor = 1;
    }
    est *= factor;
    maps.push_back(std::move(m));
  }
  return MorphismChain(std::move(maps));
}

}  // namespace jacp
