#include "jacp/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <thread>
#include <tuple>

#include "jacp/analyze.hpp"
#include "jacp/errors.hpp"
#include "jacp/families.hpp"
#include "jacp/gen.hpp"
#include "jacp/morph.hpp"

namespace jacp {

namespace {

using nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kMathFail = 1;
constexpr int kUsage = 2;

// Rejections of well-formed requests whose mathematics said no. Every other
// ConstraintError is a precondition violation, i.e. a usage error.
bool is_math_rejection(const ConstraintError& e) {
  return e.code() == "derivative-not-constant" || e.code() == "typeb-jacobian";
}

bool is_prime(int64_t p) {
  if (p < 2) return false;
  for (int64_t q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

uint32_t checked_prime(int64_t p) {
  if (!is_prime(p) || p > 0x7fffffff)
    throw std::invalid_argument("p must be a prime");
  return static_cast<uint32_t>(p);
}

// Comma-separated integers and LO..HI spans, sorted and deduplicated.
std::vector<int64_t> parse_int_list(const std::string& text,
                                    const std::string& flag) {
  std::vector<int64_t> out;
  std::string atom;
  std::istringstream in(text);
  auto bad = [&] {
    throw std::invalid_argument(flag + ": expected integers or LO..HI spans");
  };
  while (std::getline(in, atom, ',')) {
    size_t dots = atom.find("..");
    try {
      if (dots == std::string::npos) {
        size_t used = 0;
        int64_t v = std::stoll(atom, &used);
        if (used != atom.size()) bad();
        out.push_back(v);
      } else {
        size_t used = 0;
        int64_t lo = std::stoll(atom.substr(0, dots), &used);
        if (used != dots) bad();
        int64_t hi = std::stoll(atom.substr(dots + 2), &used);
        if (used != atom.size() - dots - 2) bad();
        if (lo > hi || hi - lo > 100000) bad();
        for (int64_t v = lo; v <= hi; ++v) out.push_back(v);
      }
    } catch (const std::invalid_argument&) {
      bad();
    } catch (const std::out_of_range&) {
      bad();
    }
  }
  if (out.empty()) bad();
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

unsigned resolve_jobs(int64_t flag) {
  if (flag > 0) return static_cast<unsigned>(flag);
  if (const char* env = std::getenv("JACP_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// One line per elementary map, joined for single-line report fields.
std::string flatten_chain(std::string s) {
  while (!s.empty() && s.back() == '\n') s.pop_back();
  std::string out;
  for (char ch : s) {
    if (ch == '\n')
      out += "; ";
    else
      out += ch;
  }
  return out;
}

// Accepts both real newlines and the flattened ";" form.
std::string unflatten_chain(const std::string& s) {
  std::string out, piece;
  auto flush = [&] {
    size_t b = piece.find_first_not_of(" \t");
    size_t e = piece.find_last_not_of(" \t");
    if (b != std::string::npos) {
      out += piece.substr(b, e - b + 1);
      out += '\n';
    }
    piece.clear();
  };
  for (char ch : s) {
    if (ch == ';' || ch == '\n')
      flush();
    else
      piece += ch;
  }
  flush();
  return out;
}

bool is_integer_literal(const std::string& v) {
  if (v.empty()) return false;
  size_t i = v[0] == '-' ? 1 : 0;
  if (i == v.size()) return false;
  for (; i < v.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(v[i]))) return false;
  return true;
}

using Params = std::vector<std::pair<std::string, std::string>>;

ordered_json row_json(const PairReport& r, const std::string& family,
                      const Params& params, const std::string& chain,
                      std::optional<uint64_t> seed) {
  ordered_json j;
  j["schema"] = 1;
  j["p"] = r.p;
  if (!family.empty()) j["family"] = family;
  if (!chain.empty()) j["chain"] = chain;
  ordered_json ps = ordered_json::object();
  for (const auto& [k, v] : params) {
    if (is_integer_literal(v))
      ps[k] = std::stoll(v);
    else
      ps[k] = v;
  }
  j["params"] = std::move(ps);
  j["deg1"] = r.deg1;
  j["deg2"] = r.deg2;
  j["is_jacobian"] = r.is_jacobian;
  if (r.is_jacobian)
    j["jacobian_value"] = r.jacobian_value.constant_value().value();
  else
    j["jacobian_value"] = nullptr;
  j["automorphic"] = r.automorphic;
  j["pts_inf"] = ordered_json::array({r.pts_inf_1.count, r.pts_inf_2.count});
  ordered_json mp = ordered_json::array();
  mp.push_back(r.pts_inf_mod_p_1 ? ordered_json(r.pts_inf_mod_p_1->count)
                                 : ordered_json(nullptr));
  mp.push_back(r.pts_inf_mod_p_2 ? ordered_json(r.pts_inf_mod_p_2->count)
                                 : ordered_json(nullptr));
  j["pts_inf_mod_p"] = std::move(mp);
  j["triangle"] = ordered_json::array({r.triangle_1, r.triangle_2});
  j["deg_divides"] = r.degree_divisibility;
  j["low_degree_applicable"] = r.low_degree_applicable;
  if (r.extension_degree)
    j["extension_degree"] = *r.extension_degree;
  else
    j["extension_degree"] = nullptr;
  if (seed)
    j["seed"] = *seed;
  else
    j["seed"] = nullptr;
  return j;
}

constexpr const char* kCsvHeader =
    "schema,p,family,chain,params,deg1,deg2,is_jacobian,jacobian_value,"
    "automorphic,pts_inf_1,pts_inf_2,pts_inf_mod_p_1,pts_inf_mod_p_2,"
    "triangle_1,triangle_2,deg_divides,low_degree_applicable,"
    "extension_degree,seed";

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string csv_row(const PairReport& r, const std::string& family,
                    const Params& params, const std::string& chain,
                    std::optional<uint64_t> seed) {
  std::string ps;
  for (const auto& [k, v] : params) {
    if (!ps.empty()) ps += ' ';
    ps += k + "=" + v;
  }
  auto b = [](bool v) { return v ? "true" : "false"; };
  std::string row;
  row += "1," + std::to_string(r.p) + ",";
  row += csv_escape(family) + "," + csv_escape(chain) + ",";
  row += csv_escape(ps) + ",";
  row += std::to_string(r.deg1) + "," + std::to_string(r.deg2) + ",";
  row += std::string(b(r.is_jacobian)) + ",";
  row += r.is_jacobian
             ? std::to_string(r.jacobian_value.constant_value().value())
             : "";
  row += std::string(",") + b(r.automorphic) + ",";
  row += std::to_string(r.pts_inf_1.count) + "," +
         std::to_string(r.pts_inf_2.count) + ",";
  row += (r.pts_inf_mod_p_1 ? std::to_string(r.pts_inf_mod_p_1->count) : "") +
         ",";
  row += (r.pts_inf_mod_p_2 ? std::to_string(r.pts_inf_mod_p_2->count) : "") +
         ",";
  row += std::string(b(r.triangle_1)) + "," + b(r.triangle_2) + ",";
  row += std::string(b(r.degree_divisibility)) + ",";
  row += std::string(b(r.low_degree_applicable)) + ",";
  row += (r.extension_degree ? std::to_string(*r.extension_degree) : "");
  row += ",";
  row += seed ? std::to_string(*seed) : "";
  return row;
}

// ---- sweep ----

struct SweepCfg {
  std::string primes;
  std::string family;
  std::string a = "";
  std::string m = "";
  std::string alpha = "";
  std::string s = "";
  std::string alpha1 = "";
  std::string seeds = "0..9";
  std::string weights = "2,3,3,2,0";
  int64_t length = 3;
  uint64_t degree_budget = 0;
  std::string out_path = "-";
  std::string format = "json";
  int64_t jobs = 0;
};

struct Cand {
  uint32_t p = 0;
  std::string family;
  Params params;
  std::vector<int64_t> key;
  std::optional<uint64_t> seed;
  std::optional<std::pair<MultiPoly, MultiPoly>> pair;
  std::optional<uint64_t> witness_degree;
  int length = 3;
  uint64_t budget = 0;
  std::array<int, 5> weights = {0, 0, 0, 0, 0};
};

struct Row {
  Cand cand;
  std::string chain;
  PairReport rep;
};

Row make_row(const Cand& c) {
  FieldCtx ctx(c.p);
  if (c.pair)
    return Row{c, "", conjecture_report(c.pair->first, c.pair->second,
                                        c.witness_degree)};
  ChainGenOptions opts;
  opts.length = c.length;
  opts.kind_weights = c.weights;
  opts.degree_budget = c.budget;
  MorphismChain chain = random_chain(ctx, *c.seed, opts);
  auto [f1, f2] = apply_chain(chain);
  return Row{c, flatten_chain(to_string(chain)),
             conjecture_report(f1, f2, chain_degree(chain))};
}

std::vector<Row> run_rows(const std::vector<Cand>& cands, unsigned jobs) {
  std::vector<std::optional<Row>> slots(cands.size());
  if (jobs <= 1 || cands.size() <= 1) {
    for (size_t i = 0; i < cands.size(); ++i) slots[i] = make_row(cands[i]);
  } else {
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::string what;
    std::mutex what_mu;
    auto work = [&] {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= cands.size() || failed.load()) return;
        try {
          slots[i] = make_row(cands[i]);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(what_mu);
          what = e.what();
          failed.store(true);
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    unsigned n = std::min<size_t>(jobs, cands.size());
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
    if (failed.load()) throw std::runtime_error(what);
  }
  std::vector<Row> rows;
  rows.reserve(cands.size());
  for (std::optional<Row>& s : slots) rows.push_back(std::move(*s));
  return rows;
}

int cmd_sweep(const SweepCfg& cfg, std::ostream& out, std::ostream& err) {
  std::vector<uint32_t> primes;
  for (int64_t p : parse_int_list(cfg.primes, "--primes"))
    primes.push_back(checked_prime(p));

  auto or_default = [](const std::string& v, const char* dflt) {
    return v.empty() ? std::string(dflt) : v;
  };

  std::vector<Cand> cands;
  if (cfg.family == "linear") {
    auto as = parse_int_list(or_default(cfg.a, "2"), "--a");
    auto ms = parse_int_list(or_default(cfg.m, "1"), "--m");
    auto alphas = parse_int_list(or_default(cfg.alpha, "1"), "--alpha");
    for (uint32_t p : primes) {
      FieldCtx ctx(p);
      for (int64_t a : as)
        for (int64_t m : ms)
          for (int64_t al : alphas) {
            Cand c;
            c.p = p;
            c.family = "linear";
            c.params = {{"a", std::to_string(a)},
                        {"m", std::to_string(m)},
                        {"alpha", std::to_string(al)}};
            c.key = {a, m, al};
            try {
              c.pair = gen_linear_unit_pair(ctx, a, m, ctx.elem_signed(al));
            } catch (const ConstraintError&) {
              continue;
            }
            c.witness_degree = static_cast<uint64_t>(m) * p;
            cands.push_back(std::move(c));
          }
    }
  } else if (cfg.family == "quadratic") {
    auto as = parse_int_list(or_default(cfg.a, "1"), "--a");
    auto ss = parse_int_list(or_default(cfg.s, "1"), "--s");
    auto alphas = parse_int_list(or_default(cfg.alpha1, "1"), "--alpha1");
    for (uint32_t p : primes) {
      FieldCtx ctx(p);
      for (int64_t a : as)
        for (int64_t s : ss)
          for (int64_t al : alphas) {
            Cand c;
            c.p = p;
            c.family = "quadratic";
            c.params = {{"a", std::to_string(a)},
                        {"s", std::to_string(s)},
                        {"alpha1", std::to_string(al)}};
            c.key = {a, s, al};
            try {
              c.pair = gen_quadratic_unit_pair(ctx, a, s, ctx.elem_signed(al));
            } catch (const ConstraintError&) {
              continue;
            }
            c.witness_degree = static_cast<uint64_t>(s) * p;
            cands.push_back(std::move(c));
          }
    }
  } else if (cfg.family == "chain") {
    auto seeds = parse_int_list(cfg.seeds, "--seeds");
    // --weights is positional, so it skips the sorted-list parser.
    std::array<int, 5> weights;
    {
      std::vector<int64_t> raw;
      std::string atom;
      std::istringstream in(cfg.weights);
      while (std::getline(in, atom, ',')) {
        size_t used = 0;
        int64_t v = 0;
        try {
          v = std::stoll(atom, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != atom.size() || v < 0)
          throw std::invalid_argument("--weights: expected 5 integers >= 0");
        raw.push_back(v);
      }
      if (raw.size() != 5)
        throw std::invalid_argument("--weights needs 5 integers");
      int64_t sum = 0;
      for (size_t i = 0; i < 5; ++i) {
        weights[i] = static_cast<int>(raw[i]);
        sum += raw[i];
      }
      if (sum == 0) throw std::invalid_argument("--weights: all zero");
    }
    if (cfg.length < 1) throw std::invalid_argument("--length must be >= 1");
    for (uint32_t p : primes)
      for (int64_t seed : seeds) {
        if (seed < 0) throw std::invalid_argument("--seeds: negative seed");
        Cand c;
        c.p = p;
        c.family = "chain";
        c.key = {seed};
        c.seed = static_cast<uint64_t>(seed);
        c.length = static_cast<int>(cfg.length);
        c.budget = cfg.degree_budget;
        c.weights = weights;
        cands.push_back(std::move(c));
      }
  } else {
    throw std::invalid_argument(
        "--family must be linear, quadratic, or chain");
  }

  err << "grid size: " << cands.size() << "\n";
  std::vector<Row> rows = run_rows(cands, resolve_jobs(cfg.jobs));

  std::stable_sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
    if (x.cand.p != y.cand.p) return x.cand.p < y.cand.p;
    if (x.cand.family != y.cand.family) return x.cand.family < y.cand.family;
    if (x.cand.key != y.cand.key) return x.cand.key < y.cand.key;
    return x.cand.seed < y.cand.seed;
  });

  size_t jac = 0, autom = 0, low = 0, divides = 0, one_point = 0;
  for (const Row& r : rows) {
    jac += r.rep.is_jacobian;
    autom += r.rep.automorphic;
    low += r.rep.low_degree_applicable;
    divides += r.rep.degree_divisibility;
    one_point += r.rep.pts_inf_mod_p_1 && r.rep.pts_inf_mod_p_2 &&
                 r.rep.pts_inf_mod_p_1->count == 1 &&
                 r.rep.pts_inf_mod_p_2->count == 1;
  }

  std::string doc;
  if (cfg.format == "json") {
    ordered_json j;
    j["schema"] = 1;
    j["command"] = "sweep";
    ordered_json arr = ordered_json::array();
    for (const Row& r : rows) {
      bool chain_row = r.cand.family == "chain";
      arr.push_back(row_json(r.rep, chain_row ? "" : r.cand.family,
                             r.cand.params, r.chain, r.cand.seed));
    }
    j["rows"] = std::move(arr);
    j["summary"] = ordered_json{{"rows", rows.size()},
                                {"jacobian", jac},
                                {"automorphic", autom},
                                {"low_degree_applicable", low},
                                {"deg_divides", divides},
                                {"one_point_mod_p_both", one_point}};
    doc = j.dump(2) + "\n";
  } else if (cfg.format == "csv") {
    doc = std::string(kCsvHeader) + "\n";
    for (const Row& r : rows) {
      bool chain_row = r.cand.family == "chain";
      doc += csv_row(r.rep, chain_row ? "" : r.cand.family, r.cand.params,
                     r.chain, r.cand.seed) +
             "\n";
    }
  } else {
    throw std::invalid_argument("--format must be json or csv");
  }

  if (cfg.out_path == "-") {
    out << doc;
  } else {
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + cfg.out_path);
    f << doc;
    if (!f) throw std::runtime_error("write failed: " + cfg.out_path);
  }

  err << "summary rows=" << rows.size() << " jacobian=" << jac
      << " automorphic=" << autom << " low_degree=" << low
      << " deg_divides=" << divides << " one_point_mod_p=" << one_point
      << "\n";
  return kOk;
}

// ---- check / report ----

MultiPoly parse_member(const std::string& text, FieldCtx ctx,
                       const char* name, std::ostream& err, bool& ok) {
  try {
    return parse_poly(text, ctx, 2);
  } catch (const ParseError& e) {
    err << name << ": " << e.what() << "\n";
    ok = false;
    return MultiPoly::zero(ctx, 2);
  }
}

std::pair<std::string, std::string> read_pair_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(f, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos)
      lines.push_back(line);
  }
  if (lines.size() != 2)
    throw std::invalid_argument(path + ": expected exactly two polynomials");
  return {lines[0], lines[1]};
}

struct PairArgs {
  int64_t p = 0;
  std::vector<std::string> polys;
  std::string file;
};

int cmd_check(const PairArgs& a, std::ostream& out, std::ostream& err) {
  FieldCtx ctx(checked_prime(a.p));
  std::string t1, t2;
  if (!a.file.empty()) {
    if (!a.polys.empty())
      throw std::invalid_argument("give polynomials inline or --file");
    std::tie(t1, t2) = read_pair_file(a.file);
  } else if (a.polys.size() == 2) {
    t1 = a.polys[0];
    t2 = a.polys[1];
  } else {
    throw std::invalid_argument("check needs two polynomials or --file");
  }
  bool ok = true;
  MultiPoly f1 = parse_member(t1, ctx, "f1", err, ok);
  MultiPoly f2 = parse_member(t2, ctx, "f2", err, ok);
  if (!ok) return kUsage;
  PairReport rep = conjecture_report(f1, f2);
  out << row_json(rep, "", {}, "", std::nullopt).dump(2) << "\n";
  return rep.is_jacobian ? kOk : kMathFail;
}

struct ReportArgs {
  int64_t p = 0;
  std::vector<std::string> polys;
  std::string chain;
  std::string chain_file;
  int64_t witness_degree = -1;
};

int cmd_report(const ReportArgs& a, std::ostream& out, std::ostream& err) {
  FieldCtx ctx(checked_prime(a.p));
  std::string chain_text = a.chain;
  if (!a.chain_file.empty()) {
    std::ifstream f(a.chain_file);
    if (!f) throw std::invalid_argument("cannot open " + a.chain_file);
    std::stringstream buf;
    buf << f.rdbuf();
    chain_text = buf.str();
  }
  if (!chain_text.empty()) {
    if (!a.polys.empty())
      throw std::invalid_argument("give a pair or a chain, not both");
    MorphismChain chain = parse_chain(unflatten_chain(chain_text), ctx);
    auto [f1, f2] = apply_chain(chain);
    std::optional<uint64_t> wd;
    try {
      wd = chain_degree(chain);
    } catch (const std::overflow_error&) {
    }
    PairReport rep = conjecture_report(f1, f2, wd);
    out << row_json(rep, "", {}, flatten_chain(to_string(chain)), std::nullopt)
               .dump(2)
        << "\n";
    return kOk;
  }
  if (a.polys.size() != 2)
    throw std::invalid_argument("report needs two polynomials or --chain");
  bool ok = true;
  MultiPoly f1 = parse_member(a.polys[0], ctx, "f1", err, ok);
  MultiPoly f2 = parse_member(a.polys[1], ctx, "f2", err, ok);
  if (!ok) return kUsage;
  std::optional<uint64_t> wd;
  if (a.witness_degree >= 0) wd = static_cast<uint64_t>(a.witness_degree);
  PairReport rep = conjecture_report(f1, f2, wd);
  out << row_json(rep, "", {}, "", std::nullopt).dump(2) << "\n";
  return kOk;
}

// ---- gen ----

void emit_pair(std::ostream& out, const MultiPoly& f1, const MultiPoly& f2,
               const std::string& family, const Params& params,
               std::optional<uint64_t> witness_degree) {
  out << to_string(f1) << "\n" << to_string(f2) << "\n";
  PairReport rep = conjecture_report(f1, f2, witness_degree);
  out << row_json(rep, family, params, "", std::nullopt).dump(2) << "\n";
}

struct GenLinearArgs {
  int64_t p = 0, a = 0, m = 0, alpha = 1;
};

int cmd_gen_linear(const GenLinearArgs& a, std::ostream& out) {
  FieldCtx ctx(checked_prime(a.p));
  auto [f1, f2] = gen_linear_unit_pair(ctx, a.a, a.m, ctx.elem_signed(a.alpha));
  emit_pair(out, f1, f2, "linear",
            {{"a", std::to_string(a.a)},
             {"m", std::to_string(a.m)},
             {"alpha", std::to_string(a.alpha)}},
            static_cast<uint64_t>(a.m) * ctx.p());
  return kOk;
}

struct GenBalancedArgs {
  int64_t p = 0;
  std::string h1, h2;
};

int cmd_gen_balanced(const GenBalancedArgs& a, std::ostream& out) {
  FieldCtx ctx(checked_prime(a.p));
  UniPoly h1 = parse_unipoly(a.h1, ctx);
  UniPoly h2 = parse_unipoly(a.h2, ctx);
  auto [f1, f2] = gen_balanced_product_pair(ctx, h1, h2);
  emit_pair(out, f1, f2, "balanced",
            {{"h1", to_string(h1)}, {"h2", to_string(h2)}},
            static_cast<uint64_t>(h1.degree()) + h2.degree() + 1);
  return kOk;
}

struct GenQuadraticArgs {
  int64_t p = 0, a = 0, s = 0, alpha1 = 1;
};

int cmd_gen_quadratic(const GenQuadraticArgs& a, std::ostream& out) {
  FieldCtx ctx(checked_prime(a.p));
  auto [f1, f2] =
      gen_quadratic_unit_pair(ctx, a.a, a.s, ctx.elem_signed(a.alpha1));
  emit_pair(out, f1, f2, "quadratic",
            {{"a", std::to_string(a.a)},
             {"s", std::to_string(a.s)},
             {"alpha1", std::to_string(a.alpha1)}},
            static_cast<uint64_t>(a.s) * ctx.p());
  return kOk;
}

struct GenTypeBArgs {
  int64_t p = 0, a = 0, b = 0;
  std::string hcore = "1";
  std::string h1, h2;
};

int cmd_gen_type_b(const GenTypeBArgs& a, std::ostream& out) {
  FieldCtx ctx(checked_prime(a.p));
  MultiPoly hcore = parse_poly(a.hcore, ctx, 2);
  UniPoly h1 = parse_unipoly(a.h1, ctx);
  UniPoly h2 = parse_unipoly(a.h2, ctx);
  auto [f1, f2] = gen_type_b_pair(ctx, a.a, a.b, hcore, h1, h2);
  HomogComponent core{hcore.is_zero() ? 0 : hcore.total_degree(), hcore};
  MorphismChain one_map(
      {ElementaryMap::type_b(ctx, a.a, a.b, core, h1, h2)});
  emit_pair(out, f1, f2, "type-b",
            {{"a", std::to_string(a.a)},
             {"b", std::to_string(a.b)},
             {"hcore", to_string(hcore)},
             {"h1", to_string(h1)},
             {"h2", to_string(h2)}},
            chain_degree(one_map));
  return kOk;
}

// ---- identity ----

struct IdentityArgs {
  int64_t n = 0, p = 0;
  uint64_t count = 100, seed = 0;
};

int cmd_identity(const IdentityArgs& a, std::ostream& out, std::ostream& err) {
  if (a.n < 1 || a.n > 3) throw std::invalid_argument("-n must be 1, 2, or 3");
  const int n = static_cast<int>(a.n);
  FieldCtx ctx(checked_prime(a.p));
  auto head = [&](std::ostream& os) -> std::ostream& {
    os << "identity n=" << n << " p=" << ctx.p() << " count=" << a.count
       << " seed=" << a.seed;
    return os;
  };
  if (a.count == 0) {
    err << "warning: count is 0; the suite passes vacuously\n";
    head(out) << ": pass (0 jacobian)\n";
    return kOk;
  }
  std::mt19937_64 rng(a.seed);
  uint64_t jac = 0;
  for (uint64_t i = 0; i < a.count; ++i) {
    std::vector<MultiPoly> fs;
    for (int k = 0; k < n; ++k)
      fs.push_back(random_poly(ctx, n, rng, 6, 8, true));
    MultiPoly j = jacobian_det(fs);
    bool j_unit = j.is_constant() && !j.is_zero();
    jac += j_unit;
    if (!check_nabla_jacobian_identity(fs)) {
      head(out) << ": fail (nabla identity, tuple " << i << ")\n";
      return kMathFail;
    }
    if (n == 2) {
      std::vector<MultiPoly> probes = {MultiPoly::variable(ctx, 2, 0),
                                       MultiPoly::variable(ctx, 2, 1),
                                       random_poly(ctx, 2, rng, 3, 4, true)};
      DerivationIdentityReport rep =
          check_derivation_identities(fs[0], fs[1], probes);
      if (rep.all() != j_unit) {
        head(out) << ": fail (derivation identities, tuple " << i << ")\n";
        return kMathFail;
      }
    }
  }
  head(out) << ": pass (" << jac << " jacobian)\n";
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Jacobian pairs over prime fields: generators, analyses, "
               "identity suites, and reproducible sweeps"};
  app.require_subcommand(1);

  PairArgs check_args;
  CLI::App* check = app.add_subcommand(
      "check", "report on a pair; exit 0 iff it is a Jacobian pair");
  check->add_option("-p", check_args.p, "field characteristic (prime)")
      ->required();
  check->add_option("polys", check_args.polys, "the two polynomials")
      ->expected(0, 2);
  check->add_option("--file", check_args.file,
                    "file with one polynomial per line");

  CLI::App* gen = app.add_subcommand("gen", "generate a pair from a family");
  gen->require_subcommand(1);

  GenLinearArgs lin_args;
  CLI::App* lin = gen->add_subcommand(
      "linear", "x_i times a linear unit in the monomial u");
  lin->add_option("-p", lin_args.p, "prime")->required();
  lin->add_option("-a", lin_args.a, "u = x1^(a-1) x2^(mp-a)")->required();
  lin->add_option("-m", lin_args.m, "degree multiplier")->required();
  lin->add_option("--alpha", lin_args.alpha, "unit coefficient");

  GenBalancedArgs bal_args;
  CLI::App* bal = gen->add_subcommand(
      "balanced", "x1 h1(u), x2 h2(u) over u = x1 x2");
  bal->add_option("-p", bal_args.p, "prime")->required();
  bal->add_option("--h1", bal_args.h1, "one-variable factor")->required();
  bal->add_option("--h2", bal_args.h2, "one-variable factor")->required();

  GenQuadraticArgs quad_args;
  CLI::App* quad = gen->add_subcommand(
      "quadratic", "degree-2 unit against a degree-1 unit");
  quad->add_option("-p", quad_args.p, "prime")->required();
  quad->add_option("-a", quad_args.a, "u = x1^a x2^(sp-1-2a)")->required();
  quad->add_option("-s", quad_args.s, "degree multiplier")->required();
  quad->add_option("--alpha1", quad_args.alpha1, "unit coefficient");

  GenTypeBArgs tb_args;
  CLI::App* tb = gen->add_subcommand(
      "type-b", "x_i h_i(u) with u = x1^a x2^b hcore^p");
  tb->add_option("-p", tb_args.p, "prime")->required();
  tb->add_option("-a", tb_args.a, "x1 exponent")->required();
  tb->add_option("-b", tb_args.b, "x2 exponent")->required();
  tb->add_option("--hcore", tb_args.hcore, "homogeneous core (default 1)");
  tb->add_option("--h1", tb_args.h1, "one-variable factor")->required();
  tb->add_option("--h2", tb_args.h2, "one-variable factor")->required();

  SweepCfg sweep_cfg;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "run a family or chain grid and write a report");
  sweep->add_option("--primes", sweep_cfg.primes, "comma list of primes")
      ->required();
  sweep->add_option("--family", sweep_cfg.family,
                    "linear | quadratic | chain")
      ->required();
  sweep->add_option("--a", sweep_cfg.a, "a values (list or LO..HI)");
  sweep->add_option("--m", sweep_cfg.m, "m values");
  sweep->add_option("--alpha", sweep_cfg.alpha, "alpha values");
  sweep->add_option("--s", sweep_cfg.s, "s values");
  sweep->add_option("--alpha1", sweep_cfg.alpha1, "alpha1 values");
  sweep->add_option("--seeds", sweep_cfg.seeds, "chain seeds");
  sweep->add_option("--length", sweep_cfg.length, "chain length");
  sweep->add_option("--degree-budget", sweep_cfg.degree_budget,
                    "image degree cap (0 = 3p^2)");
  sweep->add_option("--weights", sweep_cfg.weights,
                    "kind weights w1,w2,w2s,w3,wb");
  sweep->add_option("--out", sweep_cfg.out_path, "output path (- = stdout)");
  sweep->add_option("--format", sweep_cfg.format, "json | csv");
  sweep->add_option("--jobs", sweep_cfg.jobs,
                    "worker threads (default: JACP_THREADS or cores)");

  IdentityArgs id_args;
  CLI::App* identity = app.add_subcommand(
      "identity", "verify the differential identities on random tuples");
  identity->add_option("-n", id_args.n, "tuple size (1, 2, or 3)")->required();
  identity->add_option("-p", id_args.p, "prime")->required();
  identity->add_option("--count", id_args.count, "tuples to draw");
  identity->add_option("--seed", id_args.seed, "generator seed");

  ReportArgs rep_args;
  CLI::App* report = app.add_subcommand(
      "report", "full report on a pair or a chain image; exit 0 on success");
  report->add_option("-p", rep_args.p, "prime")->required();
  report->add_option("polys", rep_args.polys, "the two polynomials")
      ->expected(0, 2);
  report->add_option("--chain", rep_args.chain,
                     "chain text; ; separates maps");
  report->add_option("--chain-file", rep_args.chain_file,
                     "file with one map per line");
  report->add_option("--witness-degree", rep_args.witness_degree,
                     "extension degree from the generating witness");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (check->parsed()) return cmd_check(check_args, out, err);
    if (gen->parsed()) {
      if (lin->parsed()) return cmd_gen_linear(lin_args, out);
      if (bal->parsed()) return cmd_gen_balanced(bal_args, out);
      if (quad->parsed()) return cmd_gen_quadratic(quad_args, out);
      if (tb->parsed()) return cmd_gen_type_b(tb_args, out);
    }
    if (sweep->parsed()) return cmd_sweep(sweep_cfg, out, err);
    if (identity->parsed()) return cmd_identity(id_args, out, err);
    if (report->parsed()) return cmd_report(rep_args, out, err);
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return kUsage;
  } catch (const ConstraintError& e) {
    if (is_math_rejection(e)) {
      err << "rejected: " << e.code() << ": " << e.what() << "\n";
      return kMathFail;
    }
    err << "error: " << e.code() << ": " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kMathFail;
  }
  return kUsage;
}

}  // namespace jacp
