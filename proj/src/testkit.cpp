#include "hahn/testkit.hpp"

#include <cassert>
#include <functional>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>

#include "hahn/json_io.hpp"

namespace hahn::testkit {

using io::json;

void GenConfig::validate() const {
  auto check = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  check(max_chain >= 1 && max_chain <= 6, "max_chain must be in [1, 6]");
  check(max_support >= 1 && max_support <= 8, "max_support must be in [1, 8]");
  check(coeff_bound >= 1 && coeff_bound <= 50,
        "coeff_bound must be in [1, 50]");
  check(shift_window >= 1 && shift_window <= 3,
        "shift_window must be in [1, 3]");
}

std::int64_t Rng::range(std::int64_t lo, std::int64_t hi) {
  assert(hi >= lo);
  std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t v;
  do {
    v = eng_();
  } while (v >= limit);
  return lo + static_cast<std::int64_t>(v % span);
}

namespace {

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

} // namespace

Rng Rng::split(std::uint64_t index) const {
  return Rng(mix(seed_ ^ mix(index)));
}

Skeleton gen_skeleton(Rng& rng, const GenConfig& cfg) {
  if (rng.coin()) return gen_finite_skeleton(rng, cfg, cfg.max_chain);
  Pos period = rng.range(1, std::min(3, cfg.max_chain));
  std::vector<Tag> tags;
  for (Pos i = 0; i < period; ++i) tags.push_back(rng.coin() ? Tag::Q : Tag::Z);
  return make_skeleton(Chain::integers(), std::move(tags));
}

Skeleton gen_finite_skeleton(Rng& rng, const GenConfig& cfg, Pos max_n) {
  Pos n = rng.range(1, std::min<Pos>(max_n, cfg.max_chain));
  std::vector<Tag> tags;
  for (Pos i = 0; i < n; ++i) tags.push_back(rng.coin() ? Tag::Q : Tag::Z);
  return make_skeleton(Chain::finite(n), std::move(tags));
}

Rat gen_coeff(Rng& rng, const GenConfig& cfg, Tag tag) {
  std::int64_t num = 0;
  while (num == 0) num = rng.range(-cfg.coeff_bound, cfg.coeff_bound);
  if (tag == Tag::Z) return Rat(num);
  Rat q(num, rng.range(1, cfg.coeff_bound));
  q.canonicalize();
  return q;
}

namespace {

// Window of positions used for supports, matrix entries, and exceptions on
// the integer chain.
constexpr Pos kWindow = 4;

std::vector<Pos> position_pool(const Skeleton& sk) {
  std::vector<Pos> pool;
  if (sk.chain().is_finite()) {
    for (Pos p = 0; p < sk.chain().size(); ++p) pool.push_back(p);
  } else {
    for (Pos p = -kWindow; p <= kWindow; ++p) pool.push_back(p);
  }
  return pool;
}

// Small rationals keep products and inverses small across long random
// composition chains.
Rat small_positive(Rng& rng) {
  Rat q(rng.range(1, 5), rng.range(1, 5));
  q.canonicalize();
  return q;
}

Rat small_signed(Rng& rng, bool integer_only, bool allow_zero) {
  std::int64_t num = rng.range(-5, 5);
  while (!allow_zero && num == 0) num = rng.range(-5, 5);
  if (integer_only) return Rat(num);
  Rat q(num, rng.range(1, 5));
  q.canonicalize();
  return q;
}

} // namespace

HahnElement gen_element(Rng& rng, const GenConfig& cfg, const Skeleton& sk) {
  std::vector<Pos> pool = position_pool(sk);
  Pos max_terms = std::min<Pos>(cfg.max_support, pool.size());
  Pos count = rng.range(0, max_terms);
  std::set<Pos> positions;
  while (static_cast<Pos>(positions.size()) < count) {
    positions.insert(pool[rng.range(0, pool.size() - 1)]);
  }
  std::map<Pos, Rat> coeffs;
  for (Pos p : positions) coeffs.emplace(p, gen_coeff(rng, cfg, sk.tag_at(p)));
  return HahnElement(sk, coeffs);
}

HahnElement gen_nonzero_element(Rng& rng, const GenConfig& cfg,
                                const Skeleton& sk) {
  for (int i = 0; i < 32; ++i) {
    HahnElement e = gen_element(rng, cfg, sk);
    if (!e.is_zero()) return e;
  }
  return HahnElement::term(sk, 0, gen_coeff(rng, cfg, sk.tag_at(0)));
}

HahnElement gen_positive_element(Rng& rng, const GenConfig& cfg,
                                 const Skeleton& sk) {
  HahnElement e = gen_nonzero_element(rng, cfg, sk);
  return is_positive(e) ? e : -e;
}

TriMatrix gen_trimatrix(Rng& rng, const GenConfig& cfg, const Skeleton& sk,
                        MatrixClass cls) {
  (void)cfg;
  std::vector<Pos> pool = position_pool(sk);
  std::map<TriMatrix::Key, Rat> entries;

  bool iso_diag = cls != MatrixClass::Delta;
  bool unit_diag = cls == MatrixClass::U1;

  Rat def(1);
  if (!unit_diag) {
    if (iso_diag) {
      // Z positions only admit the identity iso. On finite chains they are
      // pinned explicitly below, so a fractional default stays admissible;
      // on the integer chain a Z residue always has uncovered positions.
      bool z_uncovered = !sk.chain().is_finite() && sk.has_tag(Tag::Z);
      def = !z_uncovered && sk.has_tag(Tag::Q) ? small_positive(rng) : Rat(1);
    } else {
      def = sk.has_tag(Tag::Z) ? Rat(rng.range(-3, 3))
                               : small_signed(rng, false, true);
    }
    Pos overrides = rng.range(0, 2);
    for (Pos i = 0; i < overrides; ++i) {
      Pos p = pool[rng.range(0, pool.size() - 1)];
      Tag tag = sk.tag_at(p);
      Rat v;
      if (iso_diag) {
        if (tag == Tag::Z) continue; // only the identity is an iso on Z
        v = small_positive(rng);
      } else {
        v = small_signed(rng, tag == Tag::Z, true);
      }
      entries[{p, p}] = v;
    }
  }
  // Iso diagonals on finite chains must still be admissible at Z positions;
  // the constructor expands the default there, so pin those to 1.
  if (iso_diag && sk.chain().is_finite()) {
    for (Pos p = 0; p < sk.chain().size(); ++p) {
      if (sk.tag_at(p) == Tag::Z) entries[{p, p}] = 1;
    }
  }

  if (cls != MatrixClass::Ud) {
    Pos tries = rng.range(0, 4);
    for (Pos i = 0; i < tries; ++i) {
      Pos a = pool[rng.range(0, pool.size() - 1)];
      Pos b = pool[rng.range(0, pool.size() - 1)];
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      Tag dom = sk.tag_at(a);
      Tag cod = sk.tag_at(b);
      if (cod == Tag::Z && dom == Tag::Q) continue; // only the zero hom
      entries[{a, b}] =
          small_signed(rng, dom == Tag::Z && cod == Tag::Z, false);
    }
  }

  TriMatrix m(sk, def, entries);
  switch (cls) {
    case MatrixClass::Delta:
      break;
    case MatrixClass::T:
    case MatrixClass::U:
      assert(m.in_T());
      break;
    case MatrixClass::U1:
      assert(m.in_U1());
      break;
    case MatrixClass::Ud:
      assert(m.in_T() && m.is_diagonal());
      break;
  }
  return m;
}

SkeletonAut gen_skeleton_aut(Rng& rng, const GenConfig& cfg,
                             const Skeleton& sk) {
  Pos shift = 0;
  if (!sk.chain().is_finite()) {
    Pos period = sk.period();
    Pos kmax = cfg.shift_window / period;
    shift = period * rng.range(-kmax, kmax);
  }
  std::map<Pos, Rat> exceptions;
  Pos count = rng.range(0, 3);
  std::vector<Pos> pool = position_pool(sk);
  for (Pos i = 0; i < count; ++i) {
    Pos p = pool[rng.range(0, pool.size() - 1)];
    if (sk.tag_at(p) == Tag::Z) continue;
    exceptions[p] = small_positive(rng);
  }
  return SkeletonAut(sk, shift, small_positive(rng), exceptions);
}

SkeletonAut gen_component_aut(Rng& rng, const GenConfig& cfg,
                              const Skeleton& sk) {
  SkeletonAut t = gen_skeleton_aut(rng, cfg, sk);
  return SkeletonAut(sk, 0, t.default_iso(), t.exceptions());
}

VAut gen_vaut(Rng& rng, const GenConfig& cfg, const Skeleton& sk) {
  return VAut(gen_trimatrix(rng, cfg, sk, MatrixClass::U1),
              gen_skeleton_aut(rng, cfg, sk));
}

GroupFamily gen_family(Rng& rng, const GenConfig& cfg, const Skeleton& sk) {
  if (sk.chain().is_finite()) {
    Pos n = sk.chain().size();
    std::vector<std::vector<Pos>> gens;
    Pos count = rng.range(0, 3);
    for (Pos i = 0; i < count; ++i) {
      std::uint64_t mask =
          static_cast<std::uint64_t>(rng.range(0, (1 << n) - 1));
      gens.push_back(mask_to_set(mask));
    }
    return family_from_generators(sk, gens);
  }
  switch (rng.range(0, 2)) {
    case 0:
      return GroupFamily::all_finite(sk);
    case 1:
      return GroupFamily::finite_within(
          sk, GroupFamily::HalfLine{rng.range(-cfg.shift_window,
                                              cfg.shift_window)});
    default: {
      Pos modulus = rng.range(1, 3);
      std::vector<Pos> residues;
      for (Pos r = 0; r < modulus; ++r) {
        if (rng.coin()) residues.push_back(r);
      }
      return GroupFamily::finite_within(
          sk, GroupFamily::Periodic{modulus, residues});
    }
  }
}

bool closed_family_candidate(std::uint64_t members, int n) {
  std::uint64_t subsets = std::uint64_t{1} << n;
  auto has = [members](std::uint64_t m) { return (members >> m) & 1; };
  if (!has(0)) return false;
  for (std::uint64_t a = 0; a < subsets; ++a) {
    if (!has(a)) continue;
    for (std::uint64_t b = 0; b <= a; ++b) {
      if (has(b) && !has(a | b)) return false;
    }
    std::uint64_t s = 0;
    do {
      if (!has(s)) return false;
      s = (s - a) & a;
    } while (s != 0);
  }
  return true;
}

std::vector<GroupFamily> enumerate_group_families(const Skeleton& sk) {
  if (!sk.chain().is_finite() || sk.chain().size() > 4) {
    throw DomainError(Errc::chain_too_large,
                      "exhaustive family enumeration is capped at |Γ| = 4");
  }
  int n = static_cast<int>(sk.chain().size());
  std::uint64_t candidates = std::uint64_t{1} << (std::uint64_t{1} << n);
  std::vector<GroupFamily> families;
  for (std::uint64_t members = 0; members < candidates; ++members) {
    if (!closed_family_candidate(members, n)) continue;
    std::vector<std::uint64_t> sets;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
      if ((members >> m) & 1) sets.push_back(m);
    }
    families.push_back(GroupFamily::explicit_closed(sk, std::move(sets)));
  }
  return families;
}

HahnElement oracle_apply(const HahnElement& a, const TriMatrix& m) {
  if (a.skeleton() != m.skeleton()) {
    throw DomainError(Errc::skeleton_mismatch,
                      "operands live over different skeletons");
  }
  // b_β = Σ_{α ∈ supp(a)} σ_{αβ}(a_α), per column, no row sparsity.
  std::set<Pos> columns;
  if (a.skeleton().chain().is_finite()) {
    for (Pos p = 0; p < a.skeleton().chain().size(); ++p) columns.insert(p);
  } else {
    for (const auto& [p, c] : a.coeffs()) columns.insert(p);
    for (const auto& [k, v] : m.entries()) columns.insert(k.second);
  }
  std::map<Pos, Rat> out;
  for (Pos beta : columns) {
    Rat sum(0);
    for (const auto& [alpha, coeff] : a.coeffs()) {
      sum += m.entry_at(alpha, beta) * coeff;
    }
    if (sum != 0) out.emplace(beta, sum);
  }
  return HahnElement(a.skeleton(), out);
}

// ---------------------------------------------------------------------------
// selftest

namespace {

json element_json(const HahnElement& a) { return io::to_json(a); }

// Greedy shrinking: drop one component at a time while the predicate still
// fails.
HahnElement shrink_element(
    const std::function<bool(const HahnElement&)>& still_fails,
    HahnElement e) {
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& [p, c] : e.coeffs()) {
      std::map<Pos, Rat> fewer = e.coeffs();
      fewer.erase(p);
      HahnElement candidate(e.skeleton(), fewer);
      if (still_fails(candidate)) {
        e = candidate;
        progress = true;
        break;
      }
    }
  }
  return e;
}

TriMatrix shrink_matrix(
    const std::function<bool(const TriMatrix&)>& still_fails, TriMatrix m) {
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& [k, v] : m.entries()) {
      std::map<TriMatrix::Key, Rat> fewer = m.entries();
      fewer.erase(k);
      TriMatrix candidate(m.skeleton(), m.default_diag(), fewer);
      if (still_fails(candidate)) {
        m = candidate;
        progress = true;
        break;
      }
    }
  }
  return m;
}

struct SuiteContext {
  Rng rng;
  GenConfig cfg;
  int cases;
};

using SuiteFn = std::function<std::optional<json>(SuiteContext&)>;

struct Suite {
  const char* name;
  SuiteFn run;
};

std::optional<json> suite_skeleton_group_laws(SuiteContext& ctx) {
  for (int i = 0; i < ctx.cases; ++i) {
    Skeleton sk = gen_skeleton(ctx.rng, ctx.cfg);
    SkeletonAut s = gen_skeleton_aut(ctx.rng, ctx.cfg, sk);
    SkeletonAut t = gen_skeleton_aut(ctx.rng, ctx.cfg, sk);
    SkeletonAut u = gen_skeleton_aut(ctx.rng, ctx.cfg, sk);
    bool ok =
        compose_skeleton_auts(compose_skeleton_auts(s, t), u) ==
            compose_skeleton_auts(s, compose_skeleton_auts(t, u)) &&
        compose_skeleton_auts(t, invert_skeleton_aut(t)) ==
            SkeletonAut::identity(sk) &&
        compose_skeleton_auts(invert_skeleton_aut(t), t) ==
            SkeletonAut::identity(sk) &&
        compose_skeleton_auts(SkeletonAut::identity(sk), t) == t;
    if (!ok) {
      return json{{"skeleton", io::to_json(sk)},
                  {"s", io::to_json(s)},
                  {"t", io::to_json(t)},
                  {"u", io::to_json(u)}};
    }
  }
  return std::nullopt;
}

std::optional<json> suite_hom_closure(SuiteContext& ctx) {
  const Tag tags[] = {Tag::Z, Tag::Q};
  for (int i = 0; i < ctx.cases; ++i) {
    Tag a = tags[ctx.rng.range(0, 1)];
    Tag b = tags[ctx.rng.range(0, 1)];
    Tag c = tags[ctx.rng.range(0, 1)];
    auto pick = [&](Tag dom, Tag cod) {
      if (cod == Tag::Z && dom == Tag::Q) return Rat(0);
      return small_signed(ctx.rng, dom == Tag::Z && cod == Tag::Z, true);
    };
    ComponentHom f = validate_hom(a, b, pick(a, b));
    ComponentHom g = validate_hom(b, c, pick(b, c));
    ComponentHom h = validate_hom(a, b, pick(a, b));
    ComponentHom gf = compose_homs(g, f); // throws if closure fails
    ComponentHom fh = add_homs(f, h);
    if (!hom_admissible(gf.domain, gf.codomain, gf.multiplier) ||
        !hom_admissible(fh.domain, fh.codomain, fh.multiplier)) {
      return json{{"f", format_rat(f.multiplier)},
                  {"g", format_rat(g.multiplier)}};
    }
  }
  return std::nullopt;
}

std::optional<json> suite_valued_group(SuiteContext& ctx) {
  for (int i = 0; i < ctx.cases; ++i) {
    Skeleton sk = gen_skeleton(ctx.rng, ctx.cfg);
    HahnElement a = gen_element(ctx.rng, ctx.cfg, sk);
    HahnElement b = gen_element(ctx.rng, ctx.cfg, sk);
    auto fails = [](const HahnElement& x, const HahnElement& y) {
      Valuation vx = valuation(x);
      Valuation vy = valuation(y);
      Valuation vs = valuation(x + y);
      // min(vx, vy) with infinity on top
      Valuation lower = vx.is_infinite() ? vy
                        : vy.is_infinite()
                            ? vx
                            : Valuation::at(std::min(vx.position(),
                                                     vy.position()));
      if (!lower.is_infinite() && !vs.at_least(lower.position())) return true;
      if (vs.is_infinite() && !lower.is_infinite()) {
        // v(x+y) = ∞ needs y = -x, fine: still >= min
      }
      if (vx != vy && vs != lower) return true;
      if (valuation(-x) != vx) return true;
      return false;
    };
    if (fails(a, b)) {
      auto fix_b = [&](const HahnElement& x) { return fails(x, b); };
      HahnElement sa = shrink_element(fix_b, a);
      auto fix_a = [&](const HahnElement& y) { return fails(sa, y); };
      HahnElement sb = shrink_element(fix_a, b);
      return json{{"skeleton", io::to_json(sk)},
                  {"a", element_json(sa)},
                  {"b", element_json(sb)}};
    }
  }
  return std::nullopt;
}

std::optional<json> suite_lex_order(SuiteContext& ctx) {
  for (int i = 0; i < ctx.cases; ++i) {
    Skeleton sk = gen_skeleton(ctx.rng, ctx.cfg);
    HahnElement a = gen_element(ctx.rng, ctx.cfg, sk);
    HahnElement b = gen_element(ctx.rng, ctx.cfg, sk);
    HahnElement c = gen_element(ctx.rng, ctx.cfg, sk);
    bool ok = lex_compare(a, b) == lex_compare(a + c, b + c);
    std::strong_ordering ab = lex_compare(a, b);
    std::strong_ordering ba = lex_compare(b, a);
    ok = ok && ((ab == std::strong_ordering::equal) ==
                (ba == std::strong_ordering::equal));
    ok = ok && ((ab == std::strong_ordering::less) ==
                (ba == std::strong_ordering::greater));
    // Compatibility: positivity is the sign of the leading coefficient.
    if (!a.is_zero()) {
      bool pos = lex_compare(a, HahnElement::zero(sk)) ==
                 std::strong_ordering::greater;
      ok = ok && pos == (a.coeffs().begin()->second > 0);
    }
    if (!ok) {
      return json{{"skeleton", io::to_json(sk)},
                  {"a", element_json(a)},
                  {"b", element_json(b)},
                  {"c", element_json(c)}};
    }
  }
  return std::nullopt;
}

std::optional<json> suite_convex_subgroups(SuiteContext& ctx) {
  for (int i = 0; i < ctx.cases; ++i) {
    Skeleton sk = gen_skeleton(ctx.rng, ctx.cfg);
    std::vector<Pos> pool = position_pool(sk);
    Pos gamma = pool[ctx.rng.range(0, pool.size() - 1)];
    HahnElement x = gen_element(ctx.rng, ctx.cfg, sk);
    HahnElement y = gen_element(ctx.rng, ctx.cfg, sk);
    bool ok = true;
    if (in_convex_subgroup(x, gamma) && in_convex_subgroup(y, gamma)) {
      ok = in_convex_subgroup(x + y, gamma) && in_convex_subgroup(-x, gamma);
    }
    // Convexity: 0 <= y <= x and x ∈ C_γ imply y ∈ C_γ.
    if (ok && in_convex_subgroup(x, gamma) && is_positive(x)) {
      HahnElement z = gen_element(ctx.rng, ctx.cfg, sk);
      if (lex_compare(z, HahnElement::zero(sk)) >= 0 &&
          lex_compare(z, x) <= 0) {
        ok = in_convex_subgroup(z, gamma);
      }
    }
    // Nesting: γ <= δ implies C_δ ⊆ C_γ.
    Pos delta = pool[ctx.rng.range(0, pool.size() - 1)];
    if (ok && gamma <= delta && in_convex_subgroup(x, delta)) {
      ok = in_convex_subgroup(x, gamma);
    }
    if (!ok) {
      return json{{"skeleton", io::to_json(sk)},
                  {"gamma", gamma},
                  {"x", element_json(x)},
                  {"y", element_json(y)}};
    }
  }
  return std::nullopt;
}

std::optional<json> suite_endring(SuiteContext& ctx) {
  for (int i = 0; i < ctx.cases; ++i) {
    Skeleton sk = gen_skeleton(ctx.rng, ctx.cfg);
    HahnElement a = gen_element(ctx.rng, ctx.cfg, sk);
    HahnElement b = gen_element(ctx.rng, ctx.cfg, sk);
    TriMatrix m = gen_trimatrix(ctx.rng, ctx.cfg, sk, MatrixClass::Delta);
    TriMatrix n = gen_trimatrix(ctx.rng, ctx.cfg, sk, MatrixClass::Delta);
    auto fails = [&](const HahnElement& x, const TriMatrix& mm,
                     const TriMatrix& nn) {
      return apply(x, multiply(mm, nn)) != apply(apply(x, mm), nn) ||
             apply(x + b, mm) != apply(x, mm) + apply(b, mm) ||
             oracle_apply(x, mm) != apply(x, mm);
    };
    if (fails(a, m, n)) {
      auto fix = [&](const HahnElement& x) { return fails(x, m, n); };
      HahnElement sa = shrink_element(fix, a);
      auto fixm = [&](const TriMatrix& mm) { return fails(sa, mm, n); };
      TriMatrix sm = shrink_matrix(fixm, m);
      return json{{"skeleton", io::to_json(sk)},
                  {"a", element_json(sa)},
                  {"M", io::to_json(sm)},
                  {"N", io::to_json(n)}};
    }
  }
  return std::nullopt;
}

std::optional<json> suite_conrad(SuiteContext& ctx) {
  for (int i = 0; i < ctx.cases; ++i) {
    Skeleton sk = gen_skeleton(ctx.rng, ctx.cfg);
    HahnElement a = gen_positive_element(ctx.rng, ctx.cfg, sk);
    TriMatrix m = gen_trimatrix(ctx.rng, ctx.cfg, sk, MatrixClass::T);
    auto fails = [&](const HahnElement& x, const TriMatrix& mm) {
      if (x.is_zero()) return false;
      HahnElement y = apply(x, mm);
      return !is_positive(y) || valuation(y) != valuation(x);
    };
    if (fails(a, m)) {
      auto fix = [&](const TriMatrix& mm) { return fails(a, mm); };
      return json{{"skeleton", io::to_json(sk)},
                  {"a", element_json(a)},
                  {"M", io::to_json(shrink_matrix(fix, m))}};
    }
    // Unitriangular characterization: leading term fixed exactly for U1.
    TriMatrix u1 = gen_trimatrix(ctx.rng, ctx.cfg, sk, MatrixClass::U1);
    if (!a.is_zero()) {
      HahnElement y = apply(a, u1);
      Valuation v = valuation(a);
      if (valuation(y) != v ||
          y.coeff_at(v.position()) != a.coeff_at(v.position())) {
        return json{{"skeleton", io::to_json(sk)},
                    {"a", element_json(a)},
                    {"U1", io::to_json(u1)}};
      }
    }
  }
  return std::nullopt;
}

std::optional<json> suite_factorization(SuiteContext& ctx) {
  for (int i = 0; i < ctx.cases; ++i) {
    Skeleton sk = gen_skeleton(ctx.rng, ctx.cfg);
    TriMatrix m = gen_trimatrix(ctx.rng, ctx.cfg, sk, MatrixClass::U);
    auto [m1, md] = factor_U1_Ud(m);
    bool ok = m1.in_U1() && md.is_diagonal() && md.in_T() &&
              multiply(m1, md) == m;
    auto [m1b, mdb] = factor_U1_Ud(multiply(m1, md));
    ok = ok && m1b == m1 && mdb == md;
    // Normality of U1 and trivial intersection with Ud.
    TriMatrix p = gen_trimatrix(ctx.rng, ctx.cfg, sk, MatrixClass::U);
    TriMatrix n = gen_trimatrix(ctx.rng, ctx.cfg, sk, MatrixClass::U1);
    ok = ok && multiply(multiply(p, n), invert(p)).in_U1();
    TriMatrix d = gen_trimatrix(ctx.rng, ctx.cfg, sk, MatrixClass::Ud);
    if (d.in_U1() && d != TriMatrix::identity(sk)) ok = false;
    if (!ok) {
      return json{{"skeleton", io::to_json(sk)}, {"M", io::to_json(m)}};
    }
  }
  return std::nullopt;
}

std::optional<json> suite_hofberger(SuiteContext& ctx) {
  for (int i = 0; i < ctx.cases; ++i) {
    Skeleton sk = gen_skeleton(ctx.rng, ctx.cfg);
    VAut sigma = gen_vaut(ctx.rng, ctx.cfg, sk);
    auto [internal, external] = decompose(sigma);
    bool ok = is_internal(internal) &&
              external == canonical_lift(induced_skeleton_aut(sigma)) &&
              compose(internal, external) == sigma;
    auto [i2, e2] = decompose(compose(internal, external));
    ok = ok && i2 == internal && e2 == external;
    VAut other = gen_vaut(ctx.rng, ctx.cfg, sk);
    ok = ok &&
         is_internal(compose(compose(other, internal), invert(other)));
    if (!ok) {
      return json{{"skeleton", io::to_json(sk)},
                  {"sigma", io::to_json(sigma)}};
    }
  }
  return std::nullopt;
}

std::optional<json> suite_section(SuiteContext& ctx) {
  for (int i = 0; i < ctx.cases; ++i) {
    Skeleton sk = gen_skeleton(ctx.rng, ctx.cfg);
    SkeletonAut s = gen_skeleton_aut(ctx.rng, ctx.cfg, sk);
    SkeletonAut t = gen_skeleton_aut(ctx.rng, ctx.cfg, sk);
    bool ok = induced_skeleton_aut(canonical_lift(t)) == t &&
              canonical_lift(compose_skeleton_auts(s, t)) ==
                  compose(canonical_lift(s), canonical_lift(t));
    if (!ok) {
      return json{{"skeleton", io::to_json(sk)},
                  {"s", io::to_json(s)},
                  {"t", io::to_json(t)}};
    }
  }
  return std::nullopt;
}

std::optional<json> suite_h_commutes(SuiteContext& ctx) {
  for (int i = 0; i < ctx.cases; ++i) {
    Skeleton sk = gen_skeleton(ctx.rng, ctx.cfg);
    VAut sigma = gen_vaut(ctx.rng, ctx.cfg, sk);
    HahnElement g = gen_nonzero_element(ctx.rng, ctx.cfg, sk);
    Pos vg = valuation(g).position();
    Pos vsg = valuation(aut_apply(sigma, g)).position();
    for (int k = 0; k < 8; ++k) {
      HahnElement x = gen_element(ctx.rng, ctx.cfg, sk);
      if (in_convex_subgroup(x, vg) !=
          in_convex_subgroup(aut_apply(sigma, x), vsg)) {
        return json{{"skeleton", io::to_json(sk)},
                    {"sigma", io::to_json(sigma)},
                    {"g", element_json(g)},
                    {"x", element_json(x)}};
      }
    }
  }
  return std::nullopt;
}

std::optional<json> suite_equivariance(SuiteContext& ctx) {
  for (int i = 0; i < ctx.cases; ++i) {
    Skeleton sk = gen_skeleton(ctx.rng, ctx.cfg);
    VAut sigma = gen_vaut(ctx.rng, ctx.cfg, sk);
    HahnElement a = gen_nonzero_element(ctx.rng, ctx.cfg, sk);
    HahnElement b = gen_element(ctx.rng, ctx.cfg, sk);
    bool ok = valuation(aut_apply(sigma, a)) ==
              Valuation::at(induced_chain_aut(sigma)(valuation(a).position()));
    ok = ok && is_order_preserving_aut(sigma);
    ok = ok && lex_compare(a, b) ==
                   lex_compare(aut_apply(sigma, a), aut_apply(sigma, b));
    if (!ok) {
      return json{{"skeleton", io::to_json(sk)},
                  {"sigma", io::to_json(sigma)},
                  {"a", element_json(a)},
                  {"b", element_json(b)}};
    }
  }
  return std::nullopt;
}

std::optional<json> suite_rayner_subgroup(SuiteContext& ctx) {
  for (int i = 0; i < ctx.cases; ++i) {
    Skeleton sk = gen_skeleton(ctx.rng, ctx.cfg);
    GroupFamily family = gen_family(ctx.rng, ctx.cfg, sk);
    HahnElement a = gen_element(ctx.rng, ctx.cfg, sk);
    HahnElement b = gen_element(ctx.rng, ctx.cfg, sk);
    if (rayner_contains(family, a) && rayner_contains(family, b)) {
      if (!rayner_contains(family, a + b) || !rayner_contains(family, -a)) {
        return json{{"skeleton", io::to_json(sk)},
                    {"family", io::to_json(family)},
                    {"a", element_json(a)},
                    {"b", element_json(b)}};
      }
    }
  }
  return std::nullopt;
}

std::optional<json> suite_rayner_equivalence(SuiteContext& ctx) {
  // Exhaustive over |Γ| <= 3 with identity-chain-part automorphisms.
  for (Pos n = 1; n <= 3; ++n) {
    std::vector<Tag> tags;
    for (Pos i = 0; i < n; ++i) tags.push_back(ctx.rng.coin() ? Tag::Q : Tag::Z);
    Skeleton sk = make_skeleton(Chain::finite(n), tags);
    for (const GroupFamily& family : enumerate_group_families(sk)) {
      for (int k = 0; k < 3; ++k) {
        SkeletonAut t = k == 0 ? SkeletonAut::identity(sk)
                               : gen_component_aut(ctx.rng, ctx.cfg, sk);
        if (is_stable_setwise(family, t) != canonical_lift_closed(family, t)) {
          return json{{"skeleton", io::to_json(sk)},
                      {"family", io::to_json(family)},
                      {"t", io::to_json(t)}};
        }
      }
    }
  }
  // Symbolic families on the integer chain against every window shift.
  Skeleton zq = make_skeleton(Chain::integers(), {Tag::Q});
  std::vector<GroupFamily> families{GroupFamily::all_finite(zq)};
  for (Pos bound = -2; bound <= 2; ++bound) {
    families.push_back(
        GroupFamily::finite_within(zq, GroupFamily::HalfLine{bound}));
  }
  families.push_back(GroupFamily::finite_within(
      zq, GroupFamily::Periodic{2, std::vector<Pos>{0}}));
  for (const GroupFamily& family : families) {
    for (Pos shift = -3; shift <= 3; ++shift) {
      SkeletonAut t(zq, shift, 1, {});
      if (is_stable_setwise(family, t) != canonical_lift_closed(family, t)) {
        return json{{"family", io::to_json(family)}, {"shift", shift}};
      }
    }
  }
  return std::nullopt;
}

std::optional<json> suite_serialization(SuiteContext& ctx) {
  for (int i = 0; i < ctx.cases; ++i) {
    Skeleton sk = gen_skeleton(ctx.rng, ctx.cfg);
    if (io::skeleton_from_json(io::to_json(sk)) != sk) {
      return json{{"skeleton", io::to_json(sk)}};
    }
    SkeletonAut t = gen_skeleton_aut(ctx.rng, ctx.cfg, sk);
    if (io::skeleton_aut_from_json(sk, io::to_json(t)) != t) {
      return json{{"skeleton_aut", io::to_json(t)}};
    }
    HahnElement a = gen_element(ctx.rng, ctx.cfg, sk);
    if (io::element_from_json(sk, io::to_json(a)) != a) {
      return json{{"element", io::to_json(a)}};
    }
    if (io::parse_element_expr(sk, io::format_element_expr(a)) != a) {
      return json{{"element_expr", io::format_element_expr(a)}};
    }
    TriMatrix m = gen_trimatrix(ctx.rng, ctx.cfg, sk, MatrixClass::Delta);
    if (io::trimatrix_from_json(sk, io::to_json(m)) != m) {
      return json{{"trimatrix", io::to_json(m)}};
    }
    VAut sigma = gen_vaut(ctx.rng, ctx.cfg, sk);
    if (io::vaut_from_json(sk, io::to_json(sigma)) != sigma) {
      return json{{"vaut", io::to_json(sigma)}};
    }
    GroupFamily family = gen_family(ctx.rng, ctx.cfg, sk);
    if (io::family_from_json(sk, io::to_json(family)) != family) {
      return json{{"family", io::to_json(family)}};
    }
  }
  return std::nullopt;
}

std::optional<json> suite_lexsum_convex(SuiteContext& ctx) {
  for (int i = 0; i < ctx.cases / 4 + 1; ++i) {
    Skeleton sk1 = gen_finite_skeleton(ctx.rng, ctx.cfg, 3);
    Skeleton sk2 = gen_finite_skeleton(ctx.rng, ctx.cfg, 3);
    VAut s1 = gen_vaut(ctx.rng, ctx.cfg, sk1);
    VAut s2 = gen_vaut(ctx.rng, ctx.cfg, sk2);
    VAut lifted = lex_sum_lift(s1, s2);
    HahnElement a1 = gen_element(ctx.rng, ctx.cfg, sk1);
    HahnElement a2 = gen_element(ctx.rng, ctx.cfg, sk2);
    bool ok = aut_apply(lifted, lex_embed(sk1, sk2, a1, 1)) ==
                  lex_embed(sk1, sk2, aut_apply(s1, a1), 1) &&
              aut_apply(lifted, lex_embed(sk1, sk2, a2, 2)) ==
                  lex_embed(sk1, sk2, aut_apply(s2, a2), 2);
    if (!ok) {
      return json{{"sk1", io::to_json(sk1)},
                  {"sk2", io::to_json(sk2)},
                  {"s1", io::to_json(s1)},
                  {"s2", io::to_json(s2)}};
    }
    // Coherent convex family: derived blocks must assemble to the original.
    Skeleton sk = gen_finite_skeleton(ctx.rng, ctx.cfg, 5);
    TriMatrix full = gen_trimatrix(ctx.rng, ctx.cfg, sk, MatrixClass::U);
    std::vector<TriMatrix> blocks{full};
    for (Pos g = 1; g < sk.chain().size(); ++g) {
      const TriMatrix& prev = blocks.back();
      std::map<TriMatrix::Key, Rat> entries;
      for (const auto& [k, v] : prev.entries()) {
        if (k.first >= 1) entries.emplace(TriMatrix::Key{k.first - 1, k.second - 1}, v);
      }
      blocks.emplace_back(suffix_skeleton(sk, g), prev.default_diag(),
                          entries);
    }
    VAut assembled =
        lift_from_convex_family(ConvexFamily(sk, 0, blocks));
    HahnElement x = gen_element(ctx.rng, ctx.cfg, sk);
    if (aut_apply(assembled, x) != apply(x, full)) {
      return json{{"skeleton", io::to_json(sk)}, {"full", io::to_json(full)}};
    }
  }
  return std::nullopt;
}

} // namespace

int run_selftest(const SelftestOptions& options, std::ostream& out) {
  GenConfig cfg;
  cfg.seed = options.seed;
  cfg.max_chain = options.max_chain;
  cfg.validate();

  const Suite suites[] = {
      {"skeleton-aut-group-laws", suite_skeleton_group_laws},
      {"component-hom-closure", suite_hom_closure},
      {"element-valued-group", suite_valued_group},
      {"lex-order", suite_lex_order},
      {"convex-subgroups", suite_convex_subgroups},
      {"endring-oracle", suite_endring},
      {"conrad-order-preservation", suite_conrad},
      {"factorization-U1-Ud", suite_factorization},
      {"hofberger-decomposition", suite_hofberger},
      {"section-lift-homomorphism", suite_section},
      {"h-commutes-C", suite_h_commutes},
      {"aut-equivariance", suite_equivariance},
      {"rayner-subgroup", suite_rayner_subgroup},
      {"rayner-equivalence", suite_rayner_equivalence},
      {"serialization-round-trip", suite_serialization},
      {"lexsum-and-convex-lift", suite_lexsum_convex},
  };

  std::uint64_t stream = 0;
  Rng base(cfg.seed);
  for (const Suite& suite : suites) {
    SuiteContext ctx{base.split(stream++), cfg, options.cases};
    std::optional<json> failure = suite.run(ctx);
    if (failure) {
      json report{{"suite", suite.name},
                  {"seed", cfg.seed},
                  {"counterexample", *failure}};
      out << report.dump(2) << "\n";
      return 1;
    }
    out << "ok " << suite.name << " (" << options.cases << " cases)\n";
  }
  return 0;
}

} // namespace hahn::testkit
