#include "hahn/autdecomp.hpp"

#include <algorithm>
#include <string>

namespace hahn {

namespace {

void check_same_skeleton(const Skeleton& a, const Skeleton& b) {
  if (a != b) {
    throw DomainError(Errc::skeleton_mismatch,
                      "operands live over different skeletons");
  }
}

} // namespace

HahnElement canonical_lift_apply(const SkeletonAut& t, const HahnElement& a) {
  check_same_skeleton(t.skeleton(), a.skeleton());
  std::map<Pos, Rat> coeffs;
  for (const auto& [p, c] : a.coeffs()) {
    coeffs.emplace(t.map_pos(p), t.component_at(p) * c);
  }
  return HahnElement(a.skeleton(), coeffs);
}

VAut::VAut(const TriMatrix& correction, const SkeletonAut& skel_part)
    : correction_(correction), skel_(skel_part) {
  check_same_skeleton(correction_.skeleton(), skel_.skeleton());
  if (!correction_.in_U1()) {
    throw DomainError(Errc::not_in_u,
                      "canonical form needs a unitriangular correction; "
                      "use from_parts to fold a diagonal");
  }
}

VAut VAut::identity(const Skeleton& sk) {
  return VAut(TriMatrix::identity(sk), SkeletonAut::identity(sk));
}

VAut VAut::from_parts(const TriMatrix& correction,
                      const SkeletonAut& skel_part) {
  auto [m1, md] = factor_U1_Ud(correction);
  // The diagonal factor is the canonical lift of a component-only skeleton
  // automorphism; fold it: N ∘ Ψ(d) ∘ Ψ(t) = N ∘ Ψ(d ∘ t).
  std::map<Pos, Rat> components;
  for (const auto& [k, v] : md.entries()) components.emplace(k.first, v);
  SkeletonAut d(md.skeleton(), 0, md.default_diag(), components);
  return VAut(m1, compose_skeleton_auts(d, skel_part));
}

HahnElement aut_apply(const VAut& sigma, const HahnElement& a) {
  return apply(canonical_lift_apply(sigma.skel_part(), a), sigma.correction());
}

VAut canonical_lift(const SkeletonAut& t) {
  return VAut(TriMatrix::identity(t.skeleton()), t);
}

SkeletonAut induced_skeleton_aut(const VAut& sigma) {
  return sigma.skel_part();
}

ChainAut induced_chain_aut(const VAut& sigma) {
  return sigma.skel_part().chain_part();
}

bool is_internal(const VAut& sigma) {
  return induced_skeleton_aut(sigma).is_identity();
}

std::pair<VAut, VAut> decompose(const VAut& sigma) {
  VAut external = canonical_lift(induced_skeleton_aut(sigma));
  VAut internal = compose(sigma, invert(external));
  return {internal, external};
}

VAut compose(const VAut& s1, const VAut& s2) {
  check_same_skeleton(s1.skeleton(), s2.skeleton());
  // σ1 ∘ σ2 = N1 ∘ Ψ(t1) ∘ N2 ∘ Ψ(t2)
  //         = N1 ∘ (Ψ(t1) N2 Ψ(t1)⁻¹) ∘ Ψ(t1 ∘ t2).
  // The conjugated correction acts before N1, and multiply(M, N) applies M
  // first.
  TriMatrix conjugated = conjugate_by_lift(s2.correction(), s1.skel_part());
  return VAut(multiply(conjugated, s1.correction()),
              compose_skeleton_auts(s1.skel_part(), s2.skel_part()));
}

VAut invert(const VAut& sigma) {
  SkeletonAut t_inv = invert_skeleton_aut(sigma.skel_part());
  return VAut(conjugate_by_lift(invert(sigma.correction()), t_inv), t_inv);
}

bool is_order_preserving_aut(const VAut& sigma) {
  return sigma.correction().in_T();
}

EnhancedFactors factor_enhanced(const VAut& sigma) {
  const Skeleton& sk = sigma.skeleton();
  const SkeletonAut& t = sigma.skel_part();
  Pos shift = t.chain_part().shift;
  SkeletonAut chain_shift(sk, shift, 1, {});
  std::map<Pos, Rat> components;
  for (const auto& [p, q] : t.exceptions()) components.emplace(p + shift, q);
  SkeletonAut diagonal(sk, 0, t.default_iso(), components);
  return EnhancedFactors{sigma.correction(), diagonal, chain_shift};
}

Skeleton suffix_skeleton(const Skeleton& sk, Pos from) {
  if (!sk.chain().is_finite()) {
    throw DomainError(Errc::unsupported_descriptor,
                      "suffix skeletons are only defined for finite chains");
  }
  if (from < 0 || from >= sk.chain().size()) {
    throw DomainError(Errc::position_out_of_range,
                      "suffix start " + std::to_string(from) +
                          " is outside the chain");
  }
  std::vector<Tag> tags(sk.tags().begin() + from, sk.tags().end());
  return Skeleton(Chain::finite(sk.chain().size() - from), std::move(tags));
}

IncoherentFamilyError::IncoherentFamilyError(Pos delta_, Pos gamma_, Pos row_,
                                             Pos col_)
    : DomainError(Errc::incoherent_family,
                  "block at " + std::to_string(delta_) + " restricted to >= " +
                      std::to_string(gamma_) + " differs from the block at " +
                      std::to_string(gamma_) + " at entry (" +
                      std::to_string(row_) + ", " + std::to_string(col_) +
                      ")"),
      delta(delta_), gamma(gamma_), row(row_), col(col_) {}

ConvexFamily::ConvexFamily(const Skeleton& sk, Pos target_shift,
                           std::vector<TriMatrix> blocks)
    : sk_(sk), target_(validate_chain_aut(sk, target_shift)),
      blocks_(std::move(blocks)) {
  if (!sk_.chain().is_finite()) {
    throw DomainError(Errc::unsupported_descriptor,
                      "convex families are only representable over finite "
                      "chains");
  }
  Pos n = sk_.chain().size();
  if (static_cast<Pos>(blocks_.size()) != n) {
    throw DomainError(Errc::missing_block,
                      "need one block per position: expected " +
                          std::to_string(n) + ", got " +
                          std::to_string(blocks_.size()));
  }
  for (Pos g = 0; g < n; ++g) {
    const TriMatrix& block = blocks_[static_cast<std::size_t>(g)];
    check_same_skeleton(block.skeleton(), suffix_skeleton(sk_, g));
    if (!block.in_T()) {
      throw DomainError(Errc::not_in_u,
                        "block at " + std::to_string(g) +
                            " is not an isomorphism of the convex subgroup");
    }
  }
}

namespace {

// Drops the first local position of a block's skeleton and re-indexes.
TriMatrix restrict_block(const TriMatrix& block) {
  std::map<TriMatrix::Key, Rat> entries;
  for (const auto& [k, v] : block.entries()) {
    if (k.first == 0) continue;
    entries.emplace(TriMatrix::Key{k.first - 1, k.second - 1}, v);
  }
  return TriMatrix(suffix_skeleton(block.skeleton(), 1), block.default_diag(),
                   entries);
}

} // namespace

VAut lift_from_convex_family(const ConvexFamily& family) {
  const auto& blocks = family.blocks();
  Pos n = family.skeleton().chain().size();
  // Consecutive restrictions imply all pairs γ > δ by transitivity; the
  // reported pair is (γ-1, γ).
  for (Pos g = 1; g < n; ++g) {
    TriMatrix restricted = restrict_block(blocks[static_cast<std::size_t>(g - 1)]);
    const TriMatrix& expected = blocks[static_cast<std::size_t>(g)];
    if (restricted == expected) continue;
    std::map<TriMatrix::Key, Rat> keys;
    for (const auto& [k, v] : restricted.entries()) keys.emplace(k, v);
    for (const auto& [k, v] : expected.entries()) keys.emplace(k, v);
    for (const auto& [k, v] : keys) {
      if (restricted.entry_at(k.first, k.second) !=
          expected.entry_at(k.first, k.second)) {
        throw IncoherentFamilyError(g - 1, g, k.first + g, k.second + g);
      }
    }
    throw IncoherentFamilyError(g - 1, g, g, g); // differing defaults
  }
  // With coherence, σ(x) = block_{v(x)}(x) agrees with the full block at 0
  // on every element (triangularity keeps rows >= v(x) in play).
  return VAut::from_parts(blocks.front(),
                          SkeletonAut::identity(family.skeleton()));
}

VAut lex_sum_lift(const VAut& s1, const VAut& s2) {
  const Skeleton& sk1 = s1.skeleton();
  const Skeleton& sk2 = s2.skeleton();
  Skeleton sk = lex_concat(sk1, sk2);
  Pos offset = sk1.chain().size();

  std::map<TriMatrix::Key, Rat> entries = s1.correction().entries();
  for (const auto& [k, v] : s2.correction().entries()) {
    entries.emplace(TriMatrix::Key{k.first + offset, k.second + offset}, v);
  }
  TriMatrix correction(sk, 1, entries);

  std::map<Pos, Rat> components;
  for (Pos p = 0; p < offset; ++p) {
    components.emplace(p, s1.skel_part().component_at(p));
  }
  for (Pos p = 0; p < sk2.chain().size(); ++p) {
    components.emplace(p + offset, s2.skel_part().component_at(p));
  }
  return VAut(correction, SkeletonAut(sk, 0, 1, components));
}

} // namespace hahn
