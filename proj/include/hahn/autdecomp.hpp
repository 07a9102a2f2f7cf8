#pragma once

#include <utility>
#include <vector>

#include "hahn/element.hpp"
#include "hahn/skeleton.hpp"
#include "hahn/trimatrix.hpp"

namespace hahn {

/// The canonical-lift action of a skeleton automorphism:
/// Σ g_γ 1_γ  ↦  Σ τ_γ(g_γ) 1_{τ(γ)}.
HahnElement canonical_lift_apply(const SkeletonAut& t, const HahnElement& a);

/// A valuation-preserving automorphism in canonical form: a unitriangular
/// correction composed with the canonical lift of a skeleton automorphism,
/// σ = N ∘ Ψ(t) with the lift acting first. The form is unique, so equality
/// is field-by-field. Use from_parts to fold an arbitrary U-correction.
class VAut {
public:
  VAut(const TriMatrix& correction, const SkeletonAut& skel_part);

  static VAut identity(const Skeleton& sk);
  /// Accepts any correction in U; its diagonal is folded into the skeleton
  /// part via factor_U1_Ud. Throws NotInU.
  static VAut from_parts(const TriMatrix& correction,
                         const SkeletonAut& skel_part);

  const Skeleton& skeleton() const { return correction_.skeleton(); }
  const TriMatrix& correction() const { return correction_; }
  const SkeletonAut& skel_part() const { return skel_; }

  bool operator==(const VAut&) const = default;

private:
  TriMatrix correction_;
  SkeletonAut skel_;
};

HahnElement aut_apply(const VAut& sigma, const HahnElement& a);

/// Ψ^c: the canonical lift, with identity correction. Always defined for
/// Hahn sums.
VAut canonical_lift(const SkeletonAut& t);

/// Φ_S: the induced skeleton automorphism. With a unitriangular correction
/// the basis-element recipe collapses to the stored skeleton part.
SkeletonAut induced_skeleton_aut(const VAut& sigma);

/// Φ_Γ: the induced chain automorphism.
ChainAut induced_chain_aut(const VAut& sigma);

/// Kernel of Φ_S: fixes valuation and leading coefficient of every element.
bool is_internal(const VAut& sigma);

/// Hofberger decomposition σ = ι ∘ ε with ι internal and ε a canonical
/// lift; the pair is unique.
std::pair<VAut, VAut> decompose(const VAut& sigma);

/// (σ1 ∘ σ2)(x) = σ1(σ2(x)); canonical form is restored by conjugating the
/// right correction through the left lift. Throws SkeletonMismatch.
VAut compose(const VAut& s1, const VAut& s2);
VAut invert(const VAut& sigma);

/// Every representable VAut preserves the lexicographic order: the skeleton
/// part has order-iso components by construction and the correction sits in
/// T. Computed, not assumed.
bool is_order_preserving_aut(const VAut& sigma);

/// Factors for (U¹ ⋊ U^d) ⋊ Aut'_Γ S(G): a unitriangular correction, the
/// lift of a component-only skeleton automorphism, and the lift of a pure
/// chain shift. Recomposes exactly in that order (shift acting first).
struct EnhancedFactors {
  TriMatrix unitriangular;
  SkeletonAut diagonal;    // identity chain part
  SkeletonAut chain_shift; // identity component maps
};

EnhancedFactors factor_enhanced(const VAut& sigma);

/// Tags for positions >= from of a finite skeleton, re-indexed from 0.
Skeleton suffix_skeleton(const Skeleton& sk, Pos from);

/// Thrown by lift_from_convex_family; carries the violating block pair and
/// the first disagreeing entry in absolute coordinates.
class IncoherentFamilyError : public DomainError {
public:
  IncoherentFamilyError(Pos delta, Pos gamma, Pos row, Pos col);

  Pos delta;
  Pos gamma;
  Pos row;
  Pos col;
};

/// A coherent system of isomorphisms C_γ -> C_{τ(γ)}, one block per
/// position of a finite chain. blocks[γ] lives over suffix_skeleton(sk, γ)
/// in local coordinates.
class ConvexFamily {
public:
  ConvexFamily(const Skeleton& sk, Pos target_shift,
               std::vector<TriMatrix> blocks);

  const Skeleton& skeleton() const { return sk_; }
  const ChainAut& target() const { return target_; }
  const std::vector<TriMatrix>& blocks() const { return blocks_; }

private:
  Skeleton sk_;
  ChainAut target_;
  std::vector<TriMatrix> blocks_;
};

/// Checks the coherence condition (the block at δ restricted to positions
/// >= γ equals the block at γ) and assembles the automorphism σ(x) =
/// block_{v(x)}(x). Throws IncoherentFamilyError with the violating pair.
VAut lift_from_convex_family(const ConvexFamily& family);

/// Blockwise lift over the concatenated skeleton: acts as σ1 on embedded
/// side-1 elements and as σ2 on embedded side-2 elements.
VAut lex_sum_lift(const VAut& s1, const VAut& s2);

} // namespace hahn
