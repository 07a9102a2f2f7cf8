#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "hahn/element.hpp"
#include "hahn/skeleton.hpp"

namespace hahn {

/// A family of admissible supports: closed under binary union and subsets,
/// and containing ∅ (all representable member sets are finite, hence well
/// ordered). Three descriptors:
///   - explicit_finite: a closed list of subsets of a finite chain, stored as
///     bitmasks (closure is computed at construction);
///   - all_finite: every finite subset (the Hahn-sum family);
///   - finite_within: every finite subset of a ground set on the integer
///     chain, either a half-line {γ : γ >= bound} or a periodic residue set.
class GroupFamily {
public:
  enum class Kind { explicit_finite, all_finite, finite_within };

  struct HalfLine {
    Pos bound;
    bool operator==(const HalfLine&) const = default;
  };
  struct Periodic {
    Pos modulus;
    std::vector<Pos> residues; // sorted, unique, in [0, modulus)
    bool operator==(const Periodic&) const = default;
  };
  using Ground = std::variant<HalfLine, Periodic>;

  static GroupFamily all_finite(const Skeleton& sk);
  static GroupFamily finite_within(const Skeleton& sk, const Ground& ground);
  /// Trusts `closed_sets` to be union/subset-closed and to contain ∅
  /// (asserted); regular construction goes through family_from_generators.
  static GroupFamily explicit_closed(const Skeleton& sk,
                                     std::vector<std::uint64_t> closed_sets);

  Kind kind() const { return kind_; }
  const Skeleton& skeleton() const { return sk_; }
  /// Member sets as bitmasks; explicit_finite only.
  const std::vector<std::uint64_t>& sets() const { return sets_; }
  const Ground& ground() const { return ground_; }

  bool contains_mask(std::uint64_t mask) const;
  bool ground_contains(Pos p) const;
  /// S + k ⊆ S for the ground set (the closed form deciding shift
  /// stability of finite_within families).
  bool ground_shift_within(Pos k) const;

  bool operator==(const GroupFamily&) const = default;

private:
  GroupFamily(Kind kind, const Skeleton& sk) : kind_(kind), sk_(sk) {}

  Kind kind_;
  Skeleton sk_;
  std::vector<std::uint64_t> sets_;
  Ground ground_ = HalfLine{0};
};

std::vector<Pos> mask_to_set(std::uint64_t mask);
std::uint64_t set_to_mask(const Skeleton& sk, const std::vector<Pos>& set);

/// Smallest group family over a finite chain containing the generators:
/// union-closure followed by subset-closure (which preserves union
/// closure). Always contains ∅.
GroupFamily family_from_generators(const Skeleton& sk,
                                   const std::vector<std::vector<Pos>>& gens);

struct FamilyViolation {
  enum class Kind { empty_missing, union_missing, subset_missing };
  Kind kind;
  std::vector<Pos> a;
  std::vector<Pos> b;
};

struct FamilyCheck {
  std::optional<FamilyViolation> violation;
  bool ok() const { return !violation.has_value(); }
};

/// Exhaustive check of the group-family conditions over a finite chain;
/// reports the first violation found.
FamilyCheck is_group_family(const Skeleton& sk,
                            const std::vector<std::vector<Pos>>& sets);

/// supp(a) ∈ F. Throws SkeletonMismatch.
bool rayner_contains(const GroupFamily& family, const HahnElement& a);

/// Setwise stability: τ̄(T) ∈ F for every member T. Exhaustive for explicit
/// families; decided by the ground closed form for symbolic ones.
bool is_stable_setwise(const GroupFamily& family, const SkeletonAut& t);
/// The paper's literal wording: τ̄(T) = T for every member T.
bool is_stable_pointwise(const GroupFamily& family, const SkeletonAut& t);
/// A member set witnessing setwise instability, if any.
std::optional<std::vector<Pos>> setwise_instability_witness(
    const GroupFamily& family, const SkeletonAut& t);

/// Whether the canonical lift of t maps 𝔾(F) into 𝔾(F). Computed through
/// elements (lift actual members and test containment; symbolic descriptors
/// use their extremal representatives), independently of the set-level
/// stability check — agreement of the two is the theorem under test.
bool canonical_lift_closed(const GroupFamily& family, const SkeletonAut& t);

} // namespace hahn
