#pragma once

#include <compare>
#include <map>
#include <vector>

#include "hahn/error.hpp"
#include "hahn/rational.hpp"

namespace hahn {

/// The value chain Γ. Two kinds are representable: a finite chain
/// {0, ..., n-1} and the chain of all integers. Both have exactly computable
/// order automorphisms (only the identity, resp. the shifts), which keeps
/// every lifting question decidable.
class Chain {
public:
  enum class Kind { finite, integers };

  static Chain finite(Pos n);
  static Chain integers();

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::finite; }
  /// Number of positions; only valid for finite chains.
  Pos size() const { return size_; }
  bool contains(Pos p) const;

  bool operator==(const Chain&) const = default;

private:
  Chain(Kind kind, Pos size) : kind_(kind), size_(size) {}

  Kind kind_;
  Pos size_; // 0 for integers
};

/// Component group tag: the archimedean ordered groups ℤ and ℚ. Their homs
/// and order automorphisms have closed forms (rational multipliers), so all
/// matrix entries stay exact.
enum class Tag { Z, Q };

const char* tag_name(Tag t);

/// True iff "multiply by q" is a group homomorphism domain -> codomain:
/// Z->Z needs an integer, Q->Z only admits 0 (ℚ is divisible), Z->Q and
/// Q->Q admit any rational.
bool hom_admissible(Tag domain, Tag codomain, const Rat& q);

/// True iff "multiply by q" is an order isomorphism domain -> codomain:
/// requires equal tags; Z->Z forces q = 1, Q->Q forces q > 0.
bool iso_admissible(Tag domain, Tag codomain, const Rat& q);

/// A homomorphism between component groups, kept as its exact multiplier.
struct ComponentHom {
  Tag domain;
  Tag codomain;
  Rat multiplier;

  bool operator==(const ComponentHom&) const = default;
};

/// Validated construction; throws DomainError(InadmissibleHom).
ComponentHom validate_hom(Tag domain, Tag codomain, const Rat& q);
/// As validate_hom but restricted to order isomorphisms.
ComponentHom validate_iso(Tag domain, Tag codomain, const Rat& q);

/// (s ∘ t)(x) = s(t(x)); requires t.codomain == s.domain.
ComponentHom compose_homs(const ComponentHom& s, const ComponentHom& t);
/// Pointwise sum; requires equal domain and codomain.
ComponentHom add_homs(const ComponentHom& a, const ComponentHom& b);

/// S(G) = a chain together with the component tag at every position. On the
/// integer chain the tags repeat with a period; the stored pattern is
/// normalized to the minimal period, so equal skeletons compare equal.
class Skeleton {
public:
  Skeleton(const Chain& chain, std::vector<Tag> tags);

  const Chain& chain() const { return chain_; }
  /// Finite chains: the full tag list. Integer chain: the minimal period.
  const std::vector<Tag>& tags() const { return tags_; }
  Pos period() const { return static_cast<Pos>(tags_.size()); }

  /// Tag at a position; throws PositionOutOfRange on finite chains.
  Tag tag_at(Pos p) const;
  bool has_tag(Tag t) const;

  bool operator==(const Skeleton&) const = default;

private:
  Chain chain_;
  std::vector<Tag> tags_;
};

/// Spec constructor with explicit validation errors (EmptyTagList,
/// LengthMismatch).
Skeleton make_skeleton(const Chain& chain, std::vector<Tag> tags);

/// Concatenation of two finite skeletons; positions of the right operand are
/// offset by the left operand's size. Throws InfiniteConcat for the integer
/// chain.
Skeleton lex_concat(const Skeleton& left, const Skeleton& right);

/// An order automorphism of the chain. Finite chains only admit the
/// identity; the integer chain admits exactly the shifts.
struct ChainAut {
  Pos shift = 0;

  Pos operator()(Pos p) const { return p + shift; }
  bool operator==(const ChainAut&) const = default;
};

/// Accepts shift = 0 on finite chains and tag-pattern-preserving shifts on
/// the integer chain. Throws NotAnAutomorphism / TagPatternBroken.
ChainAut validate_chain_aut(const Skeleton& sk, Pos shift);

/// An automorphism of the skeleton: a chain automorphism together with a
/// component iso A_γ -> A_{γ+shift} at every position.
///
/// The component maps are stored as a single default multiplier plus finitely
/// many exceptions. The default applies at ℚ-tagged positions; ℤ-tagged
/// positions always carry the unique order iso (multiplier 1), which is the
/// only convention closed under composition and inverse with one default.
/// Normal form: on finite chains the default is 1 and every non-identity
/// component is an exception; exceptions equal to the effective default are
/// never stored. Equal automorphisms therefore compare equal field-by-field.
class SkeletonAut {
public:
  SkeletonAut(const Skeleton& sk, Pos shift, const Rat& default_iso,
              const std::map<Pos, Rat>& exceptions);

  static SkeletonAut identity(const Skeleton& sk);

  const Skeleton& skeleton() const { return sk_; }
  const ChainAut& chain_part() const { return chain_; }
  const Rat& default_iso() const { return default_iso_; }
  const std::map<Pos, Rat>& exceptions() const { return exceptions_; }

  /// Effective component multiplier at position γ (iso A_γ -> A_{γ+shift}).
  Rat component_at(Pos p) const;
  Pos map_pos(Pos p) const { return chain_(p); }
  bool is_identity() const;

  bool operator==(const SkeletonAut&) const = default;

private:
  Skeleton sk_;
  ChainAut chain_;
  Rat default_iso_;
  std::map<Pos, Rat> exceptions_;
};

/// (s ∘ t)(x) = s(t(x)). Throws SkeletonMismatch.
SkeletonAut compose_skeleton_auts(const SkeletonAut& s, const SkeletonAut& t);
SkeletonAut invert_skeleton_aut(const SkeletonAut& t);

} // namespace hahn
