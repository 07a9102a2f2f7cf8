#pragma once

#include <compare>
#include <map>

#include "hahn/skeleton.hpp"

namespace hahn {

/// Value of the canonical valuation v_min: the least support position, or
/// infinity exactly for the zero element.
class Valuation {
public:
  static Valuation infinity() { return Valuation(true, 0); }
  static Valuation at(Pos p) { return Valuation(false, p); }

  bool is_infinite() const { return infinite_; }
  Pos position() const { return pos_; }

  /// v >= γ, with infinity above every position.
  bool at_least(Pos gamma) const { return infinite_ || pos_ >= gamma; }

  bool operator==(const Valuation&) const = default;

private:
  Valuation(bool infinite, Pos pos) : infinite_(infinite), pos_(pos) {}

  bool infinite_;
  Pos pos_;
};

/// An element of the Hahn sum over a skeleton: a finite map from positions to
/// nonzero coefficients. Zero coefficients are never stored, so the key set
/// is literally the support and equality is structural.
class HahnElement {
public:
  explicit HahnElement(const Skeleton& sk) : sk_(sk) {}
  HahnElement(const Skeleton& sk, const std::map<Pos, Rat>& coeffs);

  static HahnElement zero(const Skeleton& sk) { return HahnElement(sk); }
  static HahnElement term(const Skeleton& sk, Pos p, const Rat& coeff);

  const Skeleton& skeleton() const { return sk_; }
  const std::map<Pos, Rat>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  /// Coefficient at a position (0 off the support).
  Rat coeff_at(Pos p) const;

  HahnElement operator+(const HahnElement& other) const;
  HahnElement operator-() const;
  HahnElement operator-(const HahnElement& other) const;

  bool operator==(const HahnElement&) const = default;

private:
  Skeleton sk_;
  std::map<Pos, Rat> coeffs_;
};

Valuation valuation(const HahnElement& a);

/// Lexicographic comparison: the sign of a - b is the sign of its leading
/// coefficient. Throws SkeletonMismatch.
std::strong_ordering lex_compare(const HahnElement& a, const HahnElement& b);

inline bool lex_less(const HahnElement& a, const HahnElement& b) {
  return lex_compare(a, b) < 0;
}
inline bool is_positive(const HahnElement& a) {
  return !a.is_zero() && a.coeffs().begin()->second > 0;
}

/// Membership in the principal convex subgroup C_γ = {x : v(x) >= γ}.
/// Throws PositionOutOfRange when γ is not on a finite chain.
bool in_convex_subgroup(const HahnElement& x, Pos gamma);

/// Embeds an element of sk1 (side 1) or sk2 (side 2) into the concatenated
/// skeleton; side-2 positions are offset by |Γ1|.
HahnElement lex_embed(const Skeleton& sk1, const Skeleton& sk2,
                      const HahnElement& x, int side);

} // namespace hahn
