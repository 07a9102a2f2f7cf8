#pragma once

#include <map>
#include <utility>

#include "hahn/element.hpp"
#include "hahn/skeleton.hpp"

namespace hahn {

/// A finitely-supported triangular matrix of component homomorphisms,
/// modelling endomorphisms of the Hahn sum. Entry (row, col) is a hom
/// A_row -> A_col and triangularity means col >= row ("valuation
/// non-decreasing"): elements act as row vectors multiplied on the left, so
/// the contribution of the coefficient at row lands at col.
///
/// Off-diagonal entries are always explicit; the diagonal is a constant
/// default plus finitely many explicit overrides. Normal form: off-diagonal
/// zeros are dropped; on finite chains the default is 1 and every diagonal
/// value != 1 is explicit; on the integer chain explicit diagonal entries
/// equal to the default are dropped. Normal form is unique, so equality is
/// field-by-field.
class TriMatrix {
public:
  using Key = std::pair<Pos, Pos>; // (row, col)

  TriMatrix(const Skeleton& sk, const Rat& default_diag,
            const std::map<Key, Rat>& entries);

  static TriMatrix identity(const Skeleton& sk);
  static TriMatrix zero_matrix(const Skeleton& sk);

  const Skeleton& skeleton() const { return sk_; }
  const Rat& default_diag() const { return default_diag_; }
  const std::map<Key, Rat>& entries() const { return entries_; }

  /// Effective entry values (absent off-diagonal = 0, absent diagonal =
  /// default).
  Rat diag_at(Pos p) const;
  Rat entry_at(Pos row, Pos col) const;

  /// Membership in the triangular monoid T: every diagonal entry is an order
  /// automorphism of its component. In the representable class (finitely
  /// many off-diagonal entries) T-members are exactly the units, so this is
  /// also membership in U.
  bool in_T() const;
  /// Unitriangular: in T with identity diagonal.
  bool in_U1() const;
  bool is_diagonal() const { return !has_off_diagonal(); }
  bool has_off_diagonal() const;

  bool operator==(const TriMatrix&) const = default;

private:
  Skeleton sk_;
  Rat default_diag_;
  std::map<Key, Rat> entries_;
};

/// Row-vector action b_col = Σ_row entry(row, col)(a_row). Throws
/// SkeletonMismatch.
HahnElement apply(const HahnElement& a, const TriMatrix& m);

/// Matrix product compatible with apply: apply(a, multiply(M, N)) =
/// apply(apply(a, M), N). In other words M acts first.
TriMatrix multiply(const TriMatrix& m, const TriMatrix& n);

/// Entrywise sum (the additive structure of the endomorphism ring).
TriMatrix add_matrices(const TriMatrix& m, const TriMatrix& n);

TriMatrix negate(const TriMatrix& m);

/// Exact inverse with multiply(M, invert(M)) = identity; the finitely many
/// off-diagonal entries make the strictly triangular part nilpotent. Throws
/// NotInvertible unless every diagonal entry is an order iso.
TriMatrix invert(const TriMatrix& m);

/// Conditions (i'), (ii'): triangular with order-automorphism diagonal.
bool is_order_preserving(const TriMatrix& m);

/// U = U¹ ⋊ U^d: returns (M1, Md) with Md the diagonal part of M,
/// M1 = M · Md⁻¹ unitriangular, and multiply(M1, Md) = M exactly. Throws
/// NotInU.
std::pair<TriMatrix, TriMatrix> factor_U1_Ud(const TriMatrix& m);

/// Conjugation by the canonical lift of a skeleton automorphism:
/// apply(a, result) = lift(t)(apply(lift(t)⁻¹(a), M)). Entry (α, β) moves to
/// (t(α), t(β)) with multiplier τ_β · q / τ_α; preserves unitriangularity and
/// the default diagonal.
TriMatrix conjugate_by_lift(const TriMatrix& m, const SkeletonAut& t);

} // namespace hahn
