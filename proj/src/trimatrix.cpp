#include "hahn/trimatrix.hpp"

#include <limits>
#include <string>

namespace hahn {

namespace {

void check_same_skeleton(const Skeleton& a, const Skeleton& b) {
  if (a != b) {
    throw DomainError(Errc::skeleton_mismatch,
                      "matrices live over different skeletons");
  }
}

using Key = TriMatrix::Key;
using EntryMap = std::map<Key, Rat>;

constexpr Pos kPosMin = std::numeric_limits<Pos>::min();

// Deviation form: M = default_diag · I + X, where X holds every explicit
// entry minus the default on the diagonal. Ring operations are computed on
// X (finite support) and the constant-diagonal part separately.
EntryMap deviation(const TriMatrix& m) {
  EntryMap x;
  for (const auto& [k, v] : m.entries()) {
    Rat d = k.first == k.second ? v - m.default_diag() : v;
    if (d != 0) x.emplace(k, d);
  }
  return x;
}

void accumulate(EntryMap& acc, const Key& k, const Rat& v) {
  auto [it, inserted] = acc.emplace(k, v);
  if (!inserted) it->second += v;
}

EntryMap map_product(const EntryMap& x, const EntryMap& y) {
  EntryMap out;
  for (const auto& [kx, vx] : x) {
    // All y-entries whose row equals kx's column.
    for (auto it = y.lower_bound({kx.second, kPosMin}); it != y.end(); ++it) {
      if (it->first.first != kx.second) break;
      accumulate(out, {kx.first, it->first.second}, vx * it->second);
    }
  }
  return out;
}

// Assembles effective entries from a deviation map and a default, for the
// normalizing constructor.
EntryMap effective_from_deviation(const EntryMap& x, const Rat& def) {
  EntryMap entries;
  for (const auto& [k, v] : x) {
    entries.emplace(k, k.first == k.second ? v + def : v);
  }
  return entries;
}

} // namespace

TriMatrix::TriMatrix(const Skeleton& sk, const Rat& default_diag,
                     const std::map<Key, Rat>& entries)
    : sk_(sk), default_diag_(default_diag) {
  for (const auto& [k, v] : entries) {
    auto [row, col] = k;
    if (col < row) {
      throw DomainError(Errc::not_triangular,
                        "entry (" + std::to_string(row) + ", " +
                            std::to_string(col) +
                            ") below the diagonal");
    }
    Tag dom = sk_.tag_at(row);
    Tag cod = sk_.tag_at(col); // range checks included
    if (!hom_admissible(dom, cod, v)) {
      throw DomainError(Errc::inadmissible_hom,
                        "entry (" + std::to_string(row) + ", " +
                            std::to_string(col) + ") = " + format_rat(v) +
                            " is not a homomorphism " + tag_name(dom) +
                            " -> " + tag_name(cod));
    }
    if (row != col && v == 0) continue;
    entries_.emplace(k, v);
  }

  if (sk_.chain().is_finite()) {
    // Finite normal form: default 1, all non-identity diagonal values
    // explicit.
    for (Pos p = 0; p < sk_.chain().size(); ++p) {
      Key k{p, p};
      if (entries_.find(k) == entries_.end() && default_diag_ != 1) {
        Tag tag = sk_.tag_at(p);
        if (!hom_admissible(tag, tag, default_diag_)) {
          throw DomainError(Errc::inadmissible_hom,
                            "default diagonal " + format_rat(default_diag_) +
                                " is not an endomorphism of " +
                                tag_name(tag));
        }
        entries_.emplace(k, default_diag_);
      }
    }
    default_diag_ = 1;
    for (auto it = entries_.begin(); it != entries_.end();) {
      if (it->first.first == it->first.second && it->second == 1) {
        it = entries_.erase(it);
      } else {
        ++it;
      }
    }
  } else {
    // Every residue class has positions without an explicit diagonal entry,
    // so the default must be admissible at all of them.
    for (Pos r = 0; r < sk_.period(); ++r) {
      Tag tag = sk_.tag_at(r);
      if (!hom_admissible(tag, tag, default_diag_)) {
        throw DomainError(Errc::inadmissible_hom,
                          "default diagonal " + format_rat(default_diag_) +
                              " is not an endomorphism of " + tag_name(tag));
      }
    }
    for (auto it = entries_.begin(); it != entries_.end();) {
      if (it->first.first == it->first.second &&
          it->second == default_diag_) {
        it = entries_.erase(it);
      } else {
        ++it;
      }
    }
  }
}

TriMatrix TriMatrix::identity(const Skeleton& sk) {
  return TriMatrix(sk, 1, {});
}

TriMatrix TriMatrix::zero_matrix(const Skeleton& sk) {
  return TriMatrix(sk, 0, {});
}

Rat TriMatrix::diag_at(Pos p) const {
  if (auto it = entries_.find({p, p}); it != entries_.end()) return it->second;
  return default_diag_;
}

Rat TriMatrix::entry_at(Pos row, Pos col) const {
  if (row == col) return diag_at(row);
  auto it = entries_.find({row, col});
  return it == entries_.end() ? Rat(0) : it->second;
}

bool TriMatrix::in_T() const {
  if (sk_.chain().is_finite()) {
    for (Pos p = 0; p < sk_.chain().size(); ++p) {
      if (!iso_admissible(sk_.tag_at(p), sk_.tag_at(p), diag_at(p))) {
        return false;
      }
    }
    return true;
  }
  for (Pos r = 0; r < sk_.period(); ++r) {
    if (!iso_admissible(sk_.tag_at(r), sk_.tag_at(r), default_diag_)) {
      return false;
    }
  }
  for (const auto& [k, v] : entries_) {
    if (k.first != k.second) continue;
    if (!iso_admissible(sk_.tag_at(k.first), sk_.tag_at(k.first), v)) {
      return false;
    }
  }
  return true;
}

bool TriMatrix::in_U1() const {
  if (default_diag_ != 1) return false;
  for (const auto& [k, v] : entries_) {
    if (k.first == k.second) return false; // normal form: would be != 1
  }
  return true;
}

bool TriMatrix::has_off_diagonal() const {
  for (const auto& [k, v] : entries_) {
    if (k.first != k.second) return true;
  }
  return false;
}

HahnElement apply(const HahnElement& a, const TriMatrix& m) {
  check_same_skeleton(a.skeleton(), m.skeleton());
  std::map<Pos, Rat> acc;
  auto add_at = [&acc](Pos p, const Rat& v) {
    auto [it, inserted] = acc.emplace(p, v);
    if (!inserted) it->second += v;
  };
  const auto& entries = m.entries();
  for (const auto& [row, coeff] : a.coeffs()) {
    bool diag_explicit = false;
    for (auto it = entries.lower_bound({row, kPosMin}); it != entries.end();
         ++it) {
      if (it->first.first != row) break;
      if (it->first.first == it->first.second) diag_explicit = true;
      add_at(it->first.second, it->second * coeff);
    }
    if (!diag_explicit && m.default_diag() != 0) {
      add_at(row, m.default_diag() * coeff);
    }
  }
  return HahnElement(a.skeleton(), acc);
}

TriMatrix multiply(const TriMatrix& m, const TriMatrix& n) {
  check_same_skeleton(m.skeleton(), n.skeleton());
  // (dM·I + X)(dN·I + Y) = dM·dN·I + dM·Y + dN·X + X·Y.
  EntryMap x = deviation(m);
  EntryMap y = deviation(n);
  Rat def = m.default_diag() * n.default_diag();
  EntryMap out = map_product(x, y);
  for (const auto& [k, v] : y) accumulate(out, k, m.default_diag() * v);
  for (const auto& [k, v] : x) accumulate(out, k, n.default_diag() * v);
  return TriMatrix(m.skeleton(), def, effective_from_deviation(out, def));
}

TriMatrix add_matrices(const TriMatrix& m, const TriMatrix& n) {
  check_same_skeleton(m.skeleton(), n.skeleton());
  EntryMap out = deviation(m);
  for (const auto& [k, v] : deviation(n)) accumulate(out, k, v);
  Rat def = m.default_diag() + n.default_diag();
  return TriMatrix(m.skeleton(), def, effective_from_deviation(out, def));
}

TriMatrix negate(const TriMatrix& m) {
  EntryMap out;
  for (const auto& [k, v] : m.entries()) out.emplace(k, -v);
  return TriMatrix(m.skeleton(), -m.default_diag(), out);
}

TriMatrix invert(const TriMatrix& m) {
  if (!m.in_T()) {
    throw DomainError(Errc::not_invertible,
                      "matrix diagonal is not made of order automorphisms");
  }
  // M = D(I + Y) with Y = D⁻¹ X strictly triangular, so
  // M⁻¹ = (Σ_k (-Y)^k) D⁻¹ and the series is finite.
  EntryMap y;
  for (const auto& [k, v] : m.entries()) {
    if (k.first == k.second) continue;
    y.emplace(k, v / m.diag_at(k.first));
  }
  EntryMap series; // Σ_{k>=1} (-Y)^k, strictly triangular
  EntryMap power;
  for (const auto& [k, v] : y) power.emplace(k, -v);
  while (!power.empty()) {
    for (const auto& [k, v] : power) accumulate(series, k, v);
    EntryMap next = map_product(power, y);
    power.clear();
    for (const auto& [k, v] : next) {
      if (v != 0) power.emplace(k, -v);
    }
  }
  // M⁻¹ = (I + series) D⁻¹: right-multiplying scales column β by 1/d_β.
  EntryMap out;
  for (const auto& [k, v] : m.entries()) {
    if (k.first == k.second) out.emplace(k, 1 / v);
  }
  for (const auto& [k, v] : series) {
    accumulate(out, k, v / m.diag_at(k.second));
  }
  return TriMatrix(m.skeleton(), 1 / m.default_diag(), out);
}

bool is_order_preserving(const TriMatrix& m) { return m.in_T(); }

std::pair<TriMatrix, TriMatrix> factor_U1_Ud(const TriMatrix& m) {
  if (!m.in_T()) {
    throw DomainError(Errc::not_in_u, "matrix is not a unit of T");
  }
  EntryMap diag;
  for (const auto& [k, v] : m.entries()) {
    if (k.first == k.second) diag.emplace(k, v);
  }
  TriMatrix md(m.skeleton(), m.default_diag(), diag);
  // The paper's "replace the diagonal by 1" recipe does not recompose when
  // off-diagonal entries are present; M · Md⁻¹ does.
  TriMatrix m1 = multiply(m, invert(md));
  return {m1, md};
}

TriMatrix conjugate_by_lift(const TriMatrix& m, const SkeletonAut& t) {
  check_same_skeleton(m.skeleton(), t.skeleton());
  Pos shift = t.chain_part().shift;
  EntryMap out;
  for (const auto& [k, v] : m.entries()) {
    auto [row, col] = k;
    Rat moved = t.component_at(col) * v / t.component_at(row);
    out.emplace(Key{row + shift, col + shift}, moved);
  }
  return TriMatrix(m.skeleton(), m.default_diag(), out);
}

} // namespace hahn
