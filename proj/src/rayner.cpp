#include "hahn/rayner.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <string>

#include "hahn/autdecomp.hpp"

namespace hahn {

namespace {

void check_same_skeleton(const Skeleton& a, const Skeleton& b) {
  if (a != b) {
    throw DomainError(Errc::skeleton_mismatch,
                      "family and operand live over different skeletons");
  }
}

void check_finite_small(const Skeleton& sk) {
  if (!sk.chain().is_finite()) {
    throw DomainError(Errc::unsupported_descriptor,
                      "explicit families need a finite chain");
  }
  if (sk.chain().size() > 63) {
    throw DomainError(Errc::chain_too_large,
                      "explicit families support chains up to 63 positions");
  }
}

Pos floor_mod(Pos a, Pos m) {
  Pos r = a % m;
  return r < 0 ? r + m : r;
}

} // namespace

GroupFamily GroupFamily::all_finite(const Skeleton& sk) {
  return GroupFamily(Kind::all_finite, sk);
}

GroupFamily GroupFamily::finite_within(const Skeleton& sk,
                                       const Ground& ground) {
  if (sk.chain().is_finite()) {
    throw DomainError(Errc::unsupported_descriptor,
                      "finite_within families live over the integer chain; "
                      "use an explicit family on finite chains");
  }
  GroupFamily f(Kind::finite_within, sk);
  if (const auto* periodic = std::get_if<Periodic>(&ground)) {
    if (periodic->modulus <= 0) {
      throw DomainError(Errc::unsupported_descriptor,
                        "periodic ground set needs a positive modulus");
    }
    Periodic norm{periodic->modulus, periodic->residues};
    for (Pos& r : norm.residues) r = floor_mod(r, norm.modulus);
    std::sort(norm.residues.begin(), norm.residues.end());
    norm.residues.erase(
        std::unique(norm.residues.begin(), norm.residues.end()),
        norm.residues.end());
    f.ground_ = norm;
  } else {
    f.ground_ = ground;
  }
  return f;
}

GroupFamily GroupFamily::explicit_closed(const Skeleton& sk,
                                         std::vector<std::uint64_t> sets) {
  check_finite_small(sk);
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  assert(!sets.empty() && sets.front() == 0);
  GroupFamily f(Kind::explicit_finite, sk);
  f.sets_ = std::move(sets);
  return f;
}

bool GroupFamily::contains_mask(std::uint64_t mask) const {
  return std::binary_search(sets_.begin(), sets_.end(), mask);
}

bool GroupFamily::ground_contains(Pos p) const {
  if (const auto* half = std::get_if<HalfLine>(&ground_)) {
    return p >= half->bound;
  }
  const auto& periodic = std::get<Periodic>(ground_);
  return std::binary_search(periodic.residues.begin(), periodic.residues.end(),
                            floor_mod(p, periodic.modulus));
}

bool GroupFamily::ground_shift_within(Pos k) const {
  if (const auto* half = std::get_if<HalfLine>(&ground_)) {
    (void)half;
    return k >= 0; // {γ >= c} + k ⊆ {γ >= c} iff c + k >= c
  }
  const auto& periodic = std::get<Periodic>(ground_);
  for (Pos r : periodic.residues) {
    if (!std::binary_search(periodic.residues.begin(), periodic.residues.end(),
                            floor_mod(r + k, periodic.modulus))) {
      return false;
    }
  }
  return true;
}

std::vector<Pos> mask_to_set(std::uint64_t mask) {
  std::vector<Pos> set;
  for (Pos p = 0; mask != 0; ++p, mask >>= 1) {
    if (mask & 1) set.push_back(p);
  }
  return set;
}

std::uint64_t set_to_mask(const Skeleton& sk, const std::vector<Pos>& set) {
  check_finite_small(sk);
  std::uint64_t mask = 0;
  for (Pos p : set) {
    if (!sk.chain().contains(p)) {
      throw DomainError(Errc::position_out_of_range,
                        "set member " + std::to_string(p) +
                            " is outside the chain");
    }
    mask |= std::uint64_t{1} << p;
  }
  return mask;
}

GroupFamily family_from_generators(
    const Skeleton& sk, const std::vector<std::vector<Pos>>& gens) {
  check_finite_small(sk);
  std::set<std::uint64_t> members;
  members.insert(0);
  for (const auto& g : gens) members.insert(set_to_mask(sk, g));
  // Union-closure to a fixpoint, then subset-closure (which preserves union
  // closure: A' ∪ B' ⊆ A ∪ B).
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::uint64_t> snapshot(members.begin(), members.end());
    for (std::size_t i = 0; i < snapshot.size(); ++i) {
      for (std::size_t j = i + 1; j < snapshot.size(); ++j) {
        grew |= members.insert(snapshot[i] | snapshot[j]).second;
      }
    }
  }
  std::set<std::uint64_t> closed;
  for (std::uint64_t m : members) {
    std::uint64_t s = 0;
    do {
      closed.insert(s);
      s = (s - m) & m;
    } while (s != 0);
  }
  return GroupFamily::explicit_closed(
      sk, std::vector<std::uint64_t>(closed.begin(), closed.end()));
}

FamilyCheck is_group_family(const Skeleton& sk,
                            const std::vector<std::vector<Pos>>& sets) {
  check_finite_small(sk);
  std::vector<std::uint64_t> masks;
  for (const auto& s : sets) masks.push_back(set_to_mask(sk, s));
  std::sort(masks.begin(), masks.end());
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  auto contains = [&masks](std::uint64_t m) {
    return std::binary_search(masks.begin(), masks.end(), m);
  };
  if (!contains(0)) {
    // A nonempty family is forced to contain ∅ by subset closure; an empty
    // family yields no group at all.
    return FamilyCheck{FamilyViolation{FamilyViolation::Kind::empty_missing,
                                       masks.empty() ? std::vector<Pos>{}
                                                     : mask_to_set(masks[0]),
                                       {}}};
  }
  for (std::uint64_t a : masks) {
    for (std::uint64_t b : masks) {
      if (a > b) continue;
      if (!contains(a | b)) {
        return FamilyCheck{FamilyViolation{
            FamilyViolation::Kind::union_missing, mask_to_set(a),
            mask_to_set(b)}};
      }
    }
  }
  for (std::uint64_t a : masks) {
    std::uint64_t s = 0;
    do {
      if (!contains(s)) {
        return FamilyCheck{FamilyViolation{
            FamilyViolation::Kind::subset_missing, mask_to_set(a),
            mask_to_set(s)}};
      }
      s = (s - a) & a;
    } while (s != 0);
  }
  return FamilyCheck{};
}

bool rayner_contains(const GroupFamily& family, const HahnElement& a) {
  check_same_skeleton(family.skeleton(), a.skeleton());
  switch (family.kind()) {
    case GroupFamily::Kind::all_finite:
      return true; // supports are finite by representation
    case GroupFamily::Kind::explicit_finite: {
      std::uint64_t mask = 0;
      for (const auto& [p, c] : a.coeffs()) {
        mask |= std::uint64_t{1} << p;
      }
      return family.contains_mask(mask);
    }
    case GroupFamily::Kind::finite_within:
      for (const auto& [p, c] : a.coeffs()) {
        if (!family.ground_contains(p)) return false;
      }
      return true;
  }
  return false;
}

bool is_stable_setwise(const GroupFamily& family, const SkeletonAut& t) {
  return !setwise_instability_witness(family, t).has_value();
}

std::optional<std::vector<Pos>> setwise_instability_witness(
    const GroupFamily& family, const SkeletonAut& t) {
  check_same_skeleton(family.skeleton(), t.skeleton());
  Pos shift = t.chain_part().shift;
  switch (family.kind()) {
    case GroupFamily::Kind::explicit_finite:
      // Finite chains only carry the identity chain automorphism, but run
      // the quantifier anyway.
      for (std::uint64_t mask : family.sets()) {
        std::uint64_t image = 0;
        for (Pos p : mask_to_set(mask)) {
          image |= std::uint64_t{1} << t.map_pos(p);
        }
        if (!family.contains_mask(image)) return mask_to_set(mask);
      }
      return std::nullopt;
    case GroupFamily::Kind::all_finite:
      return std::nullopt; // |τ̄(T)| = |T| stays finite
    case GroupFamily::Kind::finite_within:
      if (family.ground_shift_within(shift)) return std::nullopt;
      if (const auto* half =
              std::get_if<GroupFamily::HalfLine>(&family.ground())) {
        return std::vector<Pos>{half->bound};
      }
      for (Pos r : std::get<GroupFamily::Periodic>(family.ground()).residues) {
        if (!family.ground_contains(r + shift)) return std::vector<Pos>{r};
      }
      return std::nullopt; // unreachable: shift_within failed above
  }
  return std::nullopt;
}

bool is_stable_pointwise(const GroupFamily& family, const SkeletonAut& t) {
  check_same_skeleton(family.skeleton(), t.skeleton());
  Pos shift = t.chain_part().shift;
  switch (family.kind()) {
    case GroupFamily::Kind::explicit_finite:
      return true; // τ̄ is the identity on a finite chain
    case GroupFamily::Kind::all_finite:
      return shift == 0; // otherwise τ̄({0}) = {shift}
    case GroupFamily::Kind::finite_within: {
      if (shift == 0) return true;
      if (const auto* half =
              std::get_if<GroupFamily::HalfLine>(&family.ground())) {
        (void)half;
        return false; // τ̄({bound}) ≠ {bound}
      }
      return std::get<GroupFamily::Periodic>(family.ground())
          .residues.empty(); // only ∅ is a member then
    }
  }
  return false;
}

bool canonical_lift_closed(const GroupFamily& family, const SkeletonAut& t) {
  check_same_skeleton(family.skeleton(), t.skeleton());
  const Skeleton& sk = family.skeleton();
  VAut lift = canonical_lift(t);
  auto member_element = [&sk](const std::vector<Pos>& set) {
    std::map<Pos, Rat> coeffs;
    for (Pos p : set) coeffs.emplace(p, 1); // 1 is valid at both Z and Q
    return HahnElement(sk, coeffs);
  };
  switch (family.kind()) {
    case GroupFamily::Kind::explicit_finite:
      for (std::uint64_t mask : family.sets()) {
        HahnElement image = aut_apply(lift, member_element(mask_to_set(mask)));
        if (!rayner_contains(family, image)) return false;
      }
      return true;
    case GroupFamily::Kind::all_finite:
      return true; // lifted supports stay finite
    case GroupFamily::Kind::finite_within: {
      // An arbitrary member is a finite union of singletons, so it suffices
      // to lift the extremal representatives of the ground set: the minimum
      // of a half-line, one representative per residue otherwise.
      if (const auto* half =
              std::get_if<GroupFamily::HalfLine>(&family.ground())) {
        HahnElement image =
            aut_apply(lift, member_element({half->bound}));
        return rayner_contains(family, image);
      }
      for (Pos r : std::get<GroupFamily::Periodic>(family.ground()).residues) {
        HahnElement image = aut_apply(lift, member_element({r}));
        if (!rayner_contains(family, image)) return false;
      }
      return true;
    }
  }
  return false;
}

} // namespace hahn
