#include "hahn/element.hpp"

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

HahnElement::HahnElement(const Skeleton& sk, const std::map<Pos, Rat>& coeffs)
    : sk_(sk) {
  for (const auto& [p, c] : coeffs) {
    if (c == 0) continue;
    Tag tag = sk_.tag_at(p); // range check included
    if (tag == Tag::Z && !is_integer(c)) {
      throw DomainError(Errc::inadmissible_hom,
                        "coefficient " + format_rat(c) + " at Z-position " +
                            std::to_string(p) + " is not an integer");
    }
    coeffs_.emplace(p, c);
  }
}

HahnElement HahnElement::term(const Skeleton& sk, Pos p, const Rat& coeff) {
  return HahnElement(sk, {{p, coeff}});
}

Rat HahnElement::coeff_at(Pos p) const {
  auto it = coeffs_.find(p);
  return it == coeffs_.end() ? Rat(0) : it->second;
}

HahnElement HahnElement::operator+(const HahnElement& other) const {
  check_same_skeleton(sk_, other.sk_);
  HahnElement out(sk_);
  auto insert_nonzero = [&out](Pos p, const Rat& c) {
    if (c != 0) out.coeffs_.emplace(p, c);
  };
  auto it = coeffs_.begin();
  auto jt = other.coeffs_.begin();
  while (it != coeffs_.end() && jt != other.coeffs_.end()) {
    if (it->first < jt->first) {
      insert_nonzero(it->first, it->second);
      ++it;
    } else if (jt->first < it->first) {
      insert_nonzero(jt->first, jt->second);
      ++jt;
    } else {
      insert_nonzero(it->first, it->second + jt->second);
      ++it;
      ++jt;
    }
  }
  for (; it != coeffs_.end(); ++it) insert_nonzero(it->first, it->second);
  for (; jt != other.coeffs_.end(); ++jt) insert_nonzero(jt->first, jt->second);
  return out;
}

HahnElement HahnElement::operator-() const {
  HahnElement out(sk_);
  for (const auto& [p, c] : coeffs_) out.coeffs_.emplace(p, -c);
  return out;
}

HahnElement HahnElement::operator-(const HahnElement& other) const {
  return *this + (-other);
}

Valuation valuation(const HahnElement& a) {
  if (a.is_zero()) return Valuation::infinity();
  return Valuation::at(a.coeffs().begin()->first);
}

std::strong_ordering lex_compare(const HahnElement& a, const HahnElement& b) {
  check_same_skeleton(a.skeleton(), b.skeleton());
  // Walk the merged supports upward; the first differing coefficient is the
  // leading coefficient of a - b.
  auto it = a.coeffs().begin();
  auto jt = b.coeffs().begin();
  while (it != a.coeffs().end() || jt != b.coeffs().end()) {
    if (jt == b.coeffs().end() ||
        (it != a.coeffs().end() && it->first < jt->first)) {
      return it->second > 0 ? std::strong_ordering::greater
                            : std::strong_ordering::less;
    }
    if (it == a.coeffs().end() || jt->first < it->first) {
      return jt->second > 0 ? std::strong_ordering::less
                            : std::strong_ordering::greater;
    }
    if (it->second != jt->second) {
      return it->second > jt->second ? std::strong_ordering::greater
                                     : std::strong_ordering::less;
    }
    ++it;
    ++jt;
  }
  return std::strong_ordering::equal;
}

bool in_convex_subgroup(const HahnElement& x, Pos gamma) {
  if (!x.skeleton().chain().contains(gamma)) {
    throw DomainError(Errc::position_out_of_range,
                      "position " + std::to_string(gamma) +
                          " is outside the chain");
  }
  return valuation(x).at_least(gamma);
}

HahnElement lex_embed(const Skeleton& sk1, const Skeleton& sk2,
                      const HahnElement& x, int side) {
  Skeleton target = lex_concat(sk1, sk2);
  if (side != 1 && side != 2) {
    throw DomainError(Errc::position_out_of_range,
                      "side must be 1 or 2, got " + std::to_string(side));
  }
  check_same_skeleton(x.skeleton(), side == 1 ? sk1 : sk2);
  Pos offset = side == 1 ? 0 : sk1.chain().size();
  std::map<Pos, Rat> coeffs;
  for (const auto& [p, c] : x.coeffs()) coeffs.emplace(p + offset, c);
  return HahnElement(target, coeffs);
}

} // namespace hahn
