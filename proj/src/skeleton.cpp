#include "hahn/skeleton.hpp"

#include <algorithm>
#include <string>

namespace hahn {

Chain Chain::finite(Pos n) {
  if (n <= 0) {
    throw DomainError(Errc::empty_tag_list,
                      "a finite chain needs at least one position");
  }
  return Chain(Kind::finite, n);
}

Chain Chain::integers() { return Chain(Kind::integers, 0); }

bool Chain::contains(Pos p) const {
  return kind_ == Kind::integers || (p >= 0 && p < size_);
}

const char* tag_name(Tag t) { return t == Tag::Z ? "Z" : "Q"; }

bool hom_admissible(Tag domain, Tag codomain, const Rat& q) {
  if (codomain == Tag::Z) {
    return domain == Tag::Z ? is_integer(q) : q == 0;
  }
  return true;
}

bool iso_admissible(Tag domain, Tag codomain, const Rat& q) {
  if (domain != codomain) return false;
  return domain == Tag::Z ? q == 1 : q > 0;
}

ComponentHom validate_hom(Tag domain, Tag codomain, const Rat& q) {
  if (!hom_admissible(domain, codomain, q)) {
    throw DomainError(Errc::inadmissible_hom,
                      std::string("no homomorphism ") + tag_name(domain) +
                          " -> " + tag_name(codomain) + " with multiplier " +
                          format_rat(q));
  }
  return ComponentHom{domain, codomain, q};
}

ComponentHom validate_iso(Tag domain, Tag codomain, const Rat& q) {
  if (!iso_admissible(domain, codomain, q)) {
    throw DomainError(Errc::inadmissible_hom,
                      std::string("no order isomorphism ") + tag_name(domain) +
                          " -> " + tag_name(codomain) + " with multiplier " +
                          format_rat(q));
  }
  return ComponentHom{domain, codomain, q};
}

ComponentHom compose_homs(const ComponentHom& s, const ComponentHom& t) {
  if (t.codomain != s.domain) {
    throw DomainError(Errc::inadmissible_hom,
                      "composing homs with mismatched middle group");
  }
  return validate_hom(t.domain, s.codomain, s.multiplier * t.multiplier);
}

ComponentHom add_homs(const ComponentHom& a, const ComponentHom& b) {
  if (a.domain != b.domain || a.codomain != b.codomain) {
    throw DomainError(Errc::inadmissible_hom,
                      "adding homs with different domain or codomain");
  }
  return validate_hom(a.domain, a.codomain, a.multiplier + b.multiplier);
}

namespace {

// Shortest p with tags[i] == tags[i mod p] for all i; p always divides the
// input length.
std::vector<Tag> minimal_period(std::vector<Tag> tags) {
  auto n = tags.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i) ok = tags[i] == tags[i % p];
    if (ok) {
      tags.resize(p);
      return tags;
    }
  }
  return tags;
}

Pos floor_mod(Pos a, Pos m) {
  Pos r = a % m;
  return r < 0 ? r + m : r;
}

} // namespace

Skeleton::Skeleton(const Chain& chain, std::vector<Tag> tags)
    : chain_(chain), tags_(std::move(tags)) {
  if (tags_.empty()) {
    throw DomainError(Errc::empty_tag_list, "skeleton needs at least one tag");
  }
  if (chain_.is_finite()) {
    if (static_cast<Pos>(tags_.size()) != chain_.size()) {
      throw DomainError(Errc::length_mismatch,
                        "tag list length " + std::to_string(tags_.size()) +
                            " does not match chain size " +
                            std::to_string(chain_.size()));
    }
  } else {
    tags_ = minimal_period(std::move(tags_));
  }
}

Tag Skeleton::tag_at(Pos p) const {
  if (!chain_.contains(p)) {
    throw DomainError(Errc::position_out_of_range,
                      "position " + std::to_string(p) +
                          " is outside the chain");
  }
  if (chain_.is_finite()) return tags_[static_cast<std::size_t>(p)];
  return tags_[static_cast<std::size_t>(floor_mod(p, period()))];
}

bool Skeleton::has_tag(Tag t) const {
  return std::find(tags_.begin(), tags_.end(), t) != tags_.end();
}

Skeleton make_skeleton(const Chain& chain, std::vector<Tag> tags) {
  return Skeleton(chain, std::move(tags));
}

Skeleton lex_concat(const Skeleton& left, const Skeleton& right) {
  if (!left.chain().is_finite() || !right.chain().is_finite()) {
    throw DomainError(Errc::infinite_concat,
                      "lexicographic concatenation needs finite chains");
  }
  std::vector<Tag> tags = left.tags();
  tags.insert(tags.end(), right.tags().begin(), right.tags().end());
  return Skeleton(Chain::finite(left.chain().size() + right.chain().size()),
                  std::move(tags));
}

ChainAut validate_chain_aut(const Skeleton& sk, Pos shift) {
  if (sk.chain().is_finite()) {
    if (shift != 0) {
      throw DomainError(Errc::not_an_automorphism,
                        "a finite chain admits only the identity "
                        "order automorphism");
    }
    return ChainAut{0};
  }
  Pos p = sk.period();
  for (Pos r = 0; r < p; ++r) {
    if (sk.tag_at(r) != sk.tag_at(r + shift)) {
      throw DomainError(Errc::tag_pattern_broken,
                        "shift " + std::to_string(shift) +
                            " maps a " +
                            tag_name(sk.tag_at(r)) + "-slot onto a " +
                            tag_name(sk.tag_at(r + shift)) + "-slot");
    }
  }
  return ChainAut{shift};
}

SkeletonAut::SkeletonAut(const Skeleton& sk, Pos shift, const Rat& default_iso,
                         const std::map<Pos, Rat>& exceptions)
    : sk_(sk), chain_(validate_chain_aut(sk, shift)) {
  if (default_iso <= 0) {
    throw DomainError(Errc::inadmissible_hom,
                      "default component iso must have positive multiplier");
  }
  // The default only ever applies at Q positions; normalize it to 1 when the
  // skeleton has none (finite chains store everything explicitly).
  bool keep_default = !sk_.chain().is_finite() && sk_.has_tag(Tag::Q);
  default_iso_ = keep_default ? default_iso : Rat(1);

  auto effective_default = [&](Tag tag) {
    return tag == Tag::Q ? default_iso_ : Rat(1);
  };

  if (sk_.chain().is_finite()) {
    for (Pos p = 0; p < sk_.chain().size(); ++p) {
      Tag tag = sk_.tag_at(p);
      Rat q = tag == Tag::Q ? default_iso : Rat(1);
      if (auto it = exceptions.find(p); it != exceptions.end()) q = it->second;
      validate_iso(tag, sk_.tag_at(chain_(p)), q);
      if (q != 1) exceptions_.emplace(p, q);
    }
    for (const auto& [p, q] : exceptions) {
      if (!sk_.chain().contains(p)) {
        throw DomainError(Errc::position_out_of_range,
                          "component iso at position " + std::to_string(p) +
                              " is outside the chain");
      }
    }
  } else {
    for (const auto& [p, q] : exceptions) {
      Tag tag = sk_.tag_at(p);
      validate_iso(tag, sk_.tag_at(chain_(p)), q);
      if (q != effective_default(tag)) exceptions_.emplace(p, q);
    }
  }
}

SkeletonAut SkeletonAut::identity(const Skeleton& sk) {
  return SkeletonAut(sk, 0, Rat(1), {});
}

Rat SkeletonAut::component_at(Pos p) const {
  if (auto it = exceptions_.find(p); it != exceptions_.end()) return it->second;
  return sk_.tag_at(p) == Tag::Q ? default_iso_ : Rat(1);
}

bool SkeletonAut::is_identity() const {
  return chain_.shift == 0 && default_iso_ == 1 && exceptions_.empty();
}

SkeletonAut compose_skeleton_auts(const SkeletonAut& s, const SkeletonAut& t) {
  if (s.skeleton() != t.skeleton()) {
    throw DomainError(Errc::skeleton_mismatch,
                      "composing skeleton automorphisms over different "
                      "skeletons");
  }
  const Skeleton& sk = s.skeleton();
  Pos shift = s.chain_part().shift + t.chain_part().shift;
  std::map<Pos, Rat> exceptions;
  if (sk.chain().is_finite()) {
    for (Pos p = 0; p < sk.chain().size(); ++p) {
      exceptions.emplace(p, s.component_at(t.map_pos(p)) * t.component_at(p));
    }
  } else {
    for (const auto& [p, q] : t.exceptions()) {
      exceptions.emplace(p, s.component_at(t.map_pos(p)) * q);
    }
    for (const auto& [p, q] : s.exceptions()) {
      Pos pre = p - t.chain_part().shift;
      exceptions.emplace(pre, q * t.component_at(pre)); // no-op if present
    }
  }
  return SkeletonAut(sk, shift, s.default_iso() * t.default_iso(), exceptions);
}

SkeletonAut invert_skeleton_aut(const SkeletonAut& t) {
  const Skeleton& sk = t.skeleton();
  Pos shift = -t.chain_part().shift;
  std::map<Pos, Rat> exceptions;
  if (sk.chain().is_finite()) {
    for (Pos p = 0; p < sk.chain().size(); ++p) {
      exceptions.emplace(p, 1 / t.component_at(p));
    }
  } else {
    for (const auto& [p, q] : t.exceptions()) {
      exceptions.emplace(t.map_pos(p), 1 / q);
    }
  }
  return SkeletonAut(sk, shift, 1 / t.default_iso(), exceptions);
}

} // namespace hahn
