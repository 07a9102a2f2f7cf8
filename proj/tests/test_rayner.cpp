#include <doctest.h>

#include <algorithm>
#include <set>

#include "hahn/rayner.hpp"
#include "hahn/testkit.hpp"

using namespace hahn;

namespace {

Skeleton q3() {
  return make_skeleton(Chain::finite(3), {Tag::Q, Tag::Q, Tag::Q});
}

Skeleton zq() { return make_skeleton(Chain::integers(), {Tag::Q}); }

std::set<std::vector<Pos>> member_sets(const GroupFamily& f) {
  std::set<std::vector<Pos>> out;
  for (std::uint64_t mask : f.sets()) out.insert(mask_to_set(mask));
  return out;
}

} // namespace

TEST_CASE("family_from_generators computes the closure") {
  Skeleton sk = q3();
  GroupFamily f = family_from_generators(sk, {{0, 1}});
  CHECK(member_sets(f) ==
        std::set<std::vector<Pos>>{{}, {0}, {1}, {0, 1}});

  GroupFamily empty = family_from_generators(sk, {});
  CHECK(member_sets(empty) == std::set<std::vector<Pos>>{{}});

  GroupFamily two = family_from_generators(sk, {{0}, {2}});
  CHECK(member_sets(two) ==
        std::set<std::vector<Pos>>{{}, {0}, {2}, {0, 2}});

  try {
    family_from_generators(sk, {{0, 7}});
    CHECK(false);
  } catch (const DomainError& e) {
    CHECK(e.code() == Errc::position_out_of_range);
  }
}

TEST_CASE("closure construction is idempotent") {
  testkit::GenConfig cfg;
  testkit::Rng rng(101);
  for (int i = 0; i < 50; ++i) {
    Skeleton sk = testkit::gen_finite_skeleton(rng, cfg, 5);
    GroupFamily f = testkit::gen_family(rng, cfg, sk);
    std::vector<std::vector<Pos>> members;
    for (std::uint64_t mask : f.sets()) members.push_back(mask_to_set(mask));
    CHECK(family_from_generators(sk, members) == f);
  }
}

TEST_CASE("is_group_family reports the first violation") {
  Skeleton sk2 = make_skeleton(Chain::finite(2), {Tag::Q, Tag::Q});

  CHECK(is_group_family(sk2, {{}, {0}, {1}, {0, 1}}).ok());

  FamilyCheck missing_subset = is_group_family(sk2, {{}, {0, 1}});
  CHECK(!missing_subset.ok());
  CHECK(missing_subset.violation->kind ==
        FamilyViolation::Kind::subset_missing);
  CHECK(missing_subset.violation->a == std::vector<Pos>{0, 1});
  CHECK(missing_subset.violation->b == std::vector<Pos>{0});

  FamilyCheck missing_union = is_group_family(sk2, {{}, {0}, {1}});
  CHECK(!missing_union.ok());
  CHECK(missing_union.violation->kind == FamilyViolation::Kind::union_missing);
  CHECK(missing_union.violation->a == std::vector<Pos>{0});
  CHECK(missing_union.violation->b == std::vector<Pos>{1});

  FamilyCheck no_empty = is_group_family(sk2, {{0}});
  CHECK(!no_empty.ok());
  CHECK(no_empty.violation->kind == FamilyViolation::Kind::empty_missing);
}

TEST_CASE("rayner_contains tests support membership") {
  Skeleton sk = zq();
  GroupFamily all = GroupFamily::all_finite(sk);
  GroupFamily nonneg =
      GroupFamily::finite_within(sk, GroupFamily::HalfLine{0});

  CHECK(rayner_contains(all, HahnElement::zero(sk)));
  CHECK(rayner_contains(nonneg, HahnElement::zero(sk)));
  CHECK(rayner_contains(all, HahnElement(sk, {{-9, Rat(1)}, {4, Rat(2)}})));
  CHECK(!rayner_contains(nonneg, HahnElement::term(sk, -1, Rat(1))));
  CHECK(rayner_contains(nonneg, HahnElement(sk, {{0, Rat(1)}, {3, Rat(1)}})));

  Skeleton fin = q3();
  GroupFamily f = family_from_generators(fin, {{0, 1}});
  CHECK(rayner_contains(f, HahnElement(fin, {{0, Rat(1)}, {1, Rat(2)}})));
  CHECK(!rayner_contains(f, HahnElement::term(fin, 2, Rat(1))));
}

TEST_CASE("Rayner groups are subgroups (sampled)") {
  testkit::GenConfig cfg;
  testkit::Rng rng(103);
  for (int i = 0; i < 200; ++i) {
    Skeleton sk = testkit::gen_skeleton(rng, cfg);
    GroupFamily f = testkit::gen_family(rng, cfg, sk);
    HahnElement a = testkit::gen_element(rng, cfg, sk);
    HahnElement b = testkit::gen_element(rng, cfg, sk);
    if (rayner_contains(f, a) && rayner_contains(f, b)) {
      CHECK(rayner_contains(f, a + b));
      CHECK(rayner_contains(f, -a));
    }
  }
}

TEST_CASE("setwise stability of symbolic families under shifts") {
  Skeleton sk = zq();
  GroupFamily all = GroupFamily::all_finite(sk);
  GroupFamily nonneg =
      GroupFamily::finite_within(sk, GroupFamily::HalfLine{0});

  SkeletonAut up(sk, 1, Rat(1), {});
  SkeletonAut down(sk, -1, Rat(1), {});

  CHECK(is_stable_setwise(all, up));
  CHECK(is_stable_setwise(all, down));
  CHECK(is_stable_setwise(nonneg, up));
  CHECK(!is_stable_setwise(nonneg, down));
  CHECK(setwise_instability_witness(nonneg, down) == std::vector<Pos>{0});

  GroupFamily evens = GroupFamily::finite_within(
      sk, GroupFamily::Periodic{2, std::vector<Pos>{0}});
  SkeletonAut up2(sk, 2, Rat(1), {});
  CHECK(is_stable_setwise(evens, up2));
  CHECK(!is_stable_setwise(evens, up));
  CHECK(setwise_instability_witness(evens, up) == std::vector<Pos>{0});
}

TEST_CASE("finite-chain families are stable under identity chain parts") {
  testkit::GenConfig cfg;
  testkit::Rng rng(107);
  for (int i = 0; i < 50; ++i) {
    Skeleton sk = testkit::gen_finite_skeleton(rng, cfg, 4);
    GroupFamily f = testkit::gen_family(rng, cfg, sk);
    SkeletonAut t = testkit::gen_component_aut(rng, cfg, sk);
    CHECK(is_stable_setwise(f, t));
    CHECK(is_stable_pointwise(f, t));
    CHECK(canonical_lift_closed(f, t));
  }
}

TEST_CASE("pointwise stability is stronger than needed for lifting") {
  // The paper's statement reads τ̄(T) = T, but its proof only uses
  // τ̄(T) ∈ F: the Hahn-sum family under a shift separates the two.
  Skeleton sk = zq();
  GroupFamily all = GroupFamily::all_finite(sk);
  SkeletonAut up(sk, 1, Rat(1), {});
  CHECK(canonical_lift_closed(all, up));
  CHECK(is_stable_setwise(all, up));
  CHECK(!is_stable_pointwise(all, up));
  CHECK(is_stable_pointwise(all, SkeletonAut::identity(sk)));
}

TEST_CASE("canonical_lift_closed matches the membership examples") {
  Skeleton sk = zq();
  GroupFamily nonneg =
      GroupFamily::finite_within(sk, GroupFamily::HalfLine{0});
  CHECK(canonical_lift_closed(nonneg, SkeletonAut::identity(sk)));
  CHECK(!canonical_lift_closed(nonneg, SkeletonAut(sk, -1, Rat(1), {})));

  Skeleton fin = make_skeleton(Chain::finite(2), {Tag::Q, Tag::Z});
  GroupFamily f = family_from_generators(fin, {{0}});
  CHECK(canonical_lift_closed(f, SkeletonAut(fin, 0, Rat(5), {})));
}

TEST_CASE("stability-lifting equivalence, exhaustive for small chains") {
  testkit::GenConfig cfg;
  testkit::Rng rng(109);
  for (Pos n = 1; n <= 3; ++n) {
    std::vector<Tag> tags;
    for (Pos i = 0; i < n; ++i) tags.push_back(rng.coin() ? Tag::Q : Tag::Z);
    Skeleton sk = make_skeleton(Chain::finite(n), tags);
    for (const GroupFamily& f : testkit::enumerate_group_families(sk)) {
      SkeletonAut id = SkeletonAut::identity(sk);
      CHECK(is_stable_setwise(f, id) == canonical_lift_closed(f, id));
      for (int k = 0; k < 2; ++k) {
        SkeletonAut t = testkit::gen_component_aut(rng, cfg, sk);
        CHECK(is_stable_setwise(f, t) == canonical_lift_closed(f, t));
      }
    }
  }

  Skeleton sk = zq();
  std::vector<GroupFamily> families{GroupFamily::all_finite(sk)};
  for (Pos bound = -2; bound <= 2; ++bound) {
    families.push_back(
        GroupFamily::finite_within(sk, GroupFamily::HalfLine{bound}));
  }
  families.push_back(GroupFamily::finite_within(
      sk, GroupFamily::Periodic{2, std::vector<Pos>{0}}));
  families.push_back(GroupFamily::finite_within(
      sk, GroupFamily::Periodic{3, std::vector<Pos>{0, 1}}));
  for (const GroupFamily& f : families) {
    for (Pos shift = -3; shift <= 3; ++shift) {
      SkeletonAut t(sk, shift, Rat(1), {});
      CHECK(is_stable_setwise(f, t) == canonical_lift_closed(f, t));
    }
  }
}

TEST_CASE("the Hahn-sum family is stable under every automorphism") {
  testkit::GenConfig cfg;
  testkit::Rng rng(113);
  for (int i = 0; i < 100; ++i) {
    Skeleton sk = testkit::gen_skeleton(rng, cfg);
    GroupFamily all = GroupFamily::all_finite(sk);
    SkeletonAut t = testkit::gen_skeleton_aut(rng, cfg, sk);
    CHECK(is_stable_setwise(all, t));
    CHECK(canonical_lift_closed(all, t));
  }
}
