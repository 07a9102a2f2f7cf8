#include <doctest.h>

#include <set>
#include <sstream>

#include "hahn/testkit.hpp"

using namespace hahn;
using namespace hahn::testkit;

TEST_CASE("identical seeds reproduce identical case streams") {
  GenConfig cfg;
  Rng a(12345);
  Rng b(12345);
  for (int i = 0; i < 50; ++i) {
    Skeleton sa = gen_skeleton(a, cfg);
    Skeleton sb = gen_skeleton(b, cfg);
    CHECK(sa == sb);
    CHECK(gen_element(a, cfg, sa) == gen_element(b, cfg, sb));
    CHECK(gen_trimatrix(a, cfg, sa, MatrixClass::Delta) ==
          gen_trimatrix(b, cfg, sb, MatrixClass::Delta));
    CHECK(gen_skeleton_aut(a, cfg, sa) == gen_skeleton_aut(b, cfg, sb));
    CHECK(gen_vaut(a, cfg, sa) == gen_vaut(b, cfg, sb));
    CHECK(gen_family(a, cfg, sa) == gen_family(b, cfg, sb));
  }
  // Split streams are independent of the parent and of each other.
  Rng parent(7);
  CHECK(parent.split(0).bits() != parent.split(1).bits());
}

TEST_CASE("generated objects satisfy their class invariants") {
  GenConfig cfg;
  Rng rng(4242);
  for (int i = 0; i < 200; ++i) {
    Skeleton sk = gen_skeleton(rng, cfg);
    CHECK(gen_trimatrix(rng, cfg, sk, MatrixClass::U1).in_U1());
    CHECK(gen_trimatrix(rng, cfg, sk, MatrixClass::T).in_T());
    TriMatrix d = gen_trimatrix(rng, cfg, sk, MatrixClass::Ud);
    CHECK(d.in_T());
    CHECK(d.is_diagonal());
    HahnElement e = gen_element(rng, cfg, sk);
    for (const auto& [p, c] : e.coeffs()) {
      CHECK(c != 0);
      if (sk.tag_at(p) == Tag::Z) CHECK(is_integer(c));
    }
    CHECK(is_positive(gen_positive_element(rng, cfg, sk)));
  }
}

TEST_CASE("config bounds are validated") {
  GenConfig cfg;
  cfg.max_chain = 9;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.max_chain = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = GenConfig{};
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("group family enumeration matches the closure construction") {
  Skeleton one = make_skeleton(Chain::finite(1), {Tag::Q});
  auto fams1 = enumerate_group_families(one);
  CHECK(fams1.size() == 2); // {∅} and {∅, {0}}

  Skeleton two = make_skeleton(Chain::finite(2), {Tag::Q, Tag::Z});
  auto fams2 = enumerate_group_families(two);

  // Independent enumeration: closures of every subset of P(Γ).
  std::set<std::vector<std::uint64_t>> closures;
  for (std::uint64_t gens = 0; gens < 16; ++gens) {
    std::vector<std::vector<Pos>> gen_sets;
    for (std::uint64_t m = 0; m < 4; ++m) {
      if ((gens >> m) & 1) gen_sets.push_back(mask_to_set(m));
    }
    closures.insert(family_from_generators(two, gen_sets).sets());
  }
  std::set<std::vector<std::uint64_t>> enumerated;
  for (const auto& f : fams2) enumerated.insert(f.sets());
  CHECK(enumerated == closures);
  CHECK(fams2.size() == 4);

  // Soundness and completeness against the definitional filter.
  Skeleton three = make_skeleton(Chain::finite(3), {Tag::Q, Tag::Q, Tag::Q});
  auto fams3 = enumerate_group_families(three);
  std::size_t filtered = 0;
  for (std::uint64_t members = 0; members < 256; ++members) {
    std::vector<std::vector<Pos>> sets;
    for (std::uint64_t m = 0; m < 8; ++m) {
      if ((members >> m) & 1) sets.push_back(mask_to_set(m));
    }
    bool closed = closed_family_candidate(members, 3);
    CHECK(closed == is_group_family(three, sets).ok());
    if (closed) ++filtered;
  }
  CHECK(fams3.size() == filtered);
  for (const auto& f : fams3) {
    std::vector<std::vector<Pos>> sets;
    for (std::uint64_t mask : f.sets()) sets.push_back(mask_to_set(mask));
    CHECK(is_group_family(three, sets).ok());
  }

  Skeleton five = make_skeleton(Chain::finite(5),
                                {Tag::Q, Tag::Q, Tag::Q, Tag::Q, Tag::Q});
  CHECK_THROWS_AS(enumerate_group_families(five), DomainError);
}

TEST_CASE("oracle_apply agrees with the sparse implementation") {
  Skeleton sk = make_skeleton(Chain::finite(2), {Tag::Q, Tag::Q});
  TriMatrix m(sk, 1,
              {{{0, 0}, Rat(2)}, {{0, 1}, Rat(3)}, {{1, 1}, Rat(5)}});
  HahnElement a(sk, {{0, Rat(1)}, {1, Rat(1)}});
  CHECK(oracle_apply(a, m) == HahnElement(sk, {{0, Rat(2)}, {1, Rat(8)}}));
  CHECK(oracle_apply(HahnElement::zero(sk), m) == HahnElement::zero(sk));

  GenConfig cfg;
  Rng rng(31337);
  for (int i = 0; i < 300; ++i) {
    Skeleton rsk = gen_skeleton(rng, cfg);
    TriMatrix rm = gen_trimatrix(rng, cfg, rsk, MatrixClass::Delta);
    HahnElement ra = gen_element(rng, cfg, rsk);
    CHECK(oracle_apply(ra, rm) == apply(ra, rm));
  }
}

TEST_CASE("selftest runs clean on a small budget") {
  SelftestOptions options;
  options.cases = 10;
  std::ostringstream out;
  CHECK(run_selftest(options, out) == 0);
  CHECK(out.str().find("ok ") != std::string::npos);
}
