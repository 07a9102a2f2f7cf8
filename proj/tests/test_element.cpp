#include <doctest.h>

#include "hahn/element.hpp"
#include "hahn/testkit.hpp"

using namespace hahn;

namespace {

Skeleton q3() {
  return make_skeleton(Chain::finite(3), {Tag::Q, Tag::Q, Tag::Q});
}

Skeleton zq() { return make_skeleton(Chain::integers(), {Tag::Q}); }

} // namespace

TEST_CASE("group arithmetic drops zero coefficients") {
  Skeleton sk = q3();
  HahnElement a(sk, {{0, Rat(2)}, {1, Rat(3)}});
  HahnElement b(sk, {{0, Rat(-2)}});
  CHECK(a + HahnElement::zero(sk) == a);
  CHECK(a + b == HahnElement::term(sk, 1, Rat(3)));
  CHECK((a + b).coeffs().size() == 1);

  HahnElement half = HahnElement::term(sk, 0, Rat(1, 2));
  HahnElement third = HahnElement::term(sk, 0, Rat(1, 3));
  CHECK(half + third == HahnElement::term(sk, 0, Rat(5, 6)));

  CHECK(a - a == HahnElement::zero(sk));
  CHECK(-(-a) == a);
}

TEST_CASE("coefficients respect component tags") {
  Skeleton sk = make_skeleton(Chain::finite(2), {Tag::Z, Tag::Q});
  CHECK_NOTHROW(HahnElement(sk, {{0, Rat(4)}, {1, Rat(1, 3)}}));
  CHECK_THROWS_AS(HahnElement(sk, {{0, Rat(1, 2)}}), DomainError);
  try {
    HahnElement::term(sk, 5, Rat(1));
    CHECK(false);
  } catch (const DomainError& e) {
    CHECK(e.code() == Errc::position_out_of_range);
  }
}

TEST_CASE("valuation is the minimum of the support, infinity at zero") {
  Skeleton sk = make_skeleton(Chain::integers(), {Tag::Q});
  CHECK(valuation(HahnElement::zero(sk)).is_infinite());
  HahnElement a(sk, {{2, Rat(1)}, {7, Rat(5)}});
  CHECK(valuation(a) == Valuation::at(2));

  HahnElement b = HahnElement::term(sk, 1, Rat(1));
  HahnElement c = HahnElement::term(sk, 3, Rat(1));
  CHECK(valuation(b + c) == Valuation::at(1)); // v(a+b) = min when unequal
}

TEST_CASE("lexicographic order is decided by the leading coefficient") {
  Skeleton sk = q3();
  HahnElement a(sk, {{0, Rat(-1)}, {1, Rat(100)}});
  CHECK(lex_compare(a, HahnElement::zero(sk)) == std::strong_ordering::less);

  HahnElement b = HahnElement::term(sk, 1, Rat(3));
  HahnElement c = HahnElement::term(sk, 0, Rat(2));
  CHECK(lex_compare(b, c) == std::strong_ordering::less);
  CHECK(lex_compare(b, b) == std::strong_ordering::equal);
}

TEST_CASE("convex subgroup membership") {
  Skeleton sk = q3();
  CHECK(in_convex_subgroup(HahnElement::zero(sk), 2));
  HahnElement a(sk, {{1, Rat(1)}, {2, Rat(1)}});
  CHECK(in_convex_subgroup(a, 1));
  CHECK(!in_convex_subgroup(HahnElement::term(sk, 0, Rat(1)), 1));
  CHECK_THROWS_AS(in_convex_subgroup(a, 5), DomainError);
}

TEST_CASE("convex subgroups are convex and nested") {
  testkit::GenConfig cfg;
  testkit::Rng rng(11);
  Skeleton sk = make_skeleton(Chain::finite(4),
                              {Tag::Q, Tag::Z, Tag::Q, Tag::Q});
  for (int i = 0; i < 200; ++i) {
    HahnElement x = testkit::gen_element(rng, cfg, sk);
    HahnElement y = testkit::gen_element(rng, cfg, sk);
    Pos gamma = rng.range(0, 3);
    if (in_convex_subgroup(x, gamma) && in_convex_subgroup(y, gamma)) {
      CHECK(in_convex_subgroup(x + y, gamma));
      CHECK(in_convex_subgroup(-x, gamma));
    }
    if (is_positive(x) && in_convex_subgroup(x, gamma) &&
        lex_compare(y, HahnElement::zero(sk)) >= 0 && lex_compare(y, x) <= 0) {
      CHECK(in_convex_subgroup(y, gamma));
    }
    for (Pos delta = gamma; delta < 4; ++delta) {
      if (in_convex_subgroup(x, delta)) CHECK(in_convex_subgroup(x, gamma));
    }
  }
}

TEST_CASE("ultrametric inequality with equality off the diagonal") {
  testkit::GenConfig cfg;
  testkit::Rng rng(13);
  for (int i = 0; i < 300; ++i) {
    Skeleton sk = testkit::gen_skeleton(rng, cfg);
    HahnElement a = testkit::gen_element(rng, cfg, sk);
    HahnElement b = testkit::gen_element(rng, cfg, sk);
    Valuation va = valuation(a);
    Valuation vb = valuation(b);
    Valuation vs = valuation(a + b);
    if (!va.is_infinite() || !vb.is_infinite()) {
      Pos lower = va.is_infinite()   ? vb.position()
                  : vb.is_infinite() ? va.position()
                                     : std::min(va.position(), vb.position());
      CHECK(vs.at_least(lower));
      if (va != vb) CHECK(vs == Valuation::at(lower));
    }
    CHECK(valuation(-a) == va);
    CHECK((-a).coeffs().size() == a.coeffs().size());
  }
}

TEST_CASE("lex order is translation invariant and total") {
  testkit::GenConfig cfg;
  testkit::Rng rng(17);
  for (int i = 0; i < 300; ++i) {
    Skeleton sk = testkit::gen_skeleton(rng, cfg);
    HahnElement a = testkit::gen_element(rng, cfg, sk);
    HahnElement b = testkit::gen_element(rng, cfg, sk);
    HahnElement c = testkit::gen_element(rng, cfg, sk);
    CHECK(lex_compare(a, b) == lex_compare(a + c, b + c));
    CHECK((lex_compare(a, b) == std::strong_ordering::equal) == (a == b));
    // Definitional round-trip: positive iff leading coefficient positive.
    if (!a.is_zero()) {
      Pos v = valuation(a).position();
      CHECK((lex_compare(a, HahnElement::zero(sk)) ==
             std::strong_ordering::greater) == (a.coeff_at(v) > 0));
    }
  }
}

TEST_CASE("lex_embed offsets side-2 positions and preserves order") {
  Skeleton sk1 = make_skeleton(Chain::finite(2), {Tag::Q, Tag::Q});
  Skeleton sk2 = make_skeleton(Chain::finite(1), {Tag::Z});
  HahnElement x = HahnElement::term(sk2, 0, Rat(1));
  HahnElement embedded = lex_embed(sk1, sk2, x, 2);
  CHECK(embedded == HahnElement::term(lex_concat(sk1, sk2), 2, Rat(1)));
  CHECK(lex_embed(sk1, sk2, HahnElement::zero(sk1), 1) ==
        HahnElement::zero(lex_concat(sk1, sk2)));

  testkit::GenConfig cfg;
  testkit::Rng rng(19);
  for (int i = 0; i < 100; ++i) {
    HahnElement a = testkit::gen_element(rng, cfg, sk1);
    HahnElement b = testkit::gen_element(rng, cfg, sk1);
    CHECK(lex_compare(a, b) ==
          lex_compare(lex_embed(sk1, sk2, a, 1), lex_embed(sk1, sk2, b, 1)));
    HahnElement c = testkit::gen_element(rng, cfg, sk2);
    HahnElement d = testkit::gen_element(rng, cfg, sk2);
    CHECK(lex_compare(c, d) ==
          lex_compare(lex_embed(sk1, sk2, c, 2), lex_embed(sk1, sk2, d, 2)));
  }
}

TEST_CASE("operations reject mismatched skeletons") {
  HahnElement a = HahnElement::term(q3(), 0, Rat(1));
  HahnElement b = HahnElement::term(zq(), 0, Rat(1));
  CHECK_THROWS_AS(a + b, DomainError);
  CHECK_THROWS_AS(lex_compare(a, b), DomainError);
}
