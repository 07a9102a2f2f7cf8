#include <doctest.h>

#include <sstream>

#include "hahn/cli.hpp"
#include "hahn/json_io.hpp"
#include "hahn/testkit.hpp"

using namespace hahn;
using io::json;

namespace {

Skeleton q3() {
  return make_skeleton(Chain::finite(3), {Tag::Q, Tag::Q, Tag::Q});
}

constexpr const char* kQ3 =
    R"({"chain":{"kind":"finite","n":3},"tags":["Q","Q","Q"]})";
constexpr const char* kZQ = R"({"chain":{"kind":"integers"},"tags":["Q"]})";

struct CliResult {
  int code;
  json body;
  std::string text;
};

CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  int code = cli::run(args, out, err);
  json body = json::parse(out.str(), nullptr, false);
  return CliResult{code, body, out.str()};
}

} // namespace

TEST_CASE("element expression syntax round-trips") {
  Skeleton sk = q3();
  HahnElement a = io::parse_element_expr(sk, "3/2*1@0 + -1*1@2");
  CHECK(a == HahnElement(sk, {{0, Rat(3, 2)}, {2, Rat(-1)}}));
  CHECK(io::format_element_expr(a) == "3/2*1@0 + -1*1@2");
  CHECK(io::parse_element_expr(sk, "0") == HahnElement::zero(sk));
  CHECK(io::format_element_expr(HahnElement::zero(sk)) == "0");

  Skeleton z = make_skeleton(Chain::integers(), {Tag::Q});
  CHECK(io::parse_element_expr(z, "1/3*1@-2") ==
        HahnElement::term(z, -2, Rat(1, 3)));

  CHECK_THROWS_AS(io::parse_element_expr(sk, "1*1@0 + 2*1@0"), ParseError);
  CHECK_THROWS_AS(io::parse_element_expr(sk, "0*1@1"), ParseError);
  CHECK_THROWS_AS(io::parse_element_expr(sk, "1*1@"), ParseError);
  CHECK_THROWS_AS(io::parse_element_expr(sk, ""), ParseError);
}

TEST_CASE("JSON schemas round-trip on random objects") {
  testkit::GenConfig cfg;
  testkit::Rng rng(127);
  for (int i = 0; i < 100; ++i) {
    Skeleton sk = testkit::gen_skeleton(rng, cfg);
    CHECK(io::skeleton_from_json(io::to_json(sk)) == sk);
    SkeletonAut t = testkit::gen_skeleton_aut(rng, cfg, sk);
    CHECK(io::skeleton_aut_from_json(sk, io::to_json(t)) == t);
    HahnElement a = testkit::gen_element(rng, cfg, sk);
    CHECK(io::element_from_json(sk, io::to_json(a)) == a);
    CHECK(io::parse_element_expr(sk, io::format_element_expr(a)) == a);
    TriMatrix m = testkit::gen_trimatrix(rng, cfg, sk,
                                         testkit::MatrixClass::Delta);
    CHECK(io::trimatrix_from_json(sk, io::to_json(m)) == m);
    VAut sigma = testkit::gen_vaut(rng, cfg, sk);
    CHECK(io::vaut_from_json(sk, io::to_json(sigma)) == sigma);
    GroupFamily f = testkit::gen_family(rng, cfg, sk);
    CHECK(io::family_from_json(sk, io::to_json(f)) == f);
  }
}

TEST_CASE("JSON validation errors") {
  Skeleton sk = q3();
  CHECK_THROWS_AS(io::skeleton_from_json(json{{"tags", json::array()}}),
                  ParseError);
  CHECK_THROWS_AS(
      io::element_from_json(
          sk, json::parse(R"({"terms":[{"pos":0,"coeff":"0"}]})")),
      ParseError);
  CHECK_THROWS_AS(
      io::element_from_json(
          sk,
          json::parse(
              R"({"terms":[{"pos":0,"coeff":"1"},{"pos":0,"coeff":"2"}]})")),
      ParseError);
  CHECK_THROWS_AS(io::trimatrix_from_json(
                      sk, json::parse(R"({"default_diag":"1","entries":
                      [{"row":1,"col":0,"q":"1"}]})")),
                  DomainError);
  CHECK_THROWS_AS(
      io::skeleton_from_json(json::parse(
          R"({"chain":{"kind":"integers"},"tags":["Q"],"period":2})")),
      DomainError);
  CHECK_THROWS_AS(io::parse_rat("1/0"), ParseError);
  CHECK_THROWS_AS(io::parse_rat("a"), ParseError);
}

TEST_CASE("cli eval computes valuations") {
  CliResult r = run_cli({"eval", "--skeleton", kQ3, "--expr",
                         "3/2*1@0 + -1*1@2", "--op", "valuation"});
  CHECK(r.code == 0);
  CHECK(r.body["valuation"] == 0);

  CliResult inf = run_cli({"eval", "--skeleton", kQ3, "--expr", "0"});
  CHECK(inf.code == 0);
  CHECK(inf.body["valuation"].is_null());

  CliResult cmp = run_cli({"eval", "--skeleton", kQ3, "--expr", "3*1@1",
                           "--expr2", "2*1@0", "--op", "compare"});
  CHECK(cmp.code == 0);
  CHECK(cmp.body["compare"] == "less");

  CliResult add = run_cli({"eval", "--skeleton", kQ3, "--expr", "1/2*1@0",
                           "--expr2", "1/3*1@0", "--op", "add"});
  CHECK(add.code == 0);
  CHECK(add.body["expr"] == "5/6*1@0");

  CliResult convex = run_cli({"eval", "--skeleton", kQ3, "--expr", "1*1@1",
                              "--op", "convex", "--gamma", "1"});
  CHECK(convex.code == 0);
  CHECK(convex.body["in_convex_subgroup"] == true);
}

TEST_CASE("cli apply runs the matrix action") {
  std::string matrix = R"({"default_diag":"1","entries":[
      {"row":0,"col":0,"q":"2"},{"row":0,"col":1,"q":"3"},
      {"row":1,"col":1,"q":"5"}]})";
  CliResult r = run_cli({"apply", "--skeleton",
                         R"({"chain":{"kind":"finite","n":2},"tags":["Q","Q"]})",
                         "--matrix", matrix, "--expr", "1*1@0 + 1*1@1"});
  CHECK(r.code == 0);
  CHECK(r.body["expr"] == "2*1@0 + 8*1@1");
}

TEST_CASE("cli decompose reports exact recomposition") {
  Skeleton sk = q3();
  TriMatrix corr(sk, 1, {{{0, 1}, Rat(3)}});
  SkeletonAut skel(sk, 0, Rat(1), {{1, Rat(2)}});
  std::string sigma = io::to_json(VAut(corr, skel)).dump();
  CliResult r = run_cli({"decompose", "--skeleton", kQ3, "--aut", sigma});
  CHECK(r.code == 0);
  CHECK(r.body["recomposes"] == true);
  CHECK(r.body["internal"]["skel_part"]["shift"] == 0);
  CHECK(r.body["internal"]["skel_part"]["exceptions"].empty());
  CHECK(r.body["external"]["correction"]["entries"].empty());
}

TEST_CASE("cli compose, invert, lift, and lexsum work end to end") {
  Skeleton z = make_skeleton(Chain::integers(), {Tag::Q});
  VAut sigma = canonical_lift(SkeletonAut(z, 1, Rat(2), {}));
  std::string sigma_json = io::to_json(sigma).dump();

  CliResult inv = run_cli({"invert", "--skeleton", kZQ, "--aut", sigma_json});
  CHECK(inv.code == 0);
  CHECK(inv.body["skel_part"]["shift"] == -1);
  CHECK(inv.body["skel_part"]["default_iso"] == "1/2");

  CliResult comp = run_cli({"compose", "--skeleton", kZQ, "--aut", sigma_json,
                            "--aut2", inv.body.dump()});
  CHECK(comp.code == 0);
  CHECK(comp.body == io::to_json(VAut::identity(z)));

  CliResult lift = run_cli(
      {"lift", "--skeleton", kZQ, "--aut",
       R"({"shift":1,"default_iso":"2","exceptions":[]})"});
  CHECK(lift.code == 0);
  CHECK(lift.body == io::to_json(sigma));

  Skeleton sk2 = make_skeleton(Chain::finite(2), {Tag::Q, Tag::Q});
  std::string id2 = io::to_json(VAut::identity(sk2)).dump();
  Skeleton sk1f = make_skeleton(Chain::finite(1), {Tag::Z});
  std::string id1 = io::to_json(VAut::identity(sk1f)).dump();
  CliResult lex = run_cli(
      {"lexsum", "--skeleton",
       R"({"chain":{"kind":"finite","n":2},"tags":["Q","Q"]})", "--skeleton2",
       R"({"chain":{"kind":"finite","n":1},"tags":["Z"]})", "--aut", id2,
       "--aut2", id1});
  CHECK(lex.code == 0);
  CHECK(lex.body["skeleton"]["tags"] == json::array({"Q", "Q", "Z"}));
}

TEST_CASE("cli convex-lift assembles and rejects families") {
  std::string good = R"({"target_shift":0,"blocks":[
      {"default_diag":"1","entries":[{"row":0,"col":0,"q":"2"},
        {"row":1,"col":1,"q":"3"},{"row":1,"col":2,"q":"7"},
        {"row":2,"col":2,"q":"5"}]},
      {"default_diag":"1","entries":[{"row":0,"col":0,"q":"3"},
        {"row":0,"col":1,"q":"7"},{"row":1,"col":1,"q":"5"}]},
      {"default_diag":"1","entries":[{"row":0,"col":0,"q":"5"}]}]})";
  CliResult r = run_cli({"convex-lift", "--skeleton", kQ3, "--blocks", good});
  CHECK(r.code == 0);
  CHECK(r.body["skel_part"]["shift"] == 0);

  std::string bad = R"({"target_shift":0,"blocks":[
      {"default_diag":"1","entries":[{"row":0,"col":0,"q":"2"},
        {"row":1,"col":1,"q":"3"},{"row":1,"col":2,"q":"7"},
        {"row":2,"col":2,"q":"5"}]},
      {"default_diag":"1","entries":[{"row":0,"col":0,"q":"3"},
        {"row":0,"col":1,"q":"7"},{"row":1,"col":1,"q":"5"}]},
      {"default_diag":"1","entries":[{"row":0,"col":0,"q":"4"}]}]})";
  CliResult fail = run_cli({"convex-lift", "--skeleton", kQ3, "--blocks", bad});
  CHECK(fail.code == 3);
  CHECK(fail.body["error"] == "IncoherentFamily");
  CHECK(fail.body["delta"] == 1);
  CHECK(fail.body["gamma"] == 2);
  CHECK(fail.body["entry"]["row"] == 2);
  CHECK(fail.body["entry"]["col"] == 2);
}

TEST_CASE("cli family verbs") {
  CliResult closure = run_cli({"family", "closure", "--skeleton", kQ3,
                               "--gens", "[[0,1]]"});
  CHECK(closure.code == 0);
  CHECK(closure.body["size"] == 4);

  CliResult check = run_cli({"family", "check", "--skeleton", kQ3, "--sets",
                             "[[],[0],[1]]"});
  CHECK(check.code == 0);
  CHECK(check.body["group_family"] == false);
  CHECK(check.body["violation"]["kind"] == "union_missing");

  CliResult stable = run_cli(
      {"family", "stable", "--skeleton", kZQ, "--family",
       R"({"descriptor":"finite_within","bound":0})", "--aut",
       R"({"shift":-1,"default_iso":"1","exceptions":[]})"});
  CHECK(stable.code == 0);
  CHECK(stable.body["setwise"] == false);
  CHECK(stable.body["lift_closed"] == false);
  CHECK(stable.body["witness"] == json::array({0}));
}

TEST_CASE("cli maps error classes to exit codes") {
  CliResult parse = run_cli({"eval", "--skeleton", "{not json", "--expr", "0"});
  CHECK(parse.code == 2);
  CHECK(parse.body["error"] == "ParseError");

  CliResult missing = run_cli({"eval"});
  CHECK(missing.code == 2);

  CliResult domain = run_cli({"eval", "--skeleton", kQ3, "--expr", "1*1@5"});
  CHECK(domain.code == 3);
  CHECK(domain.body["error"] == "PositionOutOfRange");

  CliResult unknown = run_cli({"noverb"});
  CHECK(unknown.code == 2);
}

TEST_CASE("cli selftest smoke run") {
  std::ostringstream out;
  std::ostringstream err;
  int code = cli::run({"selftest", "--cases", "5", "--seed", "99"}, out, err);
  CHECK(code == 0);
  CHECK(out.str().find("ok serialization-round-trip") != std::string::npos);
}
