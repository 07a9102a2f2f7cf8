#include "hahn/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "hahn/json_io.hpp"
#include "hahn/testkit.hpp"

namespace hahn::cli {

namespace {

using io::json;

// Inputs are file paths or inline JSON literals; anything that starts with
// '{' or '[' is taken inline.
json load_json(const std::string& input) {
  std::string text = input;
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw ParseError("empty JSON input");
  if (text[first] != '{' && text[first] != '[') {
    std::ifstream file(input);
    if (!file) throw ParseError("cannot open file '" + input + "'");
    std::stringstream buffer;
    buffer << file.rdbuf();
    text = buffer.str();
  }
  json parsed = json::parse(text, nullptr, false);
  if (parsed.is_discarded()) {
    throw ParseError("malformed JSON in '" + input + "'");
  }
  return parsed;
}

void emit(const json& body, const std::string& output_path,
          std::ostream& out) {
  if (output_path.empty()) {
    out << body.dump(2) << "\n";
    return;
  }
  std::ofstream file(output_path);
  if (!file) throw ParseError("cannot open output file '" + output_path + "'");
  file << body.dump(2) << "\n";
}

json valuation_json(const Valuation& v) {
  return v.is_infinite() ? json(nullptr) : json(v.position());
}

struct EvalArgs {
  std::string skeleton;
  std::string expr;
  std::string expr2;
  std::string op = "valuation";
  Pos gamma = 0;
  bool gamma_set = false;
};

json run_eval(const EvalArgs& args) {
  Skeleton sk = io::skeleton_from_json(load_json(args.skeleton));
  HahnElement a = io::parse_element_expr(sk, args.expr);
  auto need_second = [&]() {
    if (args.expr2.empty()) {
      throw ParseError("--op " + args.op + " needs --expr2");
    }
    return io::parse_element_expr(sk, args.expr2);
  };
  if (args.op == "valuation") {
    return json{{"valuation", valuation_json(valuation(a))}};
  }
  if (args.op == "compare") {
    auto c = lex_compare(a, need_second());
    const char* name = c < 0 ? "less" : c > 0 ? "greater" : "equal";
    return json{{"compare", name}};
  }
  if (args.op == "add") {
    HahnElement sum = a + need_second();
    return json{{"result", io::to_json(sum)},
                {"expr", io::format_element_expr(sum)}};
  }
  if (args.op == "negate") {
    HahnElement neg = -a;
    return json{{"result", io::to_json(neg)},
                {"expr", io::format_element_expr(neg)}};
  }
  if (args.op == "convex") {
    if (!args.gamma_set) throw ParseError("--op convex needs --gamma");
    return json{{"in_convex_subgroup", in_convex_subgroup(a, args.gamma)}};
  }
  throw ParseError("unknown --op '" + args.op + "'");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Exact computer algebra for Hahn groups over computable "
               "chains: elements, valuations, triangular matrices, and "
               "automorphism decompositions"};
  app.require_subcommand(1);

  std::string output_path;
  app.add_option("--output", output_path, "Write the JSON result to a file");

  // eval
  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "Element operations");
  eval->add_option("--skeleton", eval_args.skeleton, "Skeleton JSON")
      ->required();
  eval->add_option("--expr", eval_args.expr, "Element expression")->required();
  eval->add_option("--expr2", eval_args.expr2, "Second element expression");
  eval->add_option("--op", eval_args.op,
                   "valuation | compare | add | negate | convex");
  eval->add_option("--gamma", eval_args.gamma, "Position for --op convex")
      ->each([&eval_args](const std::string&) { eval_args.gamma_set = true; });

  // apply
  std::string apply_skeleton, apply_matrix, apply_expr;
  CLI::App* apply_cmd =
      app.add_subcommand("apply", "Apply a triangular matrix to an element");
  apply_cmd->add_option("--skeleton", apply_skeleton, "Skeleton JSON")
      ->required();
  apply_cmd->add_option("--matrix", apply_matrix, "TriMatrix JSON")
      ->required();
  apply_cmd->add_option("--expr", apply_expr, "Element expression")
      ->required();

  // compose / invert / decompose
  std::string aut_skeleton, aut_input, aut_input2;
  CLI::App* compose_cmd =
      app.add_subcommand("compose", "Compose two automorphisms");
  CLI::App* invert_cmd = app.add_subcommand("invert", "Invert an automorphism");
  CLI::App* decompose_cmd = app.add_subcommand(
      "decompose", "Split into internal and external factors");
  for (CLI::App* cmd : {compose_cmd, invert_cmd, decompose_cmd}) {
    cmd->add_option("--skeleton", aut_skeleton, "Skeleton JSON")->required();
    cmd->add_option("--aut", aut_input, "VAut JSON")->required();
  }
  compose_cmd->add_option("--aut2", aut_input2, "Second VAut JSON")
      ->required();

  // lift
  std::string lift_skeleton, lift_aut;
  CLI::App* lift_cmd =
      app.add_subcommand("lift", "Canonical lift of a skeleton automorphism");
  lift_cmd->add_option("--skeleton", lift_skeleton, "Skeleton JSON")
      ->required();
  lift_cmd->add_option("--aut", lift_aut, "SkeletonAut JSON")->required();

  // convex-lift
  std::string convex_skeleton, convex_blocks;
  CLI::App* convex_cmd = app.add_subcommand(
      "convex-lift", "Assemble an automorphism from convex-subgroup blocks");
  convex_cmd->add_option("--skeleton", convex_skeleton, "Skeleton JSON")
      ->required();
  convex_cmd
      ->add_option("--blocks", convex_blocks,
                   "{\"target_shift\": int, \"blocks\": [TriMatrix...]}")
      ->required();

  // lexsum
  std::string lex_sk1, lex_sk2, lex_aut1, lex_aut2;
  CLI::App* lexsum_cmd = app.add_subcommand(
      "lexsum", "Lift automorphisms blockwise to the concatenated skeleton");
  lexsum_cmd->add_option("--skeleton", lex_sk1, "Left skeleton JSON")
      ->required();
  lexsum_cmd->add_option("--skeleton2", lex_sk2, "Right skeleton JSON")
      ->required();
  lexsum_cmd->add_option("--aut", lex_aut1, "Left VAut JSON")->required();
  lexsum_cmd->add_option("--aut2", lex_aut2, "Right VAut JSON")->required();

  // family
  CLI::App* family_cmd = app.add_subcommand("family", "Group family tools");
  family_cmd->require_subcommand(1);
  std::string fam_skeleton, fam_gens, fam_sets, fam_family, fam_aut;
  CLI::App* fam_closure = family_cmd->add_subcommand(
      "closure", "Smallest group family containing the generators");
  fam_closure->add_option("--skeleton", fam_skeleton, "Skeleton JSON")
      ->required();
  fam_closure->add_option("--gens", fam_gens, "JSON array of position sets")
      ->required();
  CLI::App* fam_check = family_cmd->add_subcommand(
      "check", "Check the group-family conditions on a set list");
  fam_check->add_option("--skeleton", fam_skeleton, "Skeleton JSON")
      ->required();
  fam_check->add_option("--sets", fam_sets, "JSON array of position sets")
      ->required();
  CLI::App* fam_stable = family_cmd->add_subcommand(
      "stable", "Stability and canonical-lift closure of a family");
  fam_stable->add_option("--skeleton", fam_skeleton, "Skeleton JSON")
      ->required();
  fam_stable->add_option("--family", fam_family, "GroupFamily JSON")
      ->required();
  fam_stable->add_option("--aut", fam_aut, "SkeletonAut JSON")->required();

  // selftest
  testkit::SelftestOptions selftest_options;
  CLI::App* selftest_cmd =
      app.add_subcommand("selftest", "Run all property suites");
  selftest_cmd->add_option("--seed", selftest_options.seed, "RNG seed");
  selftest_cmd->add_option("--cases", selftest_options.cases,
                           "Cases per suite");
  selftest_cmd->add_option("--max-chain", selftest_options.max_chain,
                           "Largest chain size generated");

  std::vector<std::string> cli_args(args.rbegin(), args.rend());
  try {
    app.parse(cli_args);
  } catch (const CLI::Success& e) {
    return app.exit(e, err, err); // help / version
  } catch (const CLI::ParseError& e) {
    emit(json{{"error", "ParseError"}, {"detail", e.what()}}, "", out);
    return 2;
  }

  try {
    json result;
    if (*eval) {
      result = run_eval(eval_args);
    } else if (*apply_cmd) {
      Skeleton sk = io::skeleton_from_json(load_json(apply_skeleton));
      TriMatrix m = io::trimatrix_from_json(sk, load_json(apply_matrix));
      HahnElement a = io::parse_element_expr(sk, apply_expr);
      HahnElement b = apply(a, m);
      result = json{{"result", io::to_json(b)},
                    {"expr", io::format_element_expr(b)}};
    } else if (*compose_cmd) {
      Skeleton sk = io::skeleton_from_json(load_json(aut_skeleton));
      VAut s1 = io::vaut_from_json(sk, load_json(aut_input));
      VAut s2 = io::vaut_from_json(sk, load_json(aut_input2));
      result = io::to_json(compose(s1, s2));
    } else if (*invert_cmd) {
      Skeleton sk = io::skeleton_from_json(load_json(aut_skeleton));
      result = io::to_json(invert(io::vaut_from_json(sk, load_json(aut_input))));
    } else if (*decompose_cmd) {
      Skeleton sk = io::skeleton_from_json(load_json(aut_skeleton));
      VAut sigma = io::vaut_from_json(sk, load_json(aut_input));
      auto [internal, external] = decompose(sigma);
      bool recomposes = compose(internal, external) == sigma;
      result = json{{"internal", io::to_json(internal)},
                    {"external", io::to_json(external)},
                    {"recomposes", recomposes}};
    } else if (*lift_cmd) {
      Skeleton sk = io::skeleton_from_json(load_json(lift_skeleton));
      SkeletonAut t = io::skeleton_aut_from_json(sk, load_json(lift_aut));
      result = io::to_json(canonical_lift(t));
    } else if (*convex_cmd) {
      Skeleton sk = io::skeleton_from_json(load_json(convex_skeleton));
      ConvexFamily family =
          io::convex_family_from_json(sk, load_json(convex_blocks));
      result = io::to_json(lift_from_convex_family(family));
    } else if (*lexsum_cmd) {
      Skeleton sk1 = io::skeleton_from_json(load_json(lex_sk1));
      Skeleton sk2 = io::skeleton_from_json(load_json(lex_sk2));
      VAut s1 = io::vaut_from_json(sk1, load_json(lex_aut1));
      VAut s2 = io::vaut_from_json(sk2, load_json(lex_aut2));
      VAut lifted = lex_sum_lift(s1, s2);
      result = json{{"skeleton", io::to_json(lex_concat(sk1, sk2))},
                    {"aut", io::to_json(lifted)}};
    } else if (*fam_closure) {
      Skeleton sk = io::skeleton_from_json(load_json(fam_skeleton));
      json gens = load_json(fam_gens);
      std::vector<std::vector<Pos>> sets;
      for (const auto& g : gens) sets.push_back(g.get<std::vector<Pos>>());
      GroupFamily family = family_from_generators(sk, sets);
      result = io::to_json(family);
      result["size"] = family.sets().size();
    } else if (*fam_check) {
      Skeleton sk = io::skeleton_from_json(load_json(fam_skeleton));
      json jsets = load_json(fam_sets);
      std::vector<std::vector<Pos>> sets;
      for (const auto& s : jsets) sets.push_back(s.get<std::vector<Pos>>());
      FamilyCheck check = is_group_family(sk, sets);
      result = json{{"group_family", check.ok()}};
      if (!check.ok()) {
        const char* kind =
            check.violation->kind == FamilyViolation::Kind::union_missing
                ? "union_missing"
            : check.violation->kind == FamilyViolation::Kind::subset_missing
                ? "subset_missing"
                : "empty_missing";
        result["violation"] = json{{"kind", kind},
                                   {"a", check.violation->a},
                                   {"b", check.violation->b}};
      }
    } else if (*fam_stable) {
      Skeleton sk = io::skeleton_from_json(load_json(fam_skeleton));
      GroupFamily family = io::family_from_json(sk, load_json(fam_family));
      SkeletonAut t = io::skeleton_aut_from_json(sk, load_json(fam_aut));
      result = json{{"setwise", is_stable_setwise(family, t)},
                    {"pointwise", is_stable_pointwise(family, t)},
                    {"lift_closed", canonical_lift_closed(family, t)}};
      if (auto witness = setwise_instability_witness(family, t)) {
        result["witness"] = *witness;
      }
    } else if (*selftest_cmd) {
      return testkit::run_selftest(selftest_options, out);
    }
    emit(result, output_path, out);
    return 0;
  } catch (const ParseError& e) {
    emit(json{{"error", "ParseError"}, {"detail", e.what()}}, "", out);
    return 2;
  } catch (const IncoherentFamilyError& e) {
    emit(json{{"error", errc_name(e.code())},
              {"detail", e.what()},
              {"delta", e.delta},
              {"gamma", e.gamma},
              {"entry", json{{"row", e.row}, {"col", e.col}}}},
         "", out);
    return 3;
  } catch (const DomainError& e) {
    emit(json{{"error", errc_name(e.code())}, {"detail", e.what()}}, "", out);
    return 3;
  } catch (const std::exception& e) {
    emit(json{{"error", "InternalBug"}, {"detail", e.what()}}, "", out);
    return 4;
  }
}

} // namespace hahn::cli
