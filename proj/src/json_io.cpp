#include "hahn/json_io.hpp"

#include <cctype>
#include <map>
#include <set>
#include <vector>

namespace hahn::io {

namespace {

const json& require_field(const json& j, const char* key) {
  if (!j.is_object()) {
    throw ParseError(std::string("expected an object with field '") + key +
                     "'");
  }
  auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  return *it;
}

Pos as_pos(const json& j, const char* what) {
  if (!j.is_number_integer()) {
    throw ParseError(std::string(what) + " must be an integer");
  }
  return j.get<Pos>();
}

Rat as_rat(const json& j, const char* what) {
  if (!j.is_string()) {
    throw ParseError(std::string(what) +
                     " must be a rational string \"p/q\"");
  }
  return parse_rat(j.get<std::string>());
}

Tag tag_from_string(const std::string& s) {
  if (s == "Z") return Tag::Z;
  if (s == "Q") return Tag::Q;
  throw ParseError("unknown component tag '" + s + "' (expected \"Z\" or "
                   "\"Q\")");
}

} // namespace

json to_json(const Skeleton& sk) {
  json tags = json::array();
  for (Tag t : sk.tags()) tags.push_back(tag_name(t));
  if (sk.chain().is_finite()) {
    return json{{"chain", {{"kind", "finite"}, {"n", sk.chain().size()}}},
                {"tags", tags}};
  }
  return json{{"chain", {{"kind", "integers"}}},
              {"tags", tags},
              {"period", sk.period()}};
}

Skeleton skeleton_from_json(const json& j) {
  const json& chain = require_field(j, "chain");
  const json& jkind = require_field(chain, "kind");
  if (!jkind.is_string()) throw ParseError("chain kind must be a string");
  std::string kind = jkind.get<std::string>();
  const json& jtags = require_field(j, "tags");
  if (!jtags.is_array()) throw ParseError("tags must be an array");
  std::vector<Tag> tags;
  for (const auto& t : jtags) {
    if (!t.is_string()) throw ParseError("tags must be strings");
    tags.push_back(tag_from_string(t.get<std::string>()));
  }
  if (kind == "finite") {
    Pos n = as_pos(require_field(chain, "n"), "chain size n");
    if (n <= 0) {
      throw DomainError(Errc::empty_tag_list,
                        "a finite chain needs at least one position");
    }
    return make_skeleton(Chain::finite(n), std::move(tags));
  }
  if (kind == "integers") {
    if (auto it = j.find("period"); it != j.end()) {
      if (as_pos(*it, "period") != static_cast<Pos>(tags.size())) {
        throw DomainError(Errc::length_mismatch,
                          "period does not match the tag pattern length");
      }
    }
    return make_skeleton(Chain::integers(), std::move(tags));
  }
  throw ParseError("unknown chain kind '" + kind + "'");
}

json to_json(const SkeletonAut& t) {
  json exceptions = json::array();
  for (const auto& [p, q] : t.exceptions()) {
    exceptions.push_back(json{{"pos", p}, {"q", format_rat(q)}});
  }
  return json{{"shift", t.chain_part().shift},
              {"default_iso", format_rat(t.default_iso())},
              {"exceptions", exceptions}};
}

SkeletonAut skeleton_aut_from_json(const Skeleton& sk, const json& j) {
  Pos shift = as_pos(require_field(j, "shift"), "shift");
  Rat default_iso = as_rat(require_field(j, "default_iso"), "default_iso");
  std::map<Pos, Rat> exceptions;
  const json& jexc = require_field(j, "exceptions");
  if (!jexc.is_array()) throw ParseError("exceptions must be an array");
  for (const auto& e : jexc) {
    Pos p = as_pos(require_field(e, "pos"), "exception pos");
    if (!exceptions.emplace(p, as_rat(require_field(e, "q"), "exception q"))
             .second) {
      throw ParseError("duplicate exception position " + std::to_string(p));
    }
  }
  return SkeletonAut(sk, shift, default_iso, exceptions);
}

json to_json(const HahnElement& a) {
  json terms = json::array();
  for (const auto& [p, c] : a.coeffs()) {
    terms.push_back(json{{"pos", p}, {"coeff", format_rat(c)}});
  }
  return json{{"terms", terms}};
}

HahnElement element_from_json(const Skeleton& sk, const json& j) {
  const json& jterms = require_field(j, "terms");
  if (!jterms.is_array()) throw ParseError("terms must be an array");
  std::map<Pos, Rat> coeffs;
  for (const auto& term : jterms) {
    Pos p = as_pos(require_field(term, "pos"), "term pos");
    Rat c = as_rat(require_field(term, "coeff"), "term coeff");
    if (c == 0) {
      throw ParseError("zero coefficient at position " + std::to_string(p));
    }
    if (!coeffs.emplace(p, c).second) {
      throw ParseError("duplicate position " + std::to_string(p));
    }
  }
  return HahnElement(sk, coeffs);
}

json to_json(const TriMatrix& m) {
  json entries = json::array();
  for (const auto& [k, v] : m.entries()) {
    entries.push_back(
        json{{"row", k.first}, {"col", k.second}, {"q", format_rat(v)}});
  }
  return json{{"default_diag", format_rat(m.default_diag())},
              {"entries", entries}};
}

TriMatrix trimatrix_from_json(const Skeleton& sk, const json& j) {
  Rat def = as_rat(require_field(j, "default_diag"), "default_diag");
  const json& jentries = require_field(j, "entries");
  if (!jentries.is_array()) throw ParseError("entries must be an array");
  std::map<TriMatrix::Key, Rat> entries;
  for (const auto& e : jentries) {
    Pos row = as_pos(require_field(e, "row"), "entry row");
    Pos col = as_pos(require_field(e, "col"), "entry col");
    Rat q = as_rat(require_field(e, "q"), "entry q");
    if (!entries.emplace(TriMatrix::Key{row, col}, q).second) {
      throw ParseError("duplicate entry (" + std::to_string(row) + ", " +
                       std::to_string(col) + ")");
    }
  }
  return TriMatrix(sk, def, entries);
}

json to_json(const VAut& sigma) {
  return json{{"correction", to_json(sigma.correction())},
              {"skel_part", to_json(sigma.skel_part())}};
}

VAut vaut_from_json(const Skeleton& sk, const json& j) {
  TriMatrix correction =
      trimatrix_from_json(sk, require_field(j, "correction"));
  SkeletonAut skel =
      skeleton_aut_from_json(sk, require_field(j, "skel_part"));
  // Folds a U-correction that is not yet unitriangular into canonical form.
  return VAut::from_parts(correction, skel);
}

json to_json(const GroupFamily& family) {
  switch (family.kind()) {
    case GroupFamily::Kind::all_finite:
      return json{{"descriptor", "all_finite"}};
    case GroupFamily::Kind::explicit_finite: {
      json sets = json::array();
      for (std::uint64_t mask : family.sets()) {
        sets.push_back(mask_to_set(mask));
      }
      return json{{"descriptor", "explicit"}, {"sets", sets}};
    }
    case GroupFamily::Kind::finite_within: {
      if (const auto* half =
              std::get_if<GroupFamily::HalfLine>(&family.ground())) {
        return json{{"descriptor", "finite_within"}, {"bound", half->bound}};
      }
      const auto& periodic =
          std::get<GroupFamily::Periodic>(family.ground());
      return json{{"descriptor", "finite_within"},
                  {"modulus", periodic.modulus},
                  {"residues", periodic.residues}};
    }
  }
  throw ParseError("unserializable family");
}

GroupFamily family_from_json(const Skeleton& sk, const json& j) {
  const json& d = require_field(j, "descriptor");
  if (!d.is_string()) throw ParseError("descriptor must be a string");
  std::string descriptor = d.get<std::string>();
  if (descriptor == "all_finite") return GroupFamily::all_finite(sk);
  if (descriptor == "explicit") {
    const json& jsets = require_field(j, "sets");
    if (!jsets.is_array()) throw ParseError("sets must be an array");
    std::vector<std::vector<Pos>> sets;
    for (const auto& s : jsets) {
      if (!s.is_array()) throw ParseError("each set must be an array");
      std::vector<Pos> set;
      for (const auto& p : s) set.push_back(as_pos(p, "set member"));
      sets.push_back(std::move(set));
    }
    return family_from_generators(sk, sets);
  }
  if (descriptor == "finite_within") {
    if (auto it = j.find("bound"); it != j.end()) {
      return GroupFamily::finite_within(
          sk, GroupFamily::HalfLine{as_pos(*it, "bound")});
    }
    Pos modulus = as_pos(require_field(j, "modulus"), "modulus");
    const json& jres = require_field(j, "residues");
    if (!jres.is_array()) throw ParseError("residues must be an array");
    std::vector<Pos> residues;
    for (const auto& r : jres) residues.push_back(as_pos(r, "residue"));
    return GroupFamily::finite_within(
        sk, GroupFamily::Periodic{modulus, residues});
  }
  throw ParseError("unknown descriptor '" + descriptor + "'");
}

json to_json(const ConvexFamily& family) {
  json blocks = json::array();
  for (const auto& block : family.blocks()) blocks.push_back(to_json(block));
  return json{{"target_shift", family.target().shift}, {"blocks", blocks}};
}

ConvexFamily convex_family_from_json(const Skeleton& sk, const json& j) {
  Pos target_shift = as_pos(require_field(j, "target_shift"), "target_shift");
  const json& jblocks = require_field(j, "blocks");
  if (!jblocks.is_array()) throw ParseError("blocks must be an array");
  std::vector<TriMatrix> blocks;
  Pos g = 0;
  for (const auto& b : jblocks) {
    blocks.push_back(trimatrix_from_json(suffix_skeleton(sk, g), b));
    ++g;
  }
  return ConvexFamily(sk, target_shift, std::move(blocks));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

} // namespace

namespace {

// Scanner for the term grammar: rational '*1@' integer, terms joined by '+'.
// A sign directly after '*1@' or at the start of a term belongs to the
// number; '+' between terms separates.
class ExprScanner {
public:
  explicit ExprScanner(std::string_view text) : rest_(text) { skip_space(); }

  bool done() const { return rest_.empty(); }

  void expect(char c) {
    if (rest_.empty() || rest_.front() != c) {
      throw ParseError(std::string("expected '") + c + "' in element "
                       "expression");
    }
    rest_.remove_prefix(1);
    skip_space();
  }

  bool try_consume(std::string_view token) {
    if (rest_.substr(0, token.size()) != token) return false;
    rest_.remove_prefix(token.size());
    skip_space();
    return true;
  }

  std::string_view number() {
    std::size_t len = 0;
    auto more = [this, &len] {
      if (len >= rest_.size()) return false;
      char c = rest_[len];
      return std::isdigit(static_cast<unsigned char>(c)) || c == '/' ||
             ((c == '-' || c == '+') && len == 0);
    };
    while (more()) ++len;
    if (len == 0) {
      throw ParseError("expected a number in element expression near '" +
                       std::string(rest_.substr(0, 8)) + "'");
    }
    std::string_view tok = rest_.substr(0, len);
    rest_.remove_prefix(len);
    skip_space();
    return tok;
  }

private:
  void skip_space() {
    while (!rest_.empty() &&
           std::isspace(static_cast<unsigned char>(rest_.front()))) {
      rest_.remove_prefix(1);
    }
  }

  std::string_view rest_;
};

} // namespace

HahnElement parse_element_expr(const Skeleton& sk, std::string_view text) {
  ExprScanner scan(text);
  if (scan.done()) throw ParseError("empty element expression");
  if (scan.try_consume("0") && scan.done()) return HahnElement::zero(sk);
  // Not the zero literal: restart from the top.
  scan = ExprScanner(text);
  std::map<Pos, Rat> coeffs;
  while (true) {
    Rat coeff = parse_rat(scan.number());
    if (!scan.try_consume("*1@")) {
      throw ParseError("malformed term (expected coeff*1@pos)");
    }
    std::string_view pos_text = scan.number();
    Rat pos_rat = parse_rat(pos_text);
    if (!is_integer(pos_rat) || !pos_rat.get_num().fits_slong_p()) {
      throw ParseError("position '" + std::string(pos_text) +
                       "' is not a representable integer");
    }
    Pos p = static_cast<Pos>(pos_rat.get_num().get_si());
    if (coeff == 0) {
      throw ParseError("zero coefficient at position " + std::to_string(p));
    }
    if (!coeffs.emplace(p, coeff).second) {
      throw ParseError("duplicate position " + std::to_string(p));
    }
    if (scan.done()) break;
    scan.expect('+');
  }
  return HahnElement(sk, coeffs);
}

std::string format_element_expr(const HahnElement& a) {
  if (a.is_zero()) return "0";
  std::string out;
  for (const auto& [p, c] : a.coeffs()) {
    if (!out.empty()) out += " + ";
    out += format_rat(c);
    out += "*1@";
    out += std::to_string(p);
  }
  return out;
}

} // namespace hahn::io
