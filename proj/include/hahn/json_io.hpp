#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "hahn/autdecomp.hpp"
#include "hahn/element.hpp"
#include "hahn/rayner.hpp"
#include "hahn/skeleton.hpp"
#include "hahn/trimatrix.hpp"

namespace hahn::io {

using json = nlohmann::json;

// Serializers emit canonical forms; parse ∘ format is the identity on every
// object type. Structural problems in the input (wrong types, missing
// fields, bad rational strings, duplicate keys) raise ParseError; semantic
// violations surface as the module's own DomainError.

json to_json(const Skeleton& sk);
Skeleton skeleton_from_json(const json& j);

json to_json(const SkeletonAut& t);
SkeletonAut skeleton_aut_from_json(const Skeleton& sk, const json& j);

json to_json(const HahnElement& a);
HahnElement element_from_json(const Skeleton& sk, const json& j);

json to_json(const TriMatrix& m);
TriMatrix trimatrix_from_json(const Skeleton& sk, const json& j);

json to_json(const VAut& sigma);
VAut vaut_from_json(const Skeleton& sk, const json& j);

json to_json(const GroupFamily& family);
GroupFamily family_from_json(const Skeleton& sk, const json& j);

json to_json(const ConvexFamily& family);
ConvexFamily convex_family_from_json(const Skeleton& sk, const json& j);

/// Element text syntax: terms `coeff*1@pos` joined by `+`, e.g.
/// "3/2*1@0 + -1*1@2"; the zero element is "0". Rejects duplicate positions
/// and zero coefficients.
HahnElement parse_element_expr(const Skeleton& sk, std::string_view text);
std::string format_element_expr(const HahnElement& a);

} // namespace hahn::io
