#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace hahn {

/// Exact arbitrary-precision rational. Arithmetic results are always in
/// canonical form (reduced, positive denominator).
using Rat = mpq_class;

/// Chain position. Finite chains use {0, ..., n-1}; the integer chain uses
/// the whole range.
using Pos = std::int64_t;

bool is_integer(const Rat& q);

/// Parses "p" or "p/q" (decimal, optional leading '-'). Throws ParseError on
/// malformed input or zero denominator.
Rat parse_rat(std::string_view text);

/// Inverse of parse_rat: "p" when the denominator is 1, "p/q" otherwise.
std::string format_rat(const Rat& q);

} // namespace hahn
