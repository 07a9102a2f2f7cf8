#include "hahn/rational.hpp"

#include <cctype>

#include "hahn/error.hpp"

namespace hahn {

bool is_integer(const Rat& q) { return q.get_den() == 1; }

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_int(std::string_view s, std::string_view whole) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw ParseError("malformed rational: '" + std::string(whole) + "'");
  }
  mpz_class v(std::string(s), 10);
  return neg ? mpz_class(-v) : v;
}

} // namespace

Rat parse_rat(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rat(parse_int(text, text));
  }
  mpz_class num = parse_int(text.substr(0, slash), text);
  std::string_view den_part = text.substr(slash + 1);
  if (!den_part.empty() && den_part.front() == '-') {
    throw ParseError("malformed rational: '" + std::string(text) +
                     "' (denominator must be positive)");
  }
  mpz_class den = parse_int(den_part, text);
  if (den == 0) {
    throw ParseError("malformed rational: '" + std::string(text) +
                     "' (zero denominator)");
  }
  Rat q(num, den);
  q.canonicalize();
  return q;
}

std::string format_rat(const Rat& q) {
  std::string s = q.get_num().get_str();
  if (q.get_den() != 1) {
    s += "/";
    s += q.get_den().get_str();
  }
  return s;
}

} // namespace hahn
