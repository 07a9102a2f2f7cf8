#pragma once

#include <stdexcept>
#include <string>

namespace hahn {

enum class Errc {
  skeleton_mismatch,
  empty_tag_list,
  length_mismatch,
  not_an_automorphism,
  tag_pattern_broken,
  inadmissible_hom,
  infinite_concat,
  position_out_of_range,
  not_triangular,
  not_invertible,
  not_in_u,
  incoherent_family,
  missing_block,
  chain_too_large,
  unsupported_descriptor,
};

const char* errc_name(Errc code);

/// Raised by module operations on precondition violations. The code carries
/// the stable, machine-readable error name used by the CLI.
class DomainError : public std::runtime_error {
public:
  DomainError(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const { return code_; }

private:
  Errc code_;
};

/// Raised while reading text or JSON input (CLI exit code 2, as opposed to
/// exit code 3 for DomainError).
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace hahn
