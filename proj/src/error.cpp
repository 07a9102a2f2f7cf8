#include "hahn/error.hpp"

namespace hahn {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::skeleton_mismatch: return "SkeletonMismatch";
    case Errc::empty_tag_list: return "EmptyTagList";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::not_an_automorphism: return "NotAnAutomorphism";
    case Errc::tag_pattern_broken: return "TagPatternBroken";
    case Errc::inadmissible_hom: return "InadmissibleHom";
    case Errc::infinite_concat: return "InfiniteConcat";
    case Errc::position_out_of_range: return "PositionOutOfRange";
    case Errc::not_triangular: return "NotTriangular";
    case Errc::not_invertible: return "NotInvertible";
    case Errc::not_in_u: return "NotInU";
    case Errc::incoherent_family: return "IncoherentFamily";
    case Errc::missing_block: return "MissingBlock";
    case Errc::chain_too_large: return "ChainTooLarge";
    case Errc::unsupported_descriptor: return "UnsupportedDescriptor";
  }
  return "UnknownError";
}

} // namespace hahn
