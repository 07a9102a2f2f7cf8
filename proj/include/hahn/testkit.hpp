#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "hahn/autdecomp.hpp"
#include "hahn/element.hpp"
#include "hahn/rayner.hpp"
#include "hahn/skeleton.hpp"
#include "hahn/trimatrix.hpp"

namespace hahn::testkit {

/// Bounds for random case generation. Identical seed and bounds reproduce
/// identical case streams.
struct GenConfig {
  std::uint64_t seed = 0x6861686e;
  int max_chain = 6;    // <= 6
  int max_support = 8;  // <= 8
  int coeff_bound = 50; // numerators/denominators, <= 50
  int shift_window = 3; // <= 3

  void validate() const;
};

/// Deterministic RNG: raw mt19937_64 outputs with rejection sampling, so the
/// stream does not depend on the standard library's distribution choices.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : seed_(seed), eng_(seed) {}

  std::uint64_t bits() { return eng_(); }
  /// Uniform in [lo, hi], inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi);
  bool coin() { return range(0, 1) == 1; }
  /// Independent stream for case `index` (parallel-friendly splitting).
  Rng split(std::uint64_t index) const;

private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
};

enum class MatrixClass { Delta, T, U, U1, Ud };

Skeleton gen_skeleton(Rng& rng, const GenConfig& cfg);
Skeleton gen_finite_skeleton(Rng& rng, const GenConfig& cfg, Pos max_n);
Rat gen_coeff(Rng& rng, const GenConfig& cfg, Tag tag);
HahnElement gen_element(Rng& rng, const GenConfig& cfg, const Skeleton& sk);
HahnElement gen_nonzero_element(Rng& rng, const GenConfig& cfg,
                                const Skeleton& sk);
HahnElement gen_positive_element(Rng& rng, const GenConfig& cfg,
                                 const Skeleton& sk);
TriMatrix gen_trimatrix(Rng& rng, const GenConfig& cfg, const Skeleton& sk,
                        MatrixClass cls);
SkeletonAut gen_skeleton_aut(Rng& rng, const GenConfig& cfg,
                             const Skeleton& sk);
/// Identity chain part, random component isos.
SkeletonAut gen_component_aut(Rng& rng, const GenConfig& cfg,
                              const Skeleton& sk);
VAut gen_vaut(Rng& rng, const GenConfig& cfg, const Skeleton& sk);
GroupFamily gen_family(Rng& rng, const GenConfig& cfg, const Skeleton& sk);

/// True iff the bitmask over P(Γ) (bit m set = subset m is a member) is a
/// group family: contains ∅ and is closed under unions and subsets.
bool closed_family_candidate(std::uint64_t members, int n);

/// All group families over a finite chain, by brute force over all subsets
/// of the powerset. Throws ChainTooLarge beyond |Γ| = 4.
std::vector<GroupFamily> enumerate_group_families(const Skeleton& sk);

/// Independent re-implementation of the row-vector action by a naive
/// column-by-column double loop; must agree with trimatrix apply everywhere.
HahnElement oracle_apply(const HahnElement& a, const TriMatrix& m);

struct SelftestOptions {
  std::uint64_t seed = 0x6861686e;
  int cases = 200;
  int max_chain = 6;
};

/// Runs every property suite; prints one line per suite and, on the first
/// failure, a greedily minimized counterexample as JSON. Returns 0 on
/// success, 1 on failure.
int run_selftest(const SelftestOptions& options, std::ostream& out);

} // namespace hahn::testkit
