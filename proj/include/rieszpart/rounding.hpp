#pragma once

// Rounding maps (Z+1/2)/c -> (Z+1/2)/d, x -> (floor(x d) + 1/2)/d, with the
// period-position correction needed when a/(a+b) has an even denominator.

#include <cstdint>
#include <string>
#include <vector>

#include "rieszpart/lattice.hpp"
#include "rieszpart/numerics.hpp"

namespace rieszpart {

enum class ParityCase { Irrational, RationalOdd, RationalEven };
/// Lower = the map of the first length (phi), Upper = the second (psi). Only
/// matters for the even case, where the two maps correct different points.
enum class Role { Lower, Upper };

const char* to_string(ParityCase p);

class RoundingMap {
 public:
  /// Source (Z+1/2)/c, target (Z+1/2)/d with 0 < c < d. n0/k0 is the reduced
  /// ratio of the *lower* length to d (shared by both maps of a pair);
  /// k0 = 0 marks the irrational case.
  RoundingMap(ExactScalar c, ExactScalar d, Role role, std::int64_t n0, std::int64_t k0);

  const AffineLattice& source() const { return source_; }
  const AffineLattice& target() const { return target_; }
  ParityCase parity_case() const { return parity_; }
  Role role() const { return role_; }
  std::int64_t N0() const { return n0_; }
  std::int64_t K0() const { return k0_; }
  /// Period in target indices: 1 (irrational), K0 (odd), 2K0 (even).
  std::int64_t period() const;
  /// Source indices per period (0 for irrational).
  std::int64_t source_period() const;
  std::string correction() const;

  /// Target index m (the point (m+1/2)/d) of source index k. Throws
  /// PrecisionError when a guarded evaluation lands on a tie.
  std::int64_t operator()(std::int64_t k) const;
  /// Same without the even-case correction.
  std::int64_t uncorrected(std::int64_t k) const;

  /// Source indices whose image lies in target indices [m_first, m_end).
  /// The map is strictly increasing, so this is a contiguous run.
  IndexRange sources_for_targets(std::int64_t m_first, std::int64_t m_end) const;

 private:
  std::int64_t first_source_at_or_above(std::int64_t m) const;

  ExactScalar c_, d_;
  AffineLattice source_, target_;
  Role role_;
  ParityCase parity_;
  std::int64_t n0_, k0_;
  AffineFloor floor_;
  long double ratio_ld_;  // c/d
};

struct RoundingPair {
  RoundingMap phi;
  RoundingMap psi;
  std::int64_t period;  // in target indices
  ExactScalar total;    // a + b
};

/// Rounding maps of (Z+1/2)/a and (Z+1/2)/b into (Z+1/2)/(a+b).
RoundingPair build_pair(const ExactScalar& a, const ExactScalar& b);
/// Same with the total fixed: b = total - a. Keeps the target lattice
/// structurally identical to a lattice built from `total` elsewhere.
RoundingPair split_pair(const ExactScalar& a, const ExactScalar& total);

struct BeattyReport {
  std::int64_t N = 0;
  std::vector<std::int64_t> collisions;  // integers hit by both sequences
  std::vector<std::int64_t> gaps;        // integers hit by neither
  std::int64_t hits_a = 0, hits_b = 0;
  bool ok() const { return collisions.empty() && gaps.empty(); }
};

/// Checks that floor((Z+1/2)/a) and floor((Z+1/2)/(1-a)) partition Z on
/// [-N, N). Ties on guarded input raise PrecisionError ("indistinguishable
/// from rational at this precision").
BeattyReport verify_beatty(const ExactScalar& a, std::int64_t N);

/// Exact sum of map(x) - x over one period [0, period/d). Rational maps only.
/// Throws std::logic_error with a per-term breakdown when nonzero.
Rational verify_zero_avdonin_block(const RoundingMap& map);

}  // namespace rieszpart
