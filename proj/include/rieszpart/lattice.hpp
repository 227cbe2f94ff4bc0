#pragma once

// Affine lattices (Z + alpha) / a and half-open windows over the real line.

#include <cstdint>
#include <utility>
#include <vector>

#include "rieszpart/numerics.hpp"

namespace rieszpart {

/// Half-open [lo, hi), lo < hi.
struct Window {
  ExactScalar lo, hi;
  Window(ExactScalar lo_, ExactScalar hi_);
  static Window ints(std::int64_t lo_, std::int64_t hi_) { return {Rational(lo_), Rational(hi_)}; }
};

/// Contiguous run of lattice indices [first, end).
struct IndexRange {
  std::int64_t first = 0;
  std::int64_t end = 0;
  std::int64_t size() const { return end > first ? end - first : 0; }
  bool contains(std::int64_t k) const { return k >= first && k < end; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

class AffineLattice {
 public:
  /// Points (k + alpha) / a; a > 0.
  explicit AffineLattice(ExactScalar a, ExactScalar alpha = Rational(1, 2));

  const ExactScalar& a() const { return a_; }
  const ExactScalar& alpha() const { return alpha_; }
  bool is_rational() const { return a_.is_rational() && alpha_.is_rational(); }

  ExactScalar point(std::int64_t k) const;
  long double point_ld(std::int64_t k) const;
  /// Index of the lattice point nearest below-or-at x (x in the same units).
  std::int64_t index_floor(const ExactScalar& x) const;

  /// Indices k with lo <= (k+alpha)/a < hi. Solved by exact ceil, never by
  /// stepping, so long windows do not drift.
  IndexRange index_range(const Window& w) const;
  std::vector<std::pair<std::int64_t, ExactScalar>> enumerate(const Window& w) const;
  std::int64_t count_in(const Window& w) const { return index_range(w).size(); }

  friend bool operator==(const AffineLattice& x, const AffineLattice& y) {
    return x.a_ == y.a_ && x.alpha_ == y.alpha_;
  }

 private:
  ExactScalar a_;
  ExactScalar alpha_;
  long double inv_a_ = 0;
  long double alpha_ld_ = 0;
};

/// Points of (Z+1/2)/a in [0, N): floor(aN + 1/2).
std::int64_t count_F(const ExactScalar& a, std::int64_t N);
/// Points of (Z+1/2)/a in [-N, 0): -ceil(-aN + 1/2) + 1.
std::int64_t count_G(const ExactScalar& a, std::int64_t N);

}  // namespace rieszpart
