#pragma once

// Realized frequency maps over a finite index window and their block
// discrepancy ("Avdonin") certificates.
//
// Certificates are windowed: the defining supremum runs over all blocks, we
// can only check finitely many. For rational data a block length that is a
// multiple of the period makes a one-period check global.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rieszpart/lattice.hpp"
#include "rieszpart/numerics.hpp"

namespace rieszpart {

/// Source index k in [first, first + size) -> target index targets[k - first]
/// of the target lattice. Injective; the constructor checks.
class FrequencyMap {
 public:
  FrequencyMap(AffineLattice source, AffineLattice target, std::int64_t first, std::vector<std::int64_t> targets);

  const AffineLattice& source() const { return source_; }
  const AffineLattice& target() const { return target_; }
  IndexRange domain() const { return {first_, first_ + static_cast<std::int64_t>(targets_.size())}; }
  std::int64_t first_index() const { return first_; }
  std::int64_t size() const { return static_cast<std::int64_t>(targets_.size()); }
  const std::vector<std::int64_t>& targets() const { return targets_; }
  std::int64_t operator()(std::int64_t k) const { return targets_.at(static_cast<std::size_t>(k - first_)); }
  bool in_domain(std::int64_t k) const { return domain().contains(k); }

  /// sup |map(x) - x| over the window (the bound M).
  long double displacement_bound() const { return displacement_; }
  /// Smallest gap between range points.
  long double separation() const { return separation_; }

  /// Range points, ascending.
  std::vector<long double> range_points() const;
  /// Range target indices, ascending.
  std::vector<std::int64_t> sorted_range() const;

  /// sigma o this. The target lattice of *this must be sigma's source and every
  /// image must be in sigma's domain.
  FrequencyMap then(const FrequencyMap& sigma) const;
  FrequencyMap restricted(IndexRange r) const;
  FrequencyMap with_target(AffineLattice t) const { return {source_, std::move(t), first_, targets_}; }

 private:
  AffineLattice source_, target_;
  std::int64_t first_;
  std::vector<std::int64_t> targets_;
  long double displacement_ = 0;
  long double separation_ = 0;
};

struct AvdoninCertificate {
  ExactScalar R;
  long double epsilon_hat = 0;
  std::optional<Rational> epsilon_exact;  // when all data is rational
  std::int64_t blocks_checked = 0;
  std::int64_t worst_block = 0;
};

struct CertificateOptions {
  std::int64_t max_blocks = 200;
  std::int64_t min_blocks = 10;
  std::optional<Window> window;  // blocks must lie inside this as well
};

class WindowTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Block sums (1/R) sum_{x in [pR,(p+1)R)} (map(x) - x) over complete blocks
/// inside the map's domain, at most max_blocks centred on p = 0.
AvdoninCertificate measure_discrepancy(const FrequencyMap& m, const ExactScalar& R, const CertificateOptions& opt = {});

/// Block sum for block p (nullopt if incomplete).
std::optional<long double> block_sum(const FrequencyMap& m, const ExactScalar& R, std::int64_t p);

struct RieszCheck {
  bool pass = false;
  long double epsilon_hat = 0;
  long double threshold = 0;  // 1/(4a)
  long double margin = 0;     // threshold - epsilon_hat
};

/// The hypothesis of Avdonin's theorem for an interval of length a:
/// epsilon_hat < 1/(4a). Throws if the certificate checked no blocks.
RieszCheck check_riesz_hypothesis(const AvdoninCertificate& cert, const ExactScalar& length);

/// max over m in [m_lo, m_hi] of |(1/R) sum_{k=mR}^{(m+1)R-1} f(frac((k+alpha)/a)) - integral|.
/// Default f is the identity with integral 1/2.
long double measure_equidistribution(const ExactScalar& a, const ExactScalar& alpha, std::int64_t R,
                                     std::int64_t m_lo, std::int64_t m_hi,
                                     const std::function<long double(long double)>& f = {},
                                     long double integral = 0.5L);

struct KadecDiagnostic {
  long double sup_displacement = 0;
  long double bound = 0;  // 1/(4a) in frequency units
  bool within = false;
};

/// Kadec-type sup-displacement test: sup |map(x) - x| < 1/(4a).
KadecDiagnostic kadec_diagnostic(const FrequencyMap& m);

}  // namespace rieszpart
