#pragma once

// The staged construction: split [0,1] one length at a time, each new split
// pushed through the previous stage's complementary map with block balancing,
// plus the union combination of certified maps.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rieszpart/avdonin.hpp"
#include "rieszpart/rearrange.hpp"
#include "rieszpart/rounding.hpp"

namespace rieszpart {

struct PartitionSpec {
  std::vector<ExactScalar> lengths;  // b_1..b_n, summing to 1
  int K = 0;                         // union-size budget; 0 means n
  bool has_tail = false;             // last length is the truncated tail c_{n-1}
};

struct PartitionOptions {
  std::int64_t half_width = 100000;  // working region covers [-W, W) at least
  std::int64_t pad = 8192;           // extra margin, doubled on retry
  int max_retries = 6;
  std::vector<std::vector<int>> unions;  // 1-based index sets; empty: all 2<=|J|<=K if n <= 6
  std::int64_t max_blocks = 200;
  std::int64_t max_K = std::int64_t{1} << 22;
};

struct PartitionSet {
  std::string label;
  ExactScalar length;
  FrequencyMap map;  // (Z+1/2)/b_j -> Z+1/2 (or Z after shifting)
  AvdoninCertificate cert;
  long double budget = 0;
  RieszCheck riesz;
};

struct UnionResult {
  std::vector<int> J;
  ExactScalar length;
  FrequencyMap map;
  AvdoninCertificate cert;
  long double budget = 0;
  RieszCheck riesz;
};

struct PartitionResult {
  std::vector<ExactScalar> lengths;
  int K = 0;
  long double delta = 0;
  std::optional<Window> window;
  std::vector<PartitionSet> sets;
  std::vector<UnionResult> unions;
  std::vector<std::string> log;
  bool shifted = false;  // frequencies moved from Z+1/2 to Z

  /// Frequencies of set j (0-based) inside the window, ascending.
  std::vector<long double> frequencies(std::size_t j) const;
  /// Target indices of set j inside the window, ascending.
  std::vector<std::int64_t> indices(std::size_t j) const;
  bool all_pass() const;
};

/// Lengths after the tail check: the last length is replaced by the computed
/// tail c_{n-1} = 1 - b_1 - ... - b_{n-1}. Throws std::invalid_argument if it
/// differs from the given b_n (exactly for rationals, beyond guard otherwise).
std::vector<ExactScalar> normalized_lengths(const std::vector<ExactScalar>& lengths);

/// Stage budgets: eps_1 = delta/2, eps_j = delta/(2^j 3).
long double stage_epsilon(int j, long double delta);

PartitionResult build_partition(const PartitionSpec& spec, const Window& window, const PartitionOptions& opt = {});

struct UnionOptions {
  ExactScalar min_R = Rational(1);
  std::optional<long double> target;  // stop doubling once the certificate is <= target
  int max_doublings = 6;
  CertificateOptions cert;
};

struct UnionOutcome {
  FrequencyMap map;
  ExactScalar length;
  AvdoninCertificate cert;
  std::vector<std::string> log;
};

/// Left fold of rho = (tau o phi^-1) u (eta o psi^-1). Input maps must share a
/// target lattice and have pairwise disjoint ranges.
UnionOutcome combine_union(const std::vector<FrequencyMap>& maps, const std::vector<ExactScalar>& lengths,
                           const UnionOptions& opt = {});

/// phi_hat followed by sigma, no balancing (for comparison pictures).
FrequencyMap naive_compose(const RoundingMap& phi, const FrequencyMap& sigma);

/// Moves every frequency by -1/2 (Z+1/2 -> Z). A common modulation is unitary
/// on L^2(I), so Riesz bounds are unchanged.
PartitionResult shift_to_integers(PartitionResult r);
PartitionResult shift_to_half_integers(PartitionResult r);

}  // namespace rieszpart
