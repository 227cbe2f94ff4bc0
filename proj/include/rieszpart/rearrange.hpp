#pragma once

// Block balancing: given local injections phi_hat, psi_hat into the source of
// an outer map sigma, reassign phi's range inside each block so that the block
// sum S = sum sigma(phi(x)) - x is O(1), then compose.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rieszpart/avdonin.hpp"
#include "rieszpart/rounding.hpp"

namespace rieszpart {

/// One block I of the intermediate lattice. Positions are real frequencies.
struct BlockProblem {
  std::vector<long double> source_a;  // ascending, N of them
  std::vector<long double> source_b;  // ascending, K - N of them
  std::vector<long double> targets;   // ascending, K of them (points of I)
  std::vector<long double> sigma;     // sigma(targets[i])
  std::vector<std::int64_t> initial;  // ascending indices into targets: phi_hat's range
  long double m_hat = 0;              // displacement bound of phi_hat, psi_hat, sigma
  long double spacing = 0;            // 1/(a+b), the target spacing
};

struct BalancedAssignment {
  std::vector<std::int64_t> phi_range;  // ascending target indices, phi(source_a[i]) = targets[phi_range[i]]
  std::vector<std::int64_t> psi_range;  // the complement, ascending
  long double S = 0;
  std::int64_t swaps = 0;
  long double max_step = 0;

  long double tolerance(const BlockProblem& p) const { return p.m_hat + p.spacing / 2; }
};

class BalanceFailure : public std::runtime_error {
 public:
  BalanceFailure(const std::string& what, long double s_left, long double s_right)
      : std::runtime_error(what), s_left_packed(s_left), s_right_packed(s_right) {}
  long double s_left_packed;
  long double s_right_packed;
};

/// S for a given range.
long double block_residual(const BlockProblem& p, const std::vector<std::int64_t>& range);

/// Walks S toward zero by single-element moves to an adjacent free target,
/// starting from phi_hat's range, and stops at the first |S| <= m_hat +
/// spacing/2. Each move changes S by at most 2 m_hat + spacing (checked).
BalancedAssignment block_balance(const BlockProblem& p);

struct StageOptions {
  std::int64_t max_K = std::int64_t{1} << 22;
  std::int64_t max_blocks = 200;
  std::int64_t min_blocks = 10;
  std::int64_t initial_K = 0;  // 0: derive from the block-size inequality
};

struct StageReport {
  std::int64_t K = 0;        // block size in intermediate-lattice indices
  ExactScalar R;             // K / (a+b)
  long double m_hat = 0;
  long double M = 0;         // m_hat + K/(a+b)
  long double measured_M = 0;
  std::int64_t blocks = 0;
  std::int64_t swaps = 0;
  long double max_step = 0;
  long double max_abs_S = 0;
  AvdoninCertificate phi_hat_cert, psi_hat_cert, sigma_cert, Phi_cert, Psi_cert;
  std::vector<std::string> log;
};

struct StageResult {
  FrequencyMap Phi;
  FrequencyMap Psi;
  StageReport report;
};

class BudgetMiss : public std::runtime_error {
 public:
  BudgetMiss(const std::string& what, StageReport r) : std::runtime_error(what), report(std::move(r)) {}
  StageReport report;
};

/// Phi = sigma o phi, Psi = sigma o psi with phi, psi rebuilt per block from
/// the rounding pair. Doubles K until phi_hat, psi_hat certify at <= delta,
/// sigma at <= epsilon, and Phi, Psi at <= epsilon + 3 delta.
StageResult compose_and_certify(const RoundingPair& pair, const FrequencyMap& sigma, long double delta,
                                long double epsilon, const StageOptions& opt = {});

}  // namespace rieszpart
