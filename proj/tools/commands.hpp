#pragma once

// The three CLI drivers, callable in-process so tests can run them.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rieszpart/io.hpp"

namespace rieszpart::cli {

enum ExitCode : int { kOk = 0, kFail = 1, kBudgetMiss = 2, kPrecision = 3, kMalformed = 4 };

struct RunConfig {
  std::string command;
  std::vector<std::string> lengths;     // "p/q", "irr:<decimal>", "sqrt2inv", ...
  std::string window = "-100:100";      // lo:hi, each side a scalar
  int budget_K = 0;                     // 0: number of lengths
  long double guard = kDefaultGuard;
  std::vector<std::vector<int>> unions;  // 1-based
  std::vector<std::int64_t> truncations = {64, 128, 256, 512};
  bool expect_fail = false;
  std::string out;                      // empty: stdout
  std::string input;                    // verify: JSON file ("-" for stdin)
  std::int64_t half_width = 100000;
  std::int64_t max_K = std::int64_t{1} << 22;  // block-size doubling limit
  long double radius = 100000;          // density radius
  int figure = 0;                       // figures: 1, 2, or 0 for --lengths
  bool csv = false;
  bool tail = false;
};

/// Fields of a JSON config file; anything already set by a flag wins
/// (the caller passes which flags were given).
void apply_config_file(RunConfig& cfg, const Json& file, const std::vector<std::string>& given_flags);

/// "1,3;2,3" -> {{1,3},{2,3}}
std::vector<std::vector<int>> parse_unions(const std::string& text);
/// "-100:100" -> scalars
std::pair<ExactScalar, ExactScalar> parse_window(const std::string& text, long double guard);

int cmd_partition(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_figures(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Verification of a parsed document; the report is the JSON `verify` prints.
struct VerifyOutcome {
  bool pass = false;
  Json report;
};
VerifyOutcome verify_document(const StoredPartition& doc, const RunConfig& cfg);

// Gram trend thresholds used by verify: the smallest eigenvalue at the largest
// truncation must stay above kGramFloor (relative to the interval length) and
// may drop by at most kGramDrift relative to the previous truncation.
inline constexpr long double kGramFloor = 1e-3L;
inline constexpr long double kGramDrift = 0.05L;

}  // namespace rieszpart::cli
