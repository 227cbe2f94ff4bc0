#pragma once

// JSON for scalars, lattices, maps, certificates and whole partitions.
// Output is deterministic: no timestamps, fixed key order (nlohmann sorts).

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rieszpart/analysis.hpp"
#include "rieszpart/compose.hpp"

namespace rieszpart {

using Json = nlohmann::json;

/// Thrown for structurally bad input documents (CLI exit code 4).
class MalformedInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json to_json(const ExactScalar& x);   // {"rational": [p, q]} or {"float": v, "guard": g}
ExactScalar scalar_from_json(const Json& j);

Json to_json(const AffineLattice& l);  // {"a": ..., "alpha": ...}
AffineLattice lattice_from_json(const Json& j);

Json to_json(const FrequencyMap& m);   // {"source", "target", "first", "targets"}
FrequencyMap map_from_json(const Json& j);

/// {R, epsilon_hat, epsilon_exact, threshold, pass, worst_block, blocks_checked, budget}
Json certificate_json(const AvdoninCertificate& c, const RieszCheck& r, long double budget);

Json to_json(const GramEstimate& g);
Json to_json(const DensityReport& d);

struct PartitionJsonOptions {
  bool include_maps = true;  // needed by `verify` to re-measure certificates
  std::int64_t max_blocks = 200;
};

Json partition_json(const PartitionResult& r, const PartitionJsonOptions& opt = {});

/// One frequency set as read back by `verify`.
struct StoredSet {
  std::string label;
  ExactScalar length;
  std::vector<long double> frequencies;  // ascending
  std::optional<FrequencyMap> map;
  std::optional<ExactScalar> R;
  std::optional<long double> epsilon_hat;
  std::optional<long double> budget;
};

struct StoredUnion {
  std::vector<int> J;
  std::optional<ExactScalar> R;
  std::optional<long double> epsilon_hat;
  std::optional<long double> budget;
};

struct StoredPartition {
  std::vector<StoredSet> sets;
  std::vector<StoredUnion> unions;
  std::int64_t max_blocks = 200;
  std::optional<std::pair<long double, long double>> window;
};

/// Accepts partition output, or a bare {"sets": [{"label", "length", "frequencies"}]}.
/// Throws MalformedInput.
StoredPartition stored_partition_from_json(const Json& j);

}  // namespace rieszpart
