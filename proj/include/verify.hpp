#ifndef BORELCODER_VERIFY_HPP
#define BORELCODER_VERIFY_HPP

#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

// Verification batteries behind `borelcoder verify` and the acceptance
// runner.  Every battery is deterministic given its config and seed and
// reports one result per named case.

namespace verify {

struct CaseResult {
    std::string id;
    bool pass = true;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    nlohmann::json config;
    std::vector<CaseResult> cases;

    int failures() const;
    nlohmann::json to_json() const;
};

// extremal packing: exhaustive max-edge counts vs e*(c), equality shape
SuiteReport packing_extremal(int max_vertices = 7);

// pair bound: two-part oracle vs f(c,d), monotonicity of f
SuiteReport packing_pair_bound(int oracle_max = 3, int mono_max = 8);

// side-bound thresholds for the near-complete implication, plus the
// low-valence witness showing the valence clause needs N = 0
SuiteReport packing_thresholds(long long max_n = 3);

// block facts over every tree with <= max_nodes nodes, both gluing variants
SuiteReport block_facts(int max_nodes, const std::vector<int>& ms);

// complete-subgraph enumeration recovers exactly the blocks
SuiteReport block_enumeration(int max_nodes, int m);

// tree -> code -> tree roundtrips and code-level isomorphism invariance
SuiteReport graph_roundtrip(int exhaustive_nodes, int random_count, int random_max_nodes,
                            const std::vector<int>& ms, std::uint64_t seed);

// structure and colored-tree roundtrips plus non-isomorphism preservation
SuiteReport structure_roundtrips(int digraph_samples, int colored_samples, int pair_samples,
                                 std::uint64_t seed);

// multiscale union decode and single-edge corruption detection
SuiteReport multiscale(const std::vector<int>& scales, int samples, int max_nodes,
                       std::uint64_t seed);

// dense connected extraction and near-complete verdicts
SuiteReport dense_extraction(int samples, std::uint64_t seed);

// bounded back-and-forth agreement with brute-force isomorphism
SuiteReport ef_agreement(int random_pairs, std::uint64_t seed);

// difference assignment distinctness and membership roundtrips
SuiteReport cusp_layer(int depth, int width, int samples, std::uint64_t seed);

}  // namespace verify

#endif
