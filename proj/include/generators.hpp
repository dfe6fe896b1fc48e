#ifndef BORELCODER_GENERATORS_HPP
#define BORELCODER_GENERATORS_HPP

#include <cstdint>
#include <random>

#include "structcore.hpp"

// Seeded corpus generators used by the verification suites and tests.
// All randomness flows through the caller-provided engine so that every run
// is reproducible from a logged seed.

namespace generators {

using Rng = std::mt19937_64;

// Bounded draw that does not depend on libstdc++ distribution internals.
inline std::uint64_t draw(Rng& rng, std::uint64_t bound) {
    return bound == 0 ? 0 : rng() % bound;
}

// Uniform-ish random rooted tree with exactly n nodes (random parent array).
structcore::FinTree random_tree(int n, Rng& rng);

// All rooted trees with up to max_nodes nodes, one per isomorphism class.
std::vector<structcore::FinTree> all_trees_upto(int max_nodes);

// Random colored tree: shape depth <= max_depth, colors drawn from
// {1..max_color} with the given per-node color probability (percent).
structcore::ColoredTree random_colored_tree(int max_nodes, int max_depth, int max_color,
                                            Rng& rng);

// Random digraph structure: universe n, one binary relation "E".
structcore::RelStructure random_digraph(int n, Rng& rng);

// Random bipartite graph on a+b vertices; each edge kept with probability
// percent/100.
structcore::BipartiteGraph random_bipartite(int a, int b, int percent, Rng& rng);

}  // namespace generators

#endif
