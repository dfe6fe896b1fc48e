#ifndef BORELCODER_EXHAUSTIVE_HPP
#define BORELCODER_EXHAUSTIVE_HPP

#include <functional>
#include <optional>

#include "packing.hpp"
#include "structcore.hpp"

// Brute-force reference computations, kept independent of the optimized
// paths they are used to audit.

namespace exhaustive {

using structcore::BipartiteGraph;

// Visit every labeled bipartite graph whose two sides sum to at most
// max_vertices (all splits, all edge subsets).
void for_each_bipartite_upto(int max_vertices, const std::function<void(const BipartiteGraph&)>& fn);

struct MaxEdgeCheck {
    long long max_edges = 0;
    bool equality_only_complete_balanced_full = true;  // every maximizer has
                                                       // v == budget, complete, balanced
};

// Max edges over all bipartite graphs with at most c vertices, plus the
// shape check on the maximizers.
MaxEdgeCheck max_edges_upto(int c);

// Max of e(B) + e(C) over two-part graphs with k(B) <= c, k(C) <= d and at
// most c+d+2 non-isolated vertices in total.
long long two_part_max_edges(int c, int d);

// Max edges over graphs with k <= bound and at most max_vertices
// non-isolated vertices (audits e(A) <= e*(bound+1)).
long long max_edges_with_k_bound(int k_bound, int max_vertices);

// Vertex bijection search over all side-preserving permutations.
std::optional<std::vector<std::pair<int, int>>> brute_force_bipartite_iso(
    const BipartiteGraph& a, const BipartiteGraph& b);

// Structure isomorphism by trying every bijection of the universes.
bool brute_force_structure_iso(const structcore::RelStructure& a,
                               const structcore::RelStructure& b);

// Reflexive-symmetric-transitive closure by naive fixpoint iteration.
std::vector<int> naive_closure_classes(int n, const std::vector<std::pair<int, int>>& links);

// All complete a x b bipartite subgraphs found by scanning every left subset
// of size a (only usable at very small scale).
std::vector<std::pair<std::vector<int>, std::vector<int>>> brute_force_bicliques(
    const BipartiteGraph& g, int a, int b);

}  // namespace exhaustive

#endif
