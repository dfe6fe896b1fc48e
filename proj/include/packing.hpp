#ifndef BORELCODER_PACKING_HPP
#define BORELCODER_PACKING_HPP

#include <optional>
#include <string>

#include "structcore.hpp"

// Extremal edge counts for bipartite graphs, the k-statistic v - CC, the
// two-part pair bound, and dense connected / almost-complete subgraph
// extraction.  All threshold comparisons use exact integer arithmetic.

namespace packing {

using structcore::BipartiteGraph;

struct PackingStats {
    long long v = 0;   // vertices, isolated included
    long long e = 0;   // edges
    long long cc = 0;  // connected components; isolated vertices count
    long long k = 0;   // v - cc
};

// e*(2b) = b^2, e*(2b+1) = b(b+1): the extremal edge count for bipartite
// graphs on at most c vertices.
long long e_star(long long c);

PackingStats graph_stats(const BipartiteGraph& g);

// f(c, d) = e*(c+1) + e*(d+1): the largest edge count of a two-part graph
// B ⊔ C with k(B) <= c and k(C) <= d.
long long pair_bound_f(long long c, long long d);

enum class SideBound {
    symmetric,     // 0.99*ell <= side <= 1.01*ell
    upper_at_ell,  // 0.99*ell <= side <= ell
};

struct AlmostCompleteReport {
    long long ell = 0;
    long long left_size = 0;
    long long right_size = 0;
    long long min_valence = 0;
    bool verdict = false;
    // when a bound parameter N was supplied: whether v <= 2*ell+N and
    // e >= ell^2 - N both hold
    std::optional<bool> bounds_hold;
};

AlmostCompleteReport is_almost_ell_complete(const BipartiteGraph& g, long long ell,
                                            SideBound mode = SideBound::symmetric,
                                            std::optional<long long> n_bound = std::nullopt);

struct ExtractResult {
    std::optional<BipartiteGraph> subgraph;
    std::string reason;  // set when subgraph is absent
};

// If k(g) <= 2*ell + w and e(g) >= ell^2, returns a connected component with
// at least ell^2 - w^2/4 edges and at most 2*ell + w vertices.
// Requires ell > w^2/4.
ExtractResult extract_dense_connected(const BipartiteGraph& g, long long ell, long long w);

// Connected components as vertex-induced subgraphs, original ids kept.
std::vector<BipartiteGraph> connected_components(const BipartiteGraph& g);

// True when some side-size pair (m1, m2) with m1+m2 <= 2*ell+N and
// m1*m2 >= ell^2-N puts a side outside [0.99*ell, 1.01*ell].
bool side_bound_violation_exists(long long ell, long long n_bound);

// Smallest ell at which the hypotheses v <= 2*ell+N, e >= ell^2-N force both
// sides into [0.99*ell, 1.01*ell].  Scans shapes exactly; returns nullopt if
// no ell below the cap works.
std::optional<long long> min_ell_for_side_bounds(long long n_bound, long long ell_cap = 200000);

// Smallest ell from which no larger ell (up to the cap) admits a side-bound
// violation; the deviation cap ell/100 moves in steps, so holding once does
// not mean holding forever.
std::optional<long long> stable_ell_for_side_bounds(long long n_bound,
                                                    long long ell_cap = 200000);

// A graph satisfying v <= 2*ell+N and e >= ell^2-N whose minimum valence is
// below 0.9*ell, when one exists (a complete ell x ell graph plus one
// pendant/isolated vertex).  Witnesses that the valence clause needs N = 0.
std::optional<BipartiteGraph> low_valence_witness(long long ell, long long n_bound);

}  // namespace packing

#endif
