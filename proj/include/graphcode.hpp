#ifndef BORELCODER_GRAPHCODE_HPP
#define BORELCODER_GRAPHCODE_HPP

#include <map>
#include <optional>
#include <string>

#include "structcore.hpp"

// Bipartite graph codes for finite trees.  Every tree node owns 14*m slots
// (η, i, n) with i < m, n < 14; odd n is the left side.  Same-node slots of
// opposite parity are all joined by edges, so each node carries a complete
// 7m x 7m block.  An equivalence relation glues slots of adjacent tree nodes,
// making block intersections encode the tree order, and the quotient graph
// is the code.  Decoding works from the bare graph: blocks are recovered as
// the 7m x 7m complete bipartite subgraphs, related by intersection size,
// and the tree is rebuilt level by level.
//
// Two gluing variants ship.  `paper` links slot n of a non-root node to the
// same slot n in {10..13} of its children and closes transitively, which
// chains whole subtrees into shared classes.  `paired` links parent slots
// {6..9} to child slots {10..13}, confining every class to one parent-child
// layer; decoders assume this variant.

namespace graphcode {

using structcore::BipartiteGraph;
using structcore::FinTree;
using structcore::Node;

enum class Variant { paper, paired };

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& s);

inline constexpr int kSlots = 14;
inline constexpr int kSideSlots = 7;  // per parity

// Dense index of the pre-graph universe T x m x 14.
struct PreGraph {
    std::vector<Node> nodes;  // sorted tree nodes
    int m = 0;

    int elems() const { return static_cast<int>(nodes.size()) * m * kSlots; }
    int id(int node_index, int i, int n) const { return (node_index * m + i) * kSlots + n; }
    int node_index_of(int elem) const { return elem / (m * kSlots); }
    int copy_of(int elem) const { return (elem / kSlots) % m; }
    int slot_of(int elem) const { return elem % kSlots; }
};

PreGraph index_pre_graph(const FinTree& t, int m);

// The full pre-quotient graph: vertices are pre-graph element ids.
BipartiteGraph build_pre_graph(const FinTree& t, int m);

// Partition of the pre-graph elements under the closed gluing relation;
// classes sorted by smallest member, each class sorted.
std::vector<std::vector<int>> build_equiv(const FinTree& t, int m, Variant variant);

// The raw generator links before closure (for auditing the closure).
std::vector<std::pair<int, int>> equiv_links(const PreGraph& pg, const FinTree& t,
                                             Variant variant);

struct GraphCode {
    BipartiteGraph graph;                // vertices are class ids 0..C-1
    std::map<Node, std::vector<int>> blocks;  // η -> sorted class ids
    int m = 0;
    Variant variant = Variant::paired;
};

// Quotient code; checks that every block is a complete 7m x 7m bipartite
// subgraph and that slot parity is constant on classes before returning.
GraphCode build_code(const FinTree& t, int m, Variant variant);

// Exact block-intersection cardinalities (left, right) for every unordered
// node pair.
std::map<std::pair<Node, Node>, std::pair<int, int>> intersection_pattern(const GraphCode& code);

// All vertex sets inducing a complete a x b bipartite subgraph, as
// (left set, right set) pairs, sorted.
std::vector<std::pair<std::vector<int>, std::vector<int>>>
enumerate_complete_bipartite_subgraphs(const BipartiteGraph& g, int a, int b);

// The relational structure on blocks: r1 when the intersection is an m x m
// complete bipartite graph, r2 when 2m x 2m.  Blocks are recomputed from the
// graph by biclique enumeration, never read off code.blocks; the recorded
// block map only supplies the expected count.
struct BlockStructure {
    std::vector<std::pair<std::vector<int>, std::vector<int>>> elements;  // (left, right)
    std::vector<std::pair<int, int>> r1;  // index pairs, i < j
    std::vector<std::pair<int, int>> r2;
};

BlockStructure block_structure(const GraphCode& code);

// Recover the tree from a bare graph.  Throws codec_error with a diagnostic
// when the input is not a valid code or the level induction is ambiguous.
FinTree decode_tree_from_code(const BipartiteGraph& g, int m);

// Strictly increasing scales, each at least `ratio` times the previous.
struct ScaleSequence {
    std::vector<int> values;
    static constexpr int kMinRatio = 8;
};

void validate_scales(const ScaleSequence& s);

// Disjoint union of the codes at every scale; vertex ids are offset per
// scale but decoders never rely on that.
BipartiteGraph build_multiscale(const FinTree& t, const ScaleSequence& scales, Variant variant);

// Split into connected components, infer each component's scale, decode each
// level and check the decoded trees agree up to isomorphism.
FinTree decode_multiscale(const BipartiteGraph& g,
                          const std::optional<ScaleSequence>& scales_hint = std::nullopt);

// Largest t such that a t x t complete bipartite subgraph exists.
int max_balanced_biclique(const BipartiteGraph& g);

}  // namespace graphcode

#endif
