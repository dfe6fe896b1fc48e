#ifndef BORELCODER_STRUCTCORE_HPP
#define BORELCODER_STRUCTCORE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Core value types shared by every coding stage: finite rooted trees given
// as prefix-closed address sets, colored trees, bipartite graphs and finite
// relational structures, together with canonical forms, isomorphism testing
// and bounded back-and-forth equivalence.

namespace structcore {

// Raised on malformed or undecodable inputs.
struct codec_error : std::runtime_error {
    explicit codec_error(const std::string& what) : std::runtime_error(what) {}
};

// A tree node address: a finite sequence of non-negative integers.
// The empty sequence is the root.
using Node = std::vector<int>;

std::string node_to_string(const Node& n);   // "" for root, else "0.2.1"
Node node_from_string(const std::string& s);

// Prefix-closed, rooted set of node addresses, kept sorted and unique.
struct FinTree {
    std::vector<Node> nodes;

    static FinTree single();                       // just the root
    static FinTree from_nodes(std::vector<Node> ns);  // sorts, dedups, validates

    bool contains(const Node& n) const;
    std::size_t size() const { return nodes.size(); }
};

void validate_tree(const FinTree& t);  // throws codec_error on violation
bool is_valid_tree(const FinTree& t);

// Child adjacency, recomputed on demand; trees here are desk-scale.
std::map<Node, std::vector<Node>> child_map(const FinTree& t);
std::vector<Node> children_of(const FinTree& t, const Node& n);
int tree_depth(const FinTree& t);  // max node length

// Height of a node = max number of edges from it down to a leaf.
std::map<Node, int> node_heights(const FinTree& t);

// Tree plus a finite set of color indices per node.
struct ColoredTree {
    FinTree tree;
    std::map<Node, std::vector<int>> colors;  // sorted, unique, non-negative

    static ColoredTree plain(FinTree t);
};

void validate_colored_tree(const ColoredTree& ct);

// Two-sided graph; vertex ids are arbitrary ints, edges go left-to-right.
struct BipartiteGraph {
    std::vector<int> left;
    std::vector<int> right;
    std::vector<std::pair<int, int>> edges;  // (left id, right id), sorted

    static BipartiteGraph make(std::vector<int> l, std::vector<int> r,
                               std::vector<std::pair<int, int>> e);
    bool has_edge(int l, int r) const;
};

void validate_bipartite(const BipartiteGraph& g);
BipartiteGraph complete_bipartite(int a, int b);  // vertices 0..a-1 / a..a+b-1

// Finite relational structure with universe {0..universe-1}.
struct Relation {
    int arity = 0;
    std::vector<std::vector<int>> tuples;  // sorted, unique
};

struct RelStructure {
    int universe = 0;
    std::vector<std::pair<std::string, Relation>> relations;  // sorted by name

    const Relation* find(const std::string& name) const;
    bool holds(const std::string& name, const std::vector<int>& tuple) const;
};

void validate_structure(const RelStructure& m);
bool same_signature(const RelStructure& a, const RelStructure& b);

// A finite partial map between two structures, kept as sorted pairs.
struct PartialIso {
    std::vector<std::pair<int, int>> pairs;
};

// True when `pairs` is functional, injective and preserves the
// quantifier-free type of its domain between a and b.
bool partial_iso_valid(const RelStructure& a, const RelStructure& b,
                       const std::vector<std::pair<int, int>>& pairs);

// ---- canonical forms -----------------------------------------------------

// Deterministic code such that two trees receive equal codes iff they are
// isomorphic as rooted trees (children unordered). Sorted recursive child
// codes, bracket tokens 0/1.
std::vector<int> canonical_tree_code(const FinTree& t);

// Same, with each node's color set folded into its code (tokens >= 2).
std::vector<int> canonical_colored_code(const ColoredTree& ct);

// ---- isomorphism ----------------------------------------------------------

// Color-and-shape preserving node bijection, if one exists.
std::optional<std::vector<std::pair<Node, Node>>> colored_tree_iso(
    const ColoredTree& a, const ColoredTree& b);

std::optional<std::vector<std::pair<Node, Node>>> tree_iso(const FinTree& a,
                                                           const FinTree& b);

// Side- and edge-preserving vertex bijection, if one exists.  Candidates are
// pruned with iterated neighborhood refinement before backtracking.
std::optional<std::vector<std::pair<int, int>>> bipartite_iso(
    const BipartiteGraph& a, const BipartiteGraph& b);

// ---- bounded back-and-forth ------------------------------------------------

// k-round back-and-forth equivalence, decided by memoized game search over
// partial isomorphisms.  Throws std::invalid_argument on signature mismatch.
// At k >= |A| + |B| this coincides with isomorphism of finite structures.
bool ef_equivalent(const RelStructure& a, const RelStructure& b, int k);

}  // namespace structcore

#endif
