#ifndef BORELCODER_DEEPTREE_HPP
#define BORELCODER_DEEPTREE_HPP

#include <map>
#include <optional>

#include "structcore.hpp"

// Trees with a designated stem, free joins along the stem, cusp detection
// from uniform subtree depths, and membership coding through an assignment
// of depth pairs with globally distinct differences.

namespace deeptree {

using structcore::FinTree;
using structcore::Node;

// A tree whose nodes of length <= stem_length form a single all-zero spine:
// any node longer than j < stem_length has entry 0 at position j.
struct ITree {
    int stem_length = 0;
    FinTree tree;
};

void validate_i_tree(const ITree& t);

// {η ∈ ω^{<=k} : η(j) = 0 for all j < i}, entries beyond the stem truncated
// to the branching width b.
ITree make_i_tree(int i, int k, int width);

// Universes merged along the stem: nodes of length <= stem_length are
// identified level by level (when both sides have them), everything else
// stays disjoint.
ITree free_join(const ITree& a, const ITree& b);

// A node's uniform depth: if every maximal branch of its subtree has the
// same length (in edges, measured from the node), that length; else absent.
std::map<Node, std::optional<int>> uniform_depths(const FinTree& t);

struct CuspLabel {
    Node node;
    long long m = 0;  // the two uniform successor depths, m > n
    long long n = 0;
};

struct CuspThresholds {
    int successor_min = 2;  // witnesses required per depth class and for deep successors
    int deep_min = 0;       // successors of height >= deep_min count as deep witnesses
};

// A node is an (m, n)-cusp when at least successor_min immediate successors
// have uniform depth m, as many have uniform depth n (m != n), and as many
// have height >= deep_min.  One label per qualifying depth pair.
std::vector<CuspLabel> detect_cusps(const FinTree& t, const CuspThresholds& th);

// Four distinct values n+ < m+, n- < m- per address δ, drawn from per-level
// pools; every value pool obeys the doubling rule (any two pool members
// n < m satisfy m > 2n), which makes all differences m - n pairwise distinct.
struct DiffQuad {
    long long n_plus = 0, m_plus = 0;
    long long n_minus = 0, m_minus = 0;
};

struct DiffAssignment {
    std::map<int, std::vector<long long>> pools;  // level -> values allotted
    std::map<Node, DiffQuad> quads;               // δ -> its quadruple
    // diff -> (δ, member?) resolves a difference uniquely
    std::map<long long, std::pair<Node, bool>> diff_index;

    // Φ: diff -> lg(δ); throws codec_error on an unknown difference.
    int phi(long long diff) const;
};

// Assignment covering every δ over the given width with lg(δ) <= depth_bound.
// Throws codec_error on pool exhaustion rather than reusing a difference.
DiffAssignment assign_diffs(int depth_bound, int width);

// Membership labels for a tree inside a scaffold: every scaffold node gets
// its level quadruple's plus pair when it lies in `member_tree`, else the
// minus pair.  The scaffold must contain the member tree.
std::vector<CuspLabel> label_membership(const FinTree& scaffold, const FinTree& member_tree,
                                        const DiffAssignment& assignment);

// Classifies each label as member or non-member by its difference and
// returns the tree of member nodes.  Throws codec_error on an unknown
// difference, a label whose pair disagrees with its quadruple, a label depth
// inconsistent with Φ, or a non-prefix-closed member set.
FinTree cusp_decode(const std::vector<CuspLabel>& labels, const DiffAssignment& assignment);

}  // namespace deeptree

#endif
