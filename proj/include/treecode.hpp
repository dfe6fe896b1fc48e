#ifndef BORELCODER_TREECODE_HPP
#define BORELCODER_TREECODE_HPP

#include <map>
#include <string>

#include "structcore.hpp"

// Structures -> colored trees -> plain trees, with decoders recovering the
// source up to isomorphism.
//
// Structure coding: the tuples over the universe of length <= d form a tree
// under initial segment; a node of length n is colored, for every atomic
// formula in n variables it satisfies, by a pair code of (n, formula index).
//
// Tree coding: each node gets a bouquet of chains whose depths pair-code its
// colors, plus a chain of length D (the horizon) marking it as an original
// node; a reserved marker color makes detection input-independent.  The
// unbounded-color regime instead attaches library gadget trees below a
// marker leaf.

namespace treecode {

using structcore::ColoredTree;
using structcore::FinTree;
using structcore::Node;
using structcore::RelStructure;

// Explicit bijection ω×ω -> ω∖{0,1} (Cantor pairing shifted by 2).
struct PairingFn {
    long long operator()(int n, int j) const;
    std::pair<int, int> invert(long long v) const;  // throws codec_error off-range
    std::string name() const { return "cantor+2"; }
};

// Finitization of "contained in a branch": a node is original when it has a
// descendant at distance >= depth.  Must exceed every gadget depth used.
struct DepthHorizon {
    int depth = 0;
};

// Reserved marker color, implicitly attached to every node by the bouquet
// encoder and rejected in its input.
inline constexpr int kMarkerColor = 0;

// Pairwise non-isomorphic finite trees used as color gadgets.
struct GadgetLibrary {
    std::vector<FinTree> trees;  // each of depth >= 2
    int marker_color = kMarkerColor;
};

// n pairwise non-isomorphic trees; tree i is a chain of depth i + 2.
GadgetLibrary make_special_family(int count);

// The canonical list of atomic formulas in n variables for a signature:
// (relation index, variable tuple), relations in declared order, variable
// tuples in lexicographic order.
struct AtomicFormula {
    int relation = 0;
    std::vector<int> vars;
};
std::vector<AtomicFormula> atomic_formulas(const RelStructure& signature, int n);

// ---- structures <-> colored trees -----------------------------------------

// Tree of all tuples of length <= d; node colors pair-code the satisfied
// atomic formulas at that tuple.
ColoredTree encode_structure(const RelStructure& m, int d, const PairingFn& phi = {});

// Reads relations back off the colors of depth-arity nodes and checks that
// every color across the whole tree is consistent with them.  The signature
// argument carries names and arities; its tuple sets are ignored.
RelStructure decode_structure(const ColoredTree& ct, const RelStructure& signature,
                              const PairingFn& phi = {});

// ---- tree surgery -----------------------------------------------------------

// Attach each gadget at its node: the gadget root is identified with the
// node, gadget nodes from distinct attachment points stay incomparable.
FinTree attach_trees(const FinTree& t, const std::map<Node, FinTree>& gadgets);

// ---- colored trees <-> plain trees ------------------------------------------

// Bouquet coding: colors become chains of pair-coded depth, the marker color
// is added to every node, and each node grows a horizon-length spine.
// Throws codec_error when some pair code reaches the horizon, naming the
// offending node and color, or when the input uses the reserved color.
FinTree encode_colored_tree(const ColoredTree& ct, const PairingFn& phi,
                            const DepthHorizon& horizon);

ColoredTree decode_colored_tree(const FinTree& t, const PairingFn& phi,
                                const DepthHorizon& horizon);

// Library coding for the unbounded-color regime: each node grows a marker
// leaf plus one copy of library tree i per color i, and the spine.  The
// decoder recovers colors by matching extracted subtrees against the library
// up to isomorphism.
FinTree encode_colored_tree_with_library(const ColoredTree& ct, const GadgetLibrary& lib,
                                         const DepthHorizon& horizon);

ColoredTree decode_colored_tree_with_library(const FinTree& t, const GadgetLibrary& lib,
                                             const DepthHorizon& horizon);

// Smallest valid horizon for the bouquet coding of ct.
DepthHorizon minimal_horizon(const ColoredTree& ct, const PairingFn& phi = {});

}  // namespace treecode

#endif
