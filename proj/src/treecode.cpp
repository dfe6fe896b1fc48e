#include "treecode.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace treecode {

using structcore::codec_error;
using structcore::node_to_string;

long long PairingFn::operator()(int n, int j) const {
    if (n < 0 || j < 0) throw std::invalid_argument("pairing on negative arguments");
    long long s = static_cast<long long>(n) + j;
    return s * (s + 1) / 2 + j + 2;
}

std::pair<int, int> PairingFn::invert(long long v) const {
    if (v < 2) throw codec_error("pair code below 2");
    long long z = v - 2;
    long long s = 0;
    while ((s + 1) * (s + 2) / 2 <= z) ++s;
    long long j = z - s * (s + 1) / 2;
    long long n = s - j;
    return {static_cast<int>(n), static_cast<int>(j)};
}

GadgetLibrary make_special_family(int count) {
    if (count < 1) throw std::invalid_argument("need at least one gadget");
    GadgetLibrary lib;
    for (int i = 0; i < count; ++i) {
        std::vector<Node> nodes;
        Node cur;
        nodes.push_back(cur);
        for (int d = 0; d < i + 2; ++d) {
            cur.push_back(0);
            nodes.push_back(cur);
        }
        lib.trees.push_back(FinTree::from_nodes(nodes));
    }
    return lib;
}

std::vector<AtomicFormula> atomic_formulas(const RelStructure& signature, int n) {
    std::vector<AtomicFormula> out;
    for (std::size_t ri = 0; ri < signature.relations.size(); ++ri) {
        int arity = signature.relations[ri].second.arity;
        std::vector<int> vars(arity, 0);
        std::function<void(int)> walk = [&](int pos) {
            if (pos == arity) {
                out.push_back({static_cast<int>(ri), vars});
                return;
            }
            for (int v = 0; v < n; ++v) {
                vars[pos] = v;
                walk(pos + 1);
            }
        };
        if (arity == 0)
            out.push_back({static_cast<int>(ri), {}});
        else if (n > 0)
            walk(0);
    }
    return out;
}

// ---- structures <-> colored trees -------------------------------------------

ColoredTree encode_structure(const RelStructure& m, int d, const PairingFn& phi) {
    structcore::validate_structure(m);
    if (d < 1) throw std::invalid_argument("tuple depth must be >= 1");
    ColoredTree ct;
    std::vector<Node> nodes;
    std::function<void(Node&, int)> gen = [&](Node& cur, int remaining) {
        nodes.push_back(cur);
        if (remaining == 0) return;
        for (int v = 0; v < m.universe; ++v) {
            cur.push_back(v);
            gen(cur, remaining - 1);
            cur.pop_back();
        }
    };
    Node root;
    gen(root, d);
    ct.tree = FinTree::from_nodes(nodes);

    for (const Node& node : ct.tree.nodes) {
        int n = static_cast<int>(node.size());
        auto formulas = atomic_formulas(m, n);
        std::vector<int> cols;
        for (std::size_t i = 0; i < formulas.size(); ++i) {
            const auto& f = formulas[i];
            std::vector<int> tuple;
            for (int var : f.vars) tuple.push_back(node[var]);
            if (m.holds(m.relations[f.relation].first, tuple))
                cols.push_back(static_cast<int>(phi(n, static_cast<int>(i))));
        }
        std::sort(cols.begin(), cols.end());
        if (!cols.empty()) ct.colors[node] = std::move(cols);
    }
    return ct;
}

RelStructure decode_structure(const ColoredTree& ct, const RelStructure& signature,
                              const PairingFn& phi) {
    structcore::validate_colored_tree(ct);
    int d = structcore::tree_depth(ct.tree);
    int u = static_cast<int>(structcore::children_of(ct.tree, {}).size());
    if (d < 1 && u > 0) throw codec_error("encoded tree has no tuple levels");

    // shape check: all tuples over {0..u-1} of length <= d must be present
    std::size_t expected = 0;
    std::size_t level_size = 1;
    for (int n = 0; n <= d; ++n) {
        expected += level_size;
        level_size *= static_cast<std::size_t>(u);
    }
    if (ct.tree.size() != expected)
        throw codec_error("tree is not the full tuple tree of its branching");
    for (const Node& node : ct.tree.nodes)
        for (int v : node)
            if (v >= u) throw codec_error("tuple entry out of range at " + node_to_string(node));

    RelStructure out;
    out.universe = u;
    for (const auto& [name, rel] : signature.relations) {
        if (rel.arity > d)
            throw std::invalid_argument("relation " + name + " has arity above the tuple depth");
        out.relations.emplace_back(name, structcore::Relation{rel.arity, {}});
    }
    std::sort(out.relations.begin(), out.relations.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    // read each relation off the identity tuple at its own depth
    for (auto& [name, rel] : out.relations) {
        int r = rel.arity;
        auto formulas = atomic_formulas(signature, r);
        int idx = -1;
        for (std::size_t i = 0; i < formulas.size(); ++i) {
            if (signature.relations[formulas[i].relation].first != name) continue;
            bool identity = true;
            for (int p = 0; p < r; ++p)
                if (formulas[i].vars[p] != p) identity = false;
            if (identity) {
                idx = static_cast<int>(i);
                break;
            }
        }
        if (idx < 0 && r > 0) throw codec_error("no identity formula for " + name);
        long long code = phi(r, idx < 0 ? 0 : idx);
        std::vector<int> tuple(r, 0);
        std::function<void(int)> walk = [&](int pos) {
            if (pos == r) {
                auto it = ct.colors.find(tuple);
                bool has = it != ct.colors.end() &&
                           std::binary_search(it->second.begin(), it->second.end(),
                                              static_cast<int>(code));
                if (has) rel.tuples.push_back(tuple);
                return;
            }
            for (int v = 0; v < u; ++v) {
                tuple[pos] = v;
                walk(pos + 1);
            }
        };
        if (r == 0) continue;
        walk(0);
        std::sort(rel.tuples.begin(), rel.tuples.end());
    }

    // full consistency sweep: every color everywhere must agree with the
    // decoded relations under variable substitution
    for (const Node& node : ct.tree.nodes) {
        int n = static_cast<int>(node.size());
        auto formulas = atomic_formulas(signature, n);
        std::set<int> present;
        auto it = ct.colors.find(node);
        if (it != ct.colors.end()) present.insert(it->second.begin(), it->second.end());
        std::set<int> expected_cols;
        for (std::size_t i = 0; i < formulas.size(); ++i) {
            const auto& f = formulas[i];
            const std::string& name = signature.relations[f.relation].first;
            std::vector<int> tuple;
            for (int var : f.vars) tuple.push_back(node[var]);
            if (out.holds(name, tuple))
                expected_cols.insert(static_cast<int>(phi(n, static_cast<int>(i))));
        }
        if (present != expected_cols)
            throw codec_error("inconsistent color pattern at " + node_to_string(node));
    }
    return out;
}

// ---- tree surgery -------------------------------------------------------------

FinTree attach_trees(const FinTree& t, const std::map<Node, FinTree>& gadgets) {
    structcore::validate_tree(t);
    for (const auto& [at, g] : gadgets) {
        if (!t.contains(at))
            throw std::invalid_argument("attachment point " + node_to_string(at) +
                                        " is not a node");
        structcore::validate_tree(g);
    }
    auto kids = structcore::child_map(t);
    std::vector<Node> out;

    // re-address a gadget subtree below the given base address
    std::function<void(const FinTree&, const std::map<Node, std::vector<Node>>&, const Node&,
                       const Node&)>
        put_gadget = [&](const FinTree& g, const std::map<Node, std::vector<Node>>& gkids,
                         const Node& gnode, const Node& base) {
            const auto& cs = gkids.at(gnode);
            for (std::size_t i = 0; i < cs.size(); ++i) {
                Node addr = base;
                addr.push_back(static_cast<int>(i));
                out.push_back(addr);
                put_gadget(g, gkids, cs[i], addr);
            }
        };

    std::function<void(const Node&, const Node&)> walk = [&](const Node& tnode,
                                                             const Node& base) {
        out.push_back(base);
        const auto& cs = kids.at(tnode);
        int next = 0;
        for (const Node& c : cs) {
            Node addr = base;
            addr.push_back(next++);
            walk(c, addr);
        }
        auto git = gadgets.find(tnode);
        if (git != gadgets.end()) {
            auto gkids = structcore::child_map(git->second);
            const auto& roots = gkids.at(Node{});
            for (const Node& g : roots) {
                Node addr = base;
                addr.push_back(next++);
                out.push_back(addr);
                put_gadget(git->second, gkids, g, addr);
            }
        }
    };
    walk({}, {});
    return FinTree::from_nodes(out);
}

// ---- colored trees <-> plain trees --------------------------------------------

namespace {

// bouquet: one chain of each requested depth, joined at the root
FinTree bouquet(const std::vector<int>& depths) {
    std::vector<Node> nodes;
    nodes.push_back({});
    for (std::size_t i = 0; i < depths.size(); ++i) {
        Node cur{static_cast<int>(i)};
        nodes.push_back(cur);
        for (int d = 1; d < depths[i]; ++d) {
            cur.push_back(0);
            nodes.push_back(cur);
        }
    }
    return FinTree::from_nodes(nodes);
}

}  // namespace

DepthHorizon minimal_horizon(const ColoredTree& ct, const PairingFn& phi) {
    structcore::validate_colored_tree(ct);
    long long max_code = 0;
    for (const Node& node : ct.tree.nodes) {
        int n = static_cast<int>(node.size());
        max_code = std::max(max_code, phi(n, kMarkerColor));
        auto it = ct.colors.find(node);
        if (it != ct.colors.end())
            for (int c : it->second) max_code = std::max(max_code, phi(n, c));
    }
    return DepthHorizon{static_cast<int>(max_code) + 1};
}

FinTree encode_colored_tree(const ColoredTree& ct, const PairingFn& phi,
                            const DepthHorizon& horizon) {
    structcore::validate_colored_tree(ct);
    if (horizon.depth < 1) throw std::invalid_argument("horizon must be positive");
    std::map<Node, FinTree> gadgets;
    for (const Node& node : ct.tree.nodes) {
        int n = static_cast<int>(node.size());
        std::vector<int> color_set = {kMarkerColor};
        auto it = ct.colors.find(node);
        if (it != ct.colors.end())
            for (int c : it->second) {
                if (c == kMarkerColor)
                    throw codec_error("color 0 is reserved as the marker (node " +
                                      node_to_string(node) + ")");
                color_set.push_back(c);
            }
        std::vector<int> depths;
        for (int c : color_set) {
            long long code = phi(n, c);
            if (code >= horizon.depth)
                throw codec_error("horizon too small for node " + node_to_string(node) +
                                  ", color " + std::to_string(c) + " (pair code " +
                                  std::to_string(code) + ")");
            depths.push_back(static_cast<int>(code));
        }
        depths.push_back(horizon.depth);  // the spine
        gadgets.emplace(node, bouquet(depths));
    }
    return attach_trees(ct.tree, gadgets);
}

ColoredTree decode_colored_tree(const FinTree& t, const PairingFn& phi,
                                const DepthHorizon& horizon) {
    structcore::validate_tree(t);
    if (horizon.depth < 1) throw std::invalid_argument("horizon must be positive");
    const int D = horizon.depth;
    auto heights = structcore::node_heights(t);
    auto kids = structcore::child_map(t);

    // originals: nodes with a descendant at distance >= D
    std::set<Node> originals;
    for (const auto& [node, h] : heights)
        if (h >= D) originals.insert(node);
    if (!originals.count(Node{})) throw codec_error("root has no deep descendant; no originals");

    auto is_chain = [&](const Node& head) {
        Node cur = head;
        while (true) {
            const auto& cs = kids.at(cur);
            if (cs.empty()) return true;
            if (cs.size() > 1) return false;
            cur = cs[0];
        }
    };

    // rebuild the original tree with fresh addresses and collect colors
    ColoredTree out;
    std::vector<Node> new_nodes;
    std::function<void(const Node&, const Node&)> walk = [&](const Node& node,
                                                             const Node& fresh) {
        new_nodes.push_back(fresh);
        int n = static_cast<int>(node.size());
        // depth within the originals equals depth in t: ancestors of an
        // original are original
        int spines = 0;
        std::set<int> gadget_depths;
        std::vector<int> colors;
        int child_index = 0;
        for (const Node& c : kids.at(node)) {
            if (originals.count(c)) {
                Node f = fresh;
                f.push_back(child_index++);
                walk(c, f);
                continue;
            }
            int h = 1 + heights.at(c);
            if (h == D) {
                if (!is_chain(c))
                    throw codec_error("branching spine below " + node_to_string(node));
                ++spines;
                continue;
            }
            if (h > D) throw codec_error("impossible non-original depth");  // unreachable
            if (h < 2 || !is_chain(c))
                throw codec_error("node " + node_to_string(c) +
                                  " fits neither the original nor the gadget signature");
            if (!gadget_depths.insert(h).second)
                throw codec_error("duplicate gadget depth " + std::to_string(h) + " at " +
                                  node_to_string(node));
            auto [pn, pj] = phi.invert(h);
            if (pn != n)
                throw codec_error("gadget depth " + std::to_string(h) + " at " +
                                  node_to_string(node) + " codes level " + std::to_string(pn) +
                                  ", found at level " + std::to_string(n));
            if (pj != kMarkerColor) colors.push_back(pj);
        }
        if (spines != 1)
            throw codec_error("original node " + node_to_string(node) + " has " +
                              std::to_string(spines) + " spines");
        long long marker = phi(n, kMarkerColor);
        if (!gadget_depths.count(static_cast<int>(marker)))
            throw codec_error("original node " + node_to_string(node) + " lacks its marker");
        std::sort(colors.begin(), colors.end());
        if (!colors.empty()) out.colors[fresh] = colors;
    };
    walk({}, {});
    out.tree = FinTree::from_nodes(new_nodes);
    structcore::validate_colored_tree(out);
    return out;
}

// ---- library variant ------------------------------------------------------------

namespace {

void validate_library(const GadgetLibrary& lib) {
    std::set<std::vector<int>> codes;
    for (const FinTree& g : lib.trees) {
        structcore::validate_tree(g);
        if (structcore::tree_depth(g) < 2) throw codec_error("library gadget of depth < 2");
        if (!codes.insert(structcore::canonical_tree_code(g)).second)
            throw codec_error("library gadgets are not pairwise non-isomorphic");
    }
}

}  // namespace

FinTree encode_colored_tree_with_library(const ColoredTree& ct, const GadgetLibrary& lib,
                                         const DepthHorizon& horizon) {
    structcore::validate_colored_tree(ct);
    validate_library(lib);
    const int D = horizon.depth;
    std::map<Node, FinTree> gadgets;
    for (const Node& node : ct.tree.nodes) {
        // gadget: marker leaf + one library tree per color + spine
        std::vector<Node> gnodes;
        gnodes.push_back({});
        gnodes.push_back({0});  // the marker leaf
        int next = 1;
        auto it = ct.colors.find(node);
        if (it != ct.colors.end()) {
            for (int c : it->second) {
                if (c >= static_cast<int>(lib.trees.size()))
                    throw codec_error("color " + std::to_string(c) + " has no library gadget");
                if (structcore::tree_depth(lib.trees[c]) + 1 >= D)
                    throw codec_error("horizon too small for node " + node_to_string(node) +
                                      ", color " + std::to_string(c));
                Node base{next++};
                gnodes.push_back(base);
                for (const Node& gn : lib.trees[c].nodes) {
                    if (gn.empty()) continue;
                    Node addr = base;
                    addr.insert(addr.end(), gn.begin(), gn.end());
                    gnodes.push_back(addr);
                }
            }
        }
        Node spine{next};
        gnodes.push_back(spine);
        for (int d = 1; d < D; ++d) {
            spine.push_back(0);
            gnodes.push_back(spine);
        }
        gadgets.emplace(node, FinTree::from_nodes(gnodes));
    }
    return attach_trees(ct.tree, gadgets);
}

ColoredTree decode_colored_tree_with_library(const FinTree& t, const GadgetLibrary& lib,
                                             const DepthHorizon& horizon) {
    structcore::validate_tree(t);
    validate_library(lib);
    const int D = horizon.depth;
    std::map<std::vector<int>, int> code_to_color;
    for (std::size_t i = 0; i < lib.trees.size(); ++i)
        code_to_color[structcore::canonical_tree_code(lib.trees[i])] = static_cast<int>(i);

    auto heights = structcore::node_heights(t);
    auto kids = structcore::child_map(t);
    std::set<Node> originals;
    for (const auto& [node, h] : heights)
        if (h >= D) originals.insert(node);
    if (!originals.count(Node{})) throw codec_error("root has no deep descendant; no originals");

    auto subtree_of = [&](const Node& head) {
        std::vector<Node> sub;
        std::function<void(const Node&, const Node&)> rec = [&](const Node& cur,
                                                                const Node& rel) {
            sub.push_back(rel);
            const auto& cs = kids.at(cur);
            for (std::size_t i = 0; i < cs.size(); ++i) {
                Node r = rel;
                r.push_back(static_cast<int>(i));
                rec(cs[i], r);
            }
        };
        rec(head, {});
        return FinTree::from_nodes(sub);
    };
    auto is_chain = [&](const Node& head) {
        Node cur = head;
        while (true) {
            const auto& cs = kids.at(cur);
            if (cs.empty()) return true;
            if (cs.size() > 1) return false;
            cur = cs[0];
        }
    };

    ColoredTree out;
    std::vector<Node> new_nodes;
    std::function<void(const Node&, const Node&)> walk = [&](const Node& node,
                                                             const Node& fresh) {
        new_nodes.push_back(fresh);
        int markers = 0, spines = 0;
        std::vector<int> colors;
        int child_index = 0;
        for (const Node& c : kids.at(node)) {
            if (originals.count(c)) {
                Node f = fresh;
                f.push_back(child_index++);
                walk(c, f);
                continue;
            }
            int h = 1 + heights.at(c);
            if (h == 1) {
                ++markers;
                continue;
            }
            if (h == D) {
                if (!is_chain(c))
                    throw codec_error("branching spine below " + node_to_string(node));
                ++spines;
                continue;
            }
            auto code = structcore::canonical_tree_code(subtree_of(c));
            auto cit = code_to_color.find(code);
            if (cit == code_to_color.end())
                throw codec_error("unrecognized gadget below " + node_to_string(node));
            colors.push_back(cit->second);
        }
        if (markers != 1)
            throw codec_error("original node " + node_to_string(node) + " has " +
                              std::to_string(markers) + " marker leaves");
        if (spines != 1)
            throw codec_error("original node " + node_to_string(node) + " has " +
                              std::to_string(spines) + " spines");
        std::sort(colors.begin(), colors.end());
        auto dup = std::adjacent_find(colors.begin(), colors.end());
        if (dup != colors.end())
            throw codec_error("duplicate color gadget at " + node_to_string(node));
        if (!colors.empty()) out.colors[fresh] = colors;
    };
    walk({}, {});
    out.tree = FinTree::from_nodes(new_nodes);
    structcore::validate_colored_tree(out);
    return out;
}

}  // namespace treecode
