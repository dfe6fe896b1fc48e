#include "graphcode.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace graphcode {

using structcore::codec_error;
using structcore::node_to_string;

std::string variant_name(Variant v) { return v == Variant::paper ? "paper" : "paired"; }

Variant variant_from_name(const std::string& s) {
    if (s == "paper") return Variant::paper;
    if (s == "paired") return Variant::paired;
    throw std::invalid_argument("unknown variant '" + s + "'");
}

PreGraph index_pre_graph(const FinTree& t, int m) {
    structcore::validate_tree(t);
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    PreGraph pg;
    pg.nodes = t.nodes;
    pg.m = m;
    return pg;
}

BipartiteGraph build_pre_graph(const FinTree& t, int m) {
    PreGraph pg = index_pre_graph(t, m);
    BipartiteGraph g;
    for (int e = 0; e < pg.elems(); ++e)
        (pg.slot_of(e) % 2 == 1 ? g.left : g.right).push_back(e);
    for (std::size_t ni = 0; ni < pg.nodes.size(); ++ni)
        for (int i1 = 0; i1 < m; ++i1)
            for (int n1 = 1; n1 < kSlots; n1 += 2)
                for (int i2 = 0; i2 < m; ++i2)
                    for (int n2 = 0; n2 < kSlots; n2 += 2)
                        g.edges.emplace_back(pg.id(static_cast<int>(ni), i1, n1),
                                             pg.id(static_cast<int>(ni), i2, n2));
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

std::vector<std::pair<int, int>> equiv_links(const PreGraph& pg, const FinTree& t,
                                             Variant variant) {
    std::vector<std::pair<int, int>> links;
    auto kids = structcore::child_map(t);
    std::map<Node, int> index;
    for (std::size_t i = 0; i < pg.nodes.size(); ++i) index[pg.nodes[i]] = static_cast<int>(i);
    for (std::size_t ni = 0; ni < pg.nodes.size(); ++ni) {
        const Node& eta = pg.nodes[ni];
        const auto& cs = kids.at(eta);
        if (cs.empty()) continue;
        if (eta.empty()) {
            // root: same slot n in {0,1} at every immediate successor
            for (const Node& c : cs) {
                int ci = index.at(c);
                for (int i = 0; i < pg.m; ++i)
                    for (int n : {0, 1})
                        links.emplace_back(pg.id(static_cast<int>(ni), i, n), pg.id(ci, i, n));
            }
        } else if (variant == Variant::paper) {
            for (const Node& c : cs) {
                int ci = index.at(c);
                for (int i = 0; i < pg.m; ++i)
                    for (int n : {10, 11, 12, 13})
                        links.emplace_back(pg.id(static_cast<int>(ni), i, n), pg.id(ci, i, n));
            }
        } else {
            // paired: parent slots 6..9 joined to child slots 10..13
            for (const Node& c : cs) {
                int ci = index.at(c);
                for (int i = 0; i < pg.m; ++i)
                    for (int n : {6, 7, 8, 9})
                        links.emplace_back(pg.id(static_cast<int>(ni), i, n),
                                           pg.id(ci, i, n + 4));
            }
        }
    }
    return links;
}

namespace {

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<std::vector<int>> build_equiv(const FinTree& t, int m, Variant variant) {
    PreGraph pg = index_pre_graph(t, m);
    Dsu dsu(pg.elems());
    for (const auto& [a, b] : equiv_links(pg, t, variant)) dsu.unite(a, b);
    std::map<int, std::vector<int>> by_root;
    for (int e = 0; e < pg.elems(); ++e) by_root[dsu.find(e)].push_back(e);
    std::vector<std::vector<int>> classes;
    for (auto& [root, members] : by_root) {
        std::sort(members.begin(), members.end());
        classes.push_back(std::move(members));
    }
    std::sort(classes.begin(), classes.end());
    return classes;
}

GraphCode build_code(const FinTree& t, int m, Variant variant) {
    PreGraph pg = index_pre_graph(t, m);
    auto classes = build_equiv(t, m, variant);

    std::vector<int> class_of(pg.elems(), -1);
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (int e : classes[c]) class_of[e] = static_cast<int>(c);

    // parity must be constant on every class
    std::vector<int> parity(classes.size(), -1);
    for (std::size_t c = 0; c < classes.size(); ++c) {
        for (int e : classes[c]) {
            int p = pg.slot_of(e) % 2;
            if (parity[c] < 0) parity[c] = p;
            if (parity[c] != p)
                throw std::logic_error("slot parity not constant on a quotient class");
        }
    }

    GraphCode code;
    code.m = m;
    code.variant = variant;
    for (std::size_t c = 0; c < classes.size(); ++c)
        (parity[c] == 1 ? code.graph.left : code.graph.right).push_back(static_cast<int>(c));

    // induced edges: classes adjacent iff some representatives are adjacent;
    // pre-edges join same-node slots of opposite parity
    std::set<std::pair<int, int>> edges;
    for (std::size_t ni = 0; ni < pg.nodes.size(); ++ni)
        for (int i1 = 0; i1 < m; ++i1)
            for (int n1 = 1; n1 < kSlots; n1 += 2) {
                int cl = class_of[pg.id(static_cast<int>(ni), i1, n1)];
                for (int i2 = 0; i2 < m; ++i2)
                    for (int n2 = 0; n2 < kSlots; n2 += 2)
                        edges.emplace(cl, class_of[pg.id(static_cast<int>(ni), i2, n2)]);
            }
    code.graph.edges.assign(edges.begin(), edges.end());

    for (std::size_t ni = 0; ni < pg.nodes.size(); ++ni) {
        std::set<int> blk;
        for (int i = 0; i < m; ++i)
            for (int n = 0; n < kSlots; ++n) blk.insert(class_of[pg.id(static_cast<int>(ni), i, n)]);
        code.blocks[pg.nodes[ni]] = std::vector<int>(blk.begin(), blk.end());
    }

    structcore::validate_bipartite(code.graph);
    // every block must induce a complete 7m x 7m bipartite subgraph
    for (const auto& [node, blk] : code.blocks) {
        std::vector<int> bl, br;
        for (int v : blk) (parity[v] == 1 ? bl : br).push_back(v);
        if (static_cast<int>(bl.size()) != kSideSlots * m ||
            static_cast<int>(br.size()) != kSideSlots * m)
            throw std::logic_error("block of " + node_to_string(node) + " is not 7m x 7m");
        for (int l : bl)
            for (int r : br)
                if (!code.graph.has_edge(l, r))
                    throw std::logic_error("block of " + node_to_string(node) + " not complete");
    }
    return code;
}

std::map<std::pair<Node, Node>, std::pair<int, int>> intersection_pattern(const GraphCode& code) {
    std::map<std::pair<Node, Node>, std::pair<int, int>> out;
    std::set<int> left(code.graph.left.begin(), code.graph.left.end());
    for (auto it1 = code.blocks.begin(); it1 != code.blocks.end(); ++it1)
        for (auto it2 = std::next(it1); it2 != code.blocks.end(); ++it2) {
            std::vector<int> common;
            std::set_intersection(it1->second.begin(), it1->second.end(), it2->second.begin(),
                                  it2->second.end(), std::back_inserter(common));
            int l = 0, r = 0;
            for (int v : common) (left.count(v) ? l : r)++;
            out[{it1->first, it2->first}] = {l, r};
        }
    return out;
}

std::vector<std::pair<std::vector<int>, std::vector<int>>>
enumerate_complete_bipartite_subgraphs(const BipartiteGraph& g, int a, int b) {
    if (a < 1 || b < 1) throw std::invalid_argument("biclique sides must be >= 1");
    structcore::validate_bipartite(g);
    std::map<int, std::vector<int>> adj;  // left vertex -> sorted right neighbors
    for (int l : g.left) adj[l];
    for (const auto& [l, r] : g.edges) adj[l].push_back(r);
    for (auto& [l, v] : adj) std::sort(v.begin(), v.end());

    // low-degree vertices first: they force a branch into its block quickly
    std::vector<int> lefts;
    for (int l : g.left)
        if (static_cast<int>(adj[l].size()) >= b) lefts.push_back(l);
    std::stable_sort(lefts.begin(), lefts.end(),
                     [&](int x, int y) { return adj[x].size() < adj[y].size(); });
    std::map<int, std::size_t> order_of;
    for (std::size_t i = 0; i < lefts.size(); ++i) order_of[lefts[i]] = i;
    // right vertex -> order indices of its admissible left neighbors
    std::map<int, std::vector<std::size_t>> right_adj;
    for (int r : g.right) right_adj[r];
    for (const auto& [l, r] : g.edges) {
        auto it = order_of.find(l);
        if (it != order_of.end()) right_adj[r].push_back(it->second);
    }
    for (auto& [r, v] : right_adj) std::sort(v.begin(), v.end());

    std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
    std::vector<int> pick;

    std::function<void(std::size_t, const std::vector<int>&)> walk =
        [&](std::size_t start, const std::vector<int>& common) {
            if (static_cast<int>(pick.size()) == a) {
                // every b-subset of the common neighborhood completes one
                const std::size_t c = common.size();
                double combos = 1;
                for (int i = 0; i < b; ++i) combos *= static_cast<double>(c - i) / (i + 1);
                if (combos > 2e6)
                    throw codec_error("biclique enumeration explosion: " + std::to_string(c) +
                                      " common neighbors for target side " + std::to_string(b));
                std::vector<int> ls = pick;
                std::sort(ls.begin(), ls.end());
                std::vector<int> idx(b);
                std::iota(idx.begin(), idx.end(), 0);
                while (true) {
                    std::vector<int> rs;
                    rs.reserve(b);
                    for (int i : idx) rs.push_back(common[i]);
                    out.emplace_back(ls, std::move(rs));
                    int i = b - 1;
                    while (i >= 0 && idx[i] == static_cast<int>(c) - b + i) --i;
                    if (i < 0) break;
                    ++idx[i];
                    for (int j = i + 1; j < b; ++j) idx[j] = idx[j - 1] + 1;
                }
                return;
            }
            const int need = a - static_cast<int>(pick.size());
            // candidates: left vertices adjacent to something in common (all
            // lefts at the root call), compatible with the common set; if
            // too few remain the whole branch is dead
            std::vector<std::size_t> cand;
            if (pick.empty()) {
                for (std::size_t i = start; i < lefts.size(); ++i) cand.push_back(i);
            } else {
                for (int r : common)
                    for (std::size_t i : right_adj.at(r))
                        if (i >= start) cand.push_back(i);
                std::sort(cand.begin(), cand.end());
                cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
            }
            std::vector<std::pair<std::size_t, std::vector<int>>> viable;
            for (std::size_t i : cand) {
                std::vector<int> next_common;
                if (pick.empty()) {
                    next_common = adj[lefts[i]];
                } else {
                    std::set_intersection(common.begin(), common.end(), adj[lefts[i]].begin(),
                                          adj[lefts[i]].end(), std::back_inserter(next_common));
                }
                if (static_cast<int>(next_common.size()) >= b)
                    viable.emplace_back(i, std::move(next_common));
            }
            if (static_cast<int>(viable.size()) < need) return;
            for (std::size_t v = 0; v + need <= viable.size(); ++v) {
                pick.push_back(lefts[viable[v].first]);
                walk(viable[v].first + 1, viable[v].second);
                pick.pop_back();
            }
        };
    walk(0, {});
    std::sort(out.begin(), out.end());
    return out;
}

BlockStructure block_structure(const GraphCode& code) {
    const int side = kSideSlots * code.m;
    BlockStructure bs;
    bs.elements = enumerate_complete_bipartite_subgraphs(code.graph, side, side);
    if (bs.elements.size() != code.blocks.size())
        throw codec_error("enumerated " + std::to_string(bs.elements.size()) +
                          " blocks, expected " + std::to_string(code.blocks.size()));
    for (std::size_t i = 0; i < bs.elements.size(); ++i)
        for (std::size_t j = i + 1; j < bs.elements.size(); ++j) {
            std::vector<int> li, ri;
            std::set_intersection(bs.elements[i].first.begin(), bs.elements[i].first.end(),
                                  bs.elements[j].first.begin(), bs.elements[j].first.end(),
                                  std::back_inserter(li));
            std::set_intersection(bs.elements[i].second.begin(), bs.elements[i].second.end(),
                                  bs.elements[j].second.begin(), bs.elements[j].second.end(),
                                  std::back_inserter(ri));
            bool complete = true;
            for (int l : li)
                for (int r : ri)
                    if (!code.graph.has_edge(l, r)) complete = false;
            if (complete && static_cast<int>(li.size()) == code.m &&
                static_cast<int>(ri.size()) == code.m)
                bs.r1.emplace_back(static_cast<int>(i), static_cast<int>(j));
            if (complete && static_cast<int>(li.size()) == 2 * code.m &&
                static_cast<int>(ri.size()) == 2 * code.m)
                bs.r2.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
    return bs;
}

// ---- decoding ------------------------------------------------------------------

namespace {

struct DecodedRelations {
    std::vector<std::vector<int>> block_vertices;  // sorted vertex ids per block
    std::vector<std::set<int>> r1, r2;             // adjacency by block index
    std::size_t count = 0;
};

DecodedRelations relations_from_graph(const BipartiteGraph& g, int m) {
    const int side = kSideSlots * m;
    auto found = enumerate_complete_bipartite_subgraphs(g, side, side);
    if (found.empty()) throw codec_error("no 7m x 7m complete bipartite subgraph found");
    DecodedRelations rel;
    rel.count = found.size();
    rel.r1.resize(found.size());
    rel.r2.resize(found.size());
    std::set<int> covered;
    for (const auto& [l, r] : found) {
        std::vector<int> verts = l;
        verts.insert(verts.end(), r.begin(), r.end());
        std::sort(verts.begin(), verts.end());
        covered.insert(verts.begin(), verts.end());
        rel.block_vertices.push_back(std::move(verts));
    }
    if (covered.size() != g.left.size() + g.right.size())
        throw codec_error("blocks do not cover the graph; not a valid code");

    for (std::size_t i = 0; i < found.size(); ++i)
        for (std::size_t j = i + 1; j < found.size(); ++j) {
            std::vector<int> li, ri;
            std::set_intersection(found[i].first.begin(), found[i].first.end(),
                                  found[j].first.begin(), found[j].first.end(),
                                  std::back_inserter(li));
            std::set_intersection(found[i].second.begin(), found[i].second.end(),
                                  found[j].second.begin(), found[j].second.end(),
                                  std::back_inserter(ri));
            if (li.empty() && ri.empty()) continue;
            bool complete = true;
            for (int l : li)
                for (int r : ri)
                    if (!g.has_edge(l, r)) complete = false;
            if (complete && static_cast<int>(li.size()) == m &&
                static_cast<int>(ri.size()) == m) {
                rel.r1[i].insert(static_cast<int>(j));
                rel.r1[j].insert(static_cast<int>(i));
            } else if (complete && static_cast<int>(li.size()) == 2 * m &&
                       static_cast<int>(ri.size()) == 2 * m) {
                rel.r2[i].insert(static_cast<int>(j));
                rel.r2[j].insert(static_cast<int>(i));
            } else {
                throw codec_error("unexpected block intersection pattern (" +
                                  std::to_string(li.size()) + " x " + std::to_string(ri.size()) +
                                  ")");
            }
        }
    return rel;
}

}  // namespace

FinTree decode_tree_from_code(const BipartiteGraph& g, int m) {
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    structcore::validate_bipartite(g);
    DecodedRelations rel = relations_from_graph(g, m);
    const std::size_t n = rel.count;

    if (n == 1) {
        // single block: the one-node tree; still validate the graph shape
        FinTree t = FinTree::single();
        GraphCode rebuilt = build_code(t, m, Variant::paired);
        if (rebuilt.graph.left.size() != g.left.size() ||
            rebuilt.graph.right.size() != g.right.size() ||
            rebuilt.graph.edges.size() != g.edges.size())
            throw codec_error("graph does not match the code of the one-node tree");
        return t;
    }

    // root: only r1 edges, no r2; depth-1 leaves share this signature, and
    // swapping one for the root yields an isomorphic tree
    std::optional<std::size_t> root;
    for (std::size_t i = 0; i < n; ++i)
        if (rel.r2[i].empty() && !rel.r1[i].empty()) {
            root = i;
            break;
        }
    if (!root) throw codec_error("no root candidate block (every block has a deep link)");

    std::vector<int> level(n, -1), parent(n, -1);
    level[*root] = 0;
    std::vector<std::size_t> frontier = {*root};
    std::size_t placed = 1;
    int cur_level = 0;
    while (!frontier.empty()) {
        std::set<std::size_t> next;
        for (std::size_t b : frontier) {
            for (int nb : rel.r1[b])
                if (level[nb] < 0) next.insert(nb);
            for (int nb : rel.r2[b])
                if (level[nb] < 0) next.insert(nb);
        }
        ++cur_level;
        for (std::size_t x : next) {
            std::vector<std::size_t> parents;
            for (int nb : rel.r1[x])
                if (level[nb] == cur_level - 1) parents.push_back(nb);
            for (int nb : rel.r2[x])
                if (level[nb] == cur_level - 1) parents.push_back(nb);
            if (parents.size() != 1)
                throw codec_error("ambiguous parent for a level-" + std::to_string(cur_level) +
                                  " block (" + std::to_string(parents.size()) + " candidates)");
            // relation type must match the level: r1 into level 0, r2 deeper
            bool via_r1 = rel.r1[x].count(static_cast<int>(parents[0])) > 0;
            if ((cur_level == 1) != via_r1)
                throw codec_error("wrong intersection size between levels " +
                                  std::to_string(cur_level - 1) + " and " +
                                  std::to_string(cur_level));
            level[x] = cur_level;
            parent[x] = static_cast<int>(parents[0]);
            ++placed;
        }
        frontier.assign(next.begin(), next.end());
    }
    if (placed != n) throw codec_error("level induction did not reach every block");

    // regenerate the expected relations from the decoded shape and compare
    std::vector<std::set<int>> want_r1(n), want_r2(n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y) {
            bool fam_root = (level[x] == 0 && level[y] == 1) ||
                            (level[x] == 1 && level[y] == 0) ||
                            (level[x] == 1 && level[y] == 1);
            bool same_deep_family =
                (level[x] >= 1 && parent[y] == static_cast<int>(x) && level[y] >= 2) ||
                (level[y] >= 1 && parent[x] == static_cast<int>(y) && level[x] >= 2) ||
                (level[x] >= 2 && level[x] == level[y] && parent[x] == parent[y]);
            if (fam_root) {
                want_r1[x].insert(static_cast<int>(y));
                want_r1[y].insert(static_cast<int>(x));
            } else if (same_deep_family) {
                want_r2[x].insert(static_cast<int>(y));
                want_r2[y].insert(static_cast<int>(x));
            }
        }
    if (want_r1 != rel.r1 || want_r2 != rel.r2)
        throw codec_error("block relations do not match any tree code");

    // assemble the tree
    std::vector<std::vector<std::size_t>> kids(n);
    for (std::size_t i = 0; i < n; ++i)
        if (parent[i] >= 0) kids[parent[i]].push_back(i);
    std::vector<Node> nodes;
    std::function<void(std::size_t, const Node&)> emit = [&](std::size_t b, const Node& addr) {
        nodes.push_back(addr);
        int idx = 0;
        for (std::size_t c : kids[b]) {
            Node a = addr;
            a.push_back(idx++);
            emit(c, a);
        }
    };
    emit(*root, {});
    FinTree t = FinTree::from_nodes(nodes);

    // final guard: the decoded tree must regenerate a graph of identical size
    GraphCode rebuilt = build_code(t, m, Variant::paired);
    auto degree_multiset = [](const BipartiteGraph& bg) {
        std::map<int, int> deg;
        for (int v : bg.left) deg[v] = 0;
        for (int v : bg.right) deg[v] = 0;
        for (const auto& [l, r] : bg.edges) {
            ++deg[l];
            ++deg[r];
        }
        std::vector<int> ds;
        for (const auto& [v, d] : deg) ds.push_back(d);
        std::sort(ds.begin(), ds.end());
        return ds;
    };
    if (rebuilt.graph.left.size() != g.left.size() ||
        rebuilt.graph.right.size() != g.right.size() ||
        rebuilt.graph.edges.size() != g.edges.size() ||
        degree_multiset(rebuilt.graph) != degree_multiset(g))
        throw codec_error("graph does not match the regenerated code of the decoded tree");
    return t;
}

void validate_scales(const ScaleSequence& s) {
    if (s.values.empty()) throw std::invalid_argument("scale sequence is empty");
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        if (s.values[i] < 1) throw std::invalid_argument("scales must be positive");
        if (i > 0 && s.values[i] < ScaleSequence::kMinRatio * s.values[i - 1])
            throw std::invalid_argument("scale ratio below " +
                                        std::to_string(ScaleSequence::kMinRatio));
    }
}

BipartiteGraph build_multiscale(const FinTree& t, const ScaleSequence& scales, Variant variant) {
    validate_scales(scales);
    BipartiteGraph out;
    int offset = 0;
    for (int m : scales.values) {
        GraphCode code = build_code(t, m, variant);
        for (int v : code.graph.left) out.left.push_back(v + offset);
        for (int v : code.graph.right) out.right.push_back(v + offset);
        for (const auto& [l, r] : code.graph.edges) out.edges.emplace_back(l + offset, r + offset);
        offset += static_cast<int>(code.graph.left.size() + code.graph.right.size());
    }
    std::sort(out.left.begin(), out.left.end());
    std::sort(out.right.begin(), out.right.end());
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

namespace {

bool biclique_exists(const BipartiteGraph& g, int t) {
    std::map<int, std::vector<int>> adj;
    for (int l : g.left) adj[l];
    for (const auto& [l, r] : g.edges) adj[l].push_back(r);
    for (auto& [l, v] : adj) std::sort(v.begin(), v.end());
    std::vector<int> lefts;
    for (int l : g.left)
        if (static_cast<int>(adj[l].size()) >= t) lefts.push_back(l);
    std::stable_sort(lefts.begin(), lefts.end(),
                     [&](int x, int y) { return adj[x].size() < adj[y].size(); });
    std::map<int, std::size_t> order_of;
    for (std::size_t i = 0; i < lefts.size(); ++i) order_of[lefts[i]] = i;
    std::map<int, std::vector<std::size_t>> right_adj;
    for (int r : g.right) right_adj[r];
    for (const auto& [l, r] : g.edges) {
        auto it = order_of.find(l);
        if (it != order_of.end()) right_adj[r].push_back(it->second);
    }
    for (auto& [r, v] : right_adj) std::sort(v.begin(), v.end());
    std::function<bool(std::size_t, int, const std::vector<int>&)> walk =
        [&](std::size_t start, int picked, const std::vector<int>& common) {
            if (picked == t) return true;
            const int need = t - picked;
            std::vector<std::size_t> cand;
            if (picked == 0) {
                for (std::size_t i = start; i < lefts.size(); ++i) cand.push_back(i);
            } else {
                for (int r : common)
                    for (std::size_t i : right_adj.at(r))
                        if (i >= start) cand.push_back(i);
                std::sort(cand.begin(), cand.end());
                cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
            }
            std::vector<std::pair<std::size_t, std::vector<int>>> viable;
            for (std::size_t i : cand) {
                std::vector<int> next;
                if (picked == 0) {
                    next = adj[lefts[i]];
                } else {
                    std::set_intersection(common.begin(), common.end(), adj[lefts[i]].begin(),
                                          adj[lefts[i]].end(), std::back_inserter(next));
                }
                if (static_cast<int>(next.size()) >= t) viable.emplace_back(i, std::move(next));
            }
            if (static_cast<int>(viable.size()) < need) return false;
            for (std::size_t v = 0; v + need <= viable.size(); ++v)
                if (walk(viable[v].first + 1, picked + 1, viable[v].second)) return true;
            return false;
        };
    return walk(0, 0, {});
}

}  // namespace

int max_balanced_biclique(const BipartiteGraph& g) {
    int hi = static_cast<int>(std::min(g.left.size(), g.right.size()));
    int t = 0;
    while (t < hi && biclique_exists(g, t + 1)) ++t;
    return t;
}

FinTree decode_multiscale(const BipartiteGraph& g,
                          const std::optional<ScaleSequence>& scales_hint) {
    structcore::validate_bipartite(g);
    // reuse the component splitter from packing-land semantics: do it here
    std::map<int, int> dense;
    for (int v : g.left) dense.emplace(v, static_cast<int>(dense.size()));
    for (int v : g.right) dense.emplace(v, static_cast<int>(dense.size()));
    if (dense.empty()) throw codec_error("empty graph");
    std::vector<int> par(dense.size());
    std::iota(par.begin(), par.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (par[x] != x) {
            par[x] = par[par[x]];
            x = par[x];
        }
        return x;
    };
    for (const auto& [l, r] : g.edges) par[find(dense.at(l))] = find(dense.at(r));
    std::map<int, int> comp_index;
    for (const auto& [id, idx] : dense) comp_index.emplace(find(idx), comp_index.size());
    std::vector<BipartiteGraph> comps(comp_index.size());
    for (int v : g.left) comps[comp_index.at(find(dense.at(v)))].left.push_back(v);
    for (int v : g.right) comps[comp_index.at(find(dense.at(v)))].right.push_back(v);
    for (const auto& e : g.edges)
        comps[comp_index.at(find(dense.at(e.first)))].edges.push_back(e);

    std::vector<int> inferred_m;
    std::vector<FinTree> trees;
    for (const BipartiteGraph& comp : comps) {
        // minimum class degree is 7m; confirm with the balanced biclique
        std::map<int, int> deg;
        for (int v : comp.left) deg[v] = 0;
        for (int v : comp.right) deg[v] = 0;
        for (const auto& [l, r] : comp.edges) {
            ++deg[l];
            ++deg[r];
        }
        int mindeg = deg.empty() ? 0
                                 : std::min_element(deg.begin(), deg.end(),
                                                    [](const auto& a, const auto& b) {
                                                        return a.second < b.second;
                                                    })
                                       ->second;
        if (mindeg <= 0 || mindeg % kSideSlots != 0)
            throw codec_error("component degree floor " + std::to_string(mindeg) +
                              " is not a multiple of 7");
        int m = mindeg / kSideSlots;
        if (!biclique_exists(comp, kSideSlots * m) || biclique_exists(comp, kSideSlots * m + 1))
            throw codec_error("component's largest balanced biclique does not match its scale");
        inferred_m.push_back(m);
        trees.push_back(decode_tree_from_code(comp, m));
    }

    std::sort(inferred_m.begin(), inferred_m.end());
    if (std::adjacent_find(inferred_m.begin(), inferred_m.end()) != inferred_m.end())
        throw codec_error("two components decode at the same scale");
    if (scales_hint) {
        std::vector<int> want = scales_hint->values;
        std::sort(want.begin(), want.end());
        if (want != inferred_m) throw codec_error("inferred scales do not match the hint");
    }

    for (std::size_t i = 1; i < trees.size(); ++i)
        if (structcore::canonical_tree_code(trees[i]) !=
            structcore::canonical_tree_code(trees[0]))
            throw codec_error("levels decode to non-isomorphic trees");
    return trees[0];
}

}  // namespace graphcode
