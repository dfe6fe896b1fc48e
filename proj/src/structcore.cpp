#include "structcore.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace structcore {

std::string node_to_string(const Node& n) {
    std::ostringstream os;
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (i) os << '.';
        os << n[i];
    }
    return os.str();
}

Node node_from_string(const std::string& s) {
    Node out;
    if (s.empty()) return out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t dot = s.find('.', pos);
        std::string part = s.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
        if (part.empty()) throw codec_error("bad node address: '" + s + "'");
        out.push_back(std::stoi(part));
        if (dot == std::string::npos) break;
        pos = dot + 1;
    }
    return out;
}

FinTree FinTree::single() {
    FinTree t;
    t.nodes.push_back({});
    return t;
}

FinTree FinTree::from_nodes(std::vector<Node> ns) {
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    FinTree t;
    t.nodes = std::move(ns);
    validate_tree(t);
    return t;
}

bool FinTree::contains(const Node& n) const {
    return std::binary_search(nodes.begin(), nodes.end(), n);
}

void validate_tree(const FinTree& t) {
    if (t.nodes.empty()) throw codec_error("tree is empty (missing root)");
    if (!std::is_sorted(t.nodes.begin(), t.nodes.end()))
        throw codec_error("tree nodes are not sorted");
    if (std::adjacent_find(t.nodes.begin(), t.nodes.end()) != t.nodes.end())
        throw codec_error("duplicate tree node");
    if (!t.nodes.front().empty()) throw codec_error("tree does not contain the root");
    for (const Node& n : t.nodes) {
        for (int v : n)
            if (v < 0) throw codec_error("negative entry in node address");
        if (!n.empty()) {
            Node parent(n.begin(), n.end() - 1);
            if (!t.contains(parent))
                throw codec_error("tree is not prefix-closed at " + node_to_string(n));
        }
    }
}

bool is_valid_tree(const FinTree& t) {
    try {
        validate_tree(t);
        return true;
    } catch (const codec_error&) {
        return false;
    }
}

std::map<Node, std::vector<Node>> child_map(const FinTree& t) {
    std::map<Node, std::vector<Node>> m;
    for (const Node& n : t.nodes) m[n];  // ensure every node is a key
    for (const Node& n : t.nodes) {
        if (n.empty()) continue;
        Node parent(n.begin(), n.end() - 1);
        m[parent].push_back(n);
    }
    return m;
}

std::vector<Node> children_of(const FinTree& t, const Node& n) {
    std::vector<Node> out;
    for (const Node& c : t.nodes)
        if (c.size() == n.size() + 1 && std::equal(n.begin(), n.end(), c.begin()))
            out.push_back(c);
    return out;
}

int tree_depth(const FinTree& t) {
    std::size_t d = 0;
    for (const Node& n : t.nodes) d = std::max(d, n.size());
    return static_cast<int>(d);
}

std::map<Node, int> node_heights(const FinTree& t) {
    std::map<Node, int> h;
    // Sorted order puts descendants after ancestors; walk backwards.
    for (auto it = t.nodes.rbegin(); it != t.nodes.rend(); ++it) {
        const Node& n = *it;
        if (!h.count(n)) h[n] = 0;
        if (!n.empty()) {
            Node parent(n.begin(), n.end() - 1);
            int cand = h[n] + 1;
            auto pit = h.find(parent);
            if (pit == h.end() || pit->second < cand) h[parent] = cand;
        }
    }
    return h;
}

ColoredTree ColoredTree::plain(FinTree t) {
    ColoredTree ct;
    ct.tree = std::move(t);
    return ct;
}

void validate_colored_tree(const ColoredTree& ct) {
    validate_tree(ct.tree);
    for (const auto& [node, cols] : ct.colors) {
        if (!ct.tree.contains(node))
            throw codec_error("color attached to non-node " + node_to_string(node));
        if (!std::is_sorted(cols.begin(), cols.end()) ||
            std::adjacent_find(cols.begin(), cols.end()) != cols.end())
            throw codec_error("color set not sorted/unique at " + node_to_string(node));
        for (int c : cols)
            if (c < 0) throw codec_error("negative color index");
    }
}

BipartiteGraph BipartiteGraph::make(std::vector<int> l, std::vector<int> r,
                                    std::vector<std::pair<int, int>> e) {
    std::sort(l.begin(), l.end());
    std::sort(r.begin(), r.end());
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    BipartiteGraph g;
    g.left = std::move(l);
    g.right = std::move(r);
    g.edges = std::move(e);
    validate_bipartite(g);
    return g;
}

bool BipartiteGraph::has_edge(int l, int r) const {
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(l, r));
}

void validate_bipartite(const BipartiteGraph& g) {
    if (!std::is_sorted(g.left.begin(), g.left.end()) ||
        !std::is_sorted(g.right.begin(), g.right.end()))
        throw codec_error("vertex lists not sorted");
    if (std::adjacent_find(g.left.begin(), g.left.end()) != g.left.end() ||
        std::adjacent_find(g.right.begin(), g.right.end()) != g.right.end())
        throw codec_error("duplicate vertex id");
    std::vector<int> both;
    std::set_intersection(g.left.begin(), g.left.end(), g.right.begin(), g.right.end(),
                          std::back_inserter(both));
    if (!both.empty()) throw codec_error("left and right sides intersect");
    for (const auto& [l, r] : g.edges) {
        if (!std::binary_search(g.left.begin(), g.left.end(), l) ||
            !std::binary_search(g.right.begin(), g.right.end(), r))
            throw codec_error("edge endpoint is not a declared vertex");
    }
}

BipartiteGraph complete_bipartite(int a, int b) {
    BipartiteGraph g;
    for (int i = 0; i < a; ++i) g.left.push_back(i);
    for (int j = 0; j < b; ++j) g.right.push_back(a + j);
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) g.edges.emplace_back(i, a + j);
    return g;
}

const Relation* RelStructure::find(const std::string& name) const {
    for (const auto& [n, rel] : relations)
        if (n == name) return &rel;
    return nullptr;
}

bool RelStructure::holds(const std::string& name, const std::vector<int>& tuple) const {
    const Relation* r = find(name);
    if (!r) return false;
    return std::binary_search(r->tuples.begin(), r->tuples.end(), tuple);
}

void validate_structure(const RelStructure& m) {
    if (m.universe < 0) throw codec_error("negative universe size");
    if (!std::is_sorted(m.relations.begin(), m.relations.end(),
                        [](const auto& a, const auto& b) { return a.first < b.first; }))
        throw codec_error("relations not sorted by name");
    for (const auto& [name, rel] : m.relations) {
        if (rel.arity < 0) throw codec_error("negative arity for " + name);
        for (const auto& t : rel.tuples) {
            if (static_cast<int>(t.size()) != rel.arity)
                throw codec_error("tuple length mismatch in " + name);
            for (int v : t)
                if (v < 0 || v >= m.universe)
                    throw codec_error("tuple entry out of universe in " + name);
        }
        if (!std::is_sorted(rel.tuples.begin(), rel.tuples.end()))
            throw codec_error("tuples not sorted in " + name);
    }
}

bool same_signature(const RelStructure& a, const RelStructure& b) {
    if (a.relations.size() != b.relations.size()) return false;
    for (std::size_t i = 0; i < a.relations.size(); ++i) {
        if (a.relations[i].first != b.relations[i].first) return false;
        if (a.relations[i].second.arity != b.relations[i].second.arity) return false;
    }
    return true;
}

bool partial_iso_valid(const RelStructure& a, const RelStructure& b,
                       const std::vector<std::pair<int, int>>& pairs) {
    // functional + injective
    std::map<int, int> fwd, bwd;
    for (const auto& [x, y] : pairs) {
        auto f = fwd.find(x);
        if (f != fwd.end() && f->second != y) return false;
        auto g = bwd.find(y);
        if (g != bwd.end() && g->second != x) return false;
        fwd[x] = y;
        bwd[y] = x;
    }
    // quantifier-free type preservation over the domain
    std::vector<int> dom;
    for (const auto& [x, _] : fwd) dom.push_back(x);
    for (std::size_t ri = 0; ri < a.relations.size(); ++ri) {
        const auto& name = a.relations[ri].first;
        int arity = a.relations[ri].second.arity;
        std::vector<int> tup(arity, 0), img(arity, 0);
        std::function<bool(int)> walk = [&](int pos) {
            if (pos == arity) {
                bool ha = a.holds(name, tup);
                bool hb = b.holds(name, img);
                return ha == hb;
            }
            for (int x : dom) {
                tup[pos] = x;
                img[pos] = fwd[x];
                if (!walk(pos + 1)) return false;
            }
            return true;
        };
        if (!walk(0)) return false;
    }
    return true;
}

// ---- canonical forms -------------------------------------------------------

namespace {

// AHU-style: code(node) = 0 · [color tokens] · sorted child codes · 1.
std::vector<int> canonical_code_rec(const std::map<Node, std::vector<Node>>& kids,
                                    const std::map<Node, std::vector<int>>* colors,
                                    const Node& n) {
    std::vector<std::vector<int>> child_codes;
    auto it = kids.find(n);
    if (it != kids.end())
        for (const Node& c : it->second)
            child_codes.push_back(canonical_code_rec(kids, colors, c));
    std::sort(child_codes.begin(), child_codes.end());
    std::vector<int> code;
    code.push_back(0);
    if (colors) {
        auto cit = colors->find(n);
        if (cit != colors->end())
            for (int c : cit->second) code.push_back(c + 2);
    }
    for (const auto& cc : child_codes) code.insert(code.end(), cc.begin(), cc.end());
    code.push_back(1);
    return code;
}

}  // namespace

std::vector<int> canonical_tree_code(const FinTree& t) {
    validate_tree(t);
    auto kids = child_map(t);
    return canonical_code_rec(kids, nullptr, {});
}

std::vector<int> canonical_colored_code(const ColoredTree& ct) {
    validate_colored_tree(ct);
    auto kids = child_map(ct.tree);
    std::map<Node, std::vector<int>> cols;
    for (const auto& [n, cs] : ct.colors)
        if (!cs.empty()) cols[n] = cs;
    return canonical_code_rec(kids, &cols, {});
}

// ---- tree isomorphism -------------------------------------------------------

namespace {

// Pair up subtrees with equal canonical codes, recursively.
void build_bijection(const std::map<Node, std::vector<Node>>& kids_a,
                     const std::map<Node, std::vector<Node>>& kids_b,
                     const std::map<Node, std::vector<int>>& code_a,
                     const std::map<Node, std::vector<int>>& code_b, const Node& na,
                     const Node& nb, std::vector<std::pair<Node, Node>>& out) {
    out.emplace_back(na, nb);
    std::vector<Node> ca = kids_a.at(na), cb = kids_b.at(nb);
    auto by_code_a = [&](const Node& x, const Node& y) { return code_a.at(x) < code_a.at(y); };
    auto by_code_b = [&](const Node& x, const Node& y) { return code_b.at(x) < code_b.at(y); };
    std::stable_sort(ca.begin(), ca.end(), by_code_a);
    std::stable_sort(cb.begin(), cb.end(), by_code_b);
    for (std::size_t i = 0; i < ca.size(); ++i)
        build_bijection(kids_a, kids_b, code_a, code_b, ca[i], cb[i], out);
}

std::map<Node, std::vector<int>> per_node_codes(const FinTree& t,
                                                const std::map<Node, std::vector<int>>* colors) {
    auto kids = child_map(t);
    std::map<Node, std::vector<int>> out;
    // Compute bottom-up to avoid recomputation.
    std::function<std::vector<int>(const Node&)> rec = [&](const Node& n) {
        std::vector<std::vector<int>> child_codes;
        for (const Node& c : kids.at(n)) child_codes.push_back(rec(c));
        std::sort(child_codes.begin(), child_codes.end());
        std::vector<int> code;
        code.push_back(0);
        if (colors) {
            auto cit = colors->find(n);
            if (cit != colors->end())
                for (int c : cit->second) code.push_back(c + 2);
        }
        for (const auto& cc : child_codes) code.insert(code.end(), cc.begin(), cc.end());
        code.push_back(1);
        out[n] = code;
        return code;
    };
    rec({});
    return out;
}

}  // namespace

std::optional<std::vector<std::pair<Node, Node>>> colored_tree_iso(const ColoredTree& a,
                                                                   const ColoredTree& b) {
    validate_colored_tree(a);
    validate_colored_tree(b);
    std::map<Node, std::vector<int>> cols_a, cols_b;
    for (const auto& [n, cs] : a.colors)
        if (!cs.empty()) cols_a[n] = cs;
    for (const auto& [n, cs] : b.colors)
        if (!cs.empty()) cols_b[n] = cs;
    auto code_a = per_node_codes(a.tree, &cols_a);
    auto code_b = per_node_codes(b.tree, &cols_b);
    if (code_a.at({}) != code_b.at({})) return std::nullopt;
    std::vector<std::pair<Node, Node>> out;
    build_bijection(child_map(a.tree), child_map(b.tree), code_a, code_b, {}, {}, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<std::vector<std::pair<Node, Node>>> tree_iso(const FinTree& a, const FinTree& b) {
    return colored_tree_iso(ColoredTree::plain(a), ColoredTree::plain(b));
}

// ---- bipartite isomorphism ---------------------------------------------------

namespace {

struct RefinedGraph {
    std::vector<int> ids;                    // all vertices, left then right
    std::vector<std::vector<int>> adj;       // by dense index
    std::vector<int> color;                  // refined color classes
    std::unordered_map<int, int> dense;      // id -> dense index
    std::size_t nleft = 0;
};

RefinedGraph prepare(const BipartiteGraph& g) {
    RefinedGraph r;
    r.ids = g.left;
    r.ids.insert(r.ids.end(), g.right.begin(), g.right.end());
    r.nleft = g.left.size();
    for (std::size_t i = 0; i < r.ids.size(); ++i) r.dense[r.ids[i]] = static_cast<int>(i);
    r.adj.resize(r.ids.size());
    for (const auto& [l, rt] : g.edges) {
        int a = r.dense.at(l), b = r.dense.at(rt);
        r.adj[a].push_back(b);
        r.adj[b].push_back(a);
    }
    for (auto& v : r.adj) std::sort(v.begin(), v.end());
    r.color.assign(r.ids.size(), 0);
    for (std::size_t i = r.nleft; i < r.ids.size(); ++i) r.color[i] = 1;
    return r;
}

// One refinement round; returns true if colors changed.  Signatures are
// compared across both graphs at once so color ids stay aligned.
bool refine_round(RefinedGraph& a, RefinedGraph& b) {
    using Sig = std::pair<int, std::vector<int>>;
    auto sigs_of = [](const RefinedGraph& g) {
        std::vector<Sig> s(g.ids.size());
        for (std::size_t i = 0; i < g.ids.size(); ++i) {
            std::vector<int> nb;
            for (int j : g.adj[i]) nb.push_back(g.color[j]);
            std::sort(nb.begin(), nb.end());
            s[i] = {g.color[i], std::move(nb)};
        }
        return s;
    };
    auto sa = sigs_of(a), sb = sigs_of(b);
    std::map<Sig, int> table;
    for (const auto& s : sa) table.emplace(s, 0);
    for (const auto& s : sb) table.emplace(s, 0);
    int next = 0;
    for (auto& [sig, id] : table) id = next++;
    bool changed = false;
    for (std::size_t i = 0; i < sa.size(); ++i) {
        int nc = table.at(sa[i]);
        if (nc != a.color[i]) changed = true;
        a.color[i] = nc;
    }
    for (std::size_t i = 0; i < sb.size(); ++i) {
        int nc = table.at(sb[i]);
        if (nc != b.color[i]) changed = true;
        b.color[i] = nc;
    }
    return changed;
}

bool color_histograms_match(const RefinedGraph& a, const RefinedGraph& b) {
    std::map<int, int> ha, hb;
    for (int c : a.color) ++ha[c];
    for (int c : b.color) ++hb[c];
    return ha == hb;
}

}  // namespace

std::optional<std::vector<std::pair<int, int>>> bipartite_iso(const BipartiteGraph& ga,
                                                              const BipartiteGraph& gb) {
    validate_bipartite(ga);
    validate_bipartite(gb);
    if (ga.left.size() != gb.left.size() || ga.right.size() != gb.right.size() ||
        ga.edges.size() != gb.edges.size())
        return std::nullopt;
    RefinedGraph a = prepare(ga), b = prepare(gb);
    for (int round = 0; round < static_cast<int>(a.ids.size()) + 1; ++round) {
        if (!color_histograms_match(a, b)) return std::nullopt;
        if (!refine_round(a, b)) break;
    }
    if (!color_histograms_match(a, b)) return std::nullopt;

    const std::size_t n = a.ids.size();
    // candidates per color in b
    std::map<int, std::vector<int>> b_by_color;
    for (std::size_t i = 0; i < n; ++i) b_by_color[b.color[i]].push_back(static_cast<int>(i));
    // most-constrained-first static order
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        std::size_t cx = b_by_color[a.color[x]].size(), cy = b_by_color[a.color[y]].size();
        if (cx != cy) return cx < cy;
        return x < y;
    });

    std::vector<int> match(n, -1);
    std::vector<char> used(n, 0);
    std::function<bool(std::size_t)> dfs = [&](std::size_t pos) {
        if (pos == n) return true;
        int v = order[pos];
        for (int w : b_by_color[a.color[v]]) {
            if (used[w]) continue;
            bool ok = true;
            // adjacency must agree with every vertex already mapped
            for (int u : a.adj[v]) {
                if (match[u] >= 0 &&
                    !std::binary_search(b.adj[w].begin(), b.adj[w].end(), match[u])) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                // non-adjacency: mapped neighbors of w must all be images of
                // neighbors of v; degree equality makes the counts match
                std::size_t mapped_nb_v = 0;
                for (int u : a.adj[v])
                    if (match[u] >= 0) ++mapped_nb_v;
                std::size_t mapped_nb_w = 0;
                for (int u : b.adj[w])
                    if (used[u]) ++mapped_nb_w;
                if (mapped_nb_v != mapped_nb_w) ok = false;
            }
            if (!ok) continue;
            match[v] = w;
            used[w] = 1;
            if (dfs(pos + 1)) return true;
            match[v] = -1;
            used[w] = 0;
        }
        return false;
    };
    if (!dfs(0)) return std::nullopt;
    std::vector<std::pair<int, int>> out;
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(a.ids[i], b.ids[match[i]]);
    std::sort(out.begin(), out.end());
    return out;
}

// ---- back-and-forth game -----------------------------------------------------

namespace {

struct GameMemo {
    std::map<std::pair<std::vector<std::pair<int, int>>, int>, bool> table;
};

bool pairs_extendable(const RelStructure& a, const RelStructure& b,
                      const std::vector<std::pair<int, int>>& pairs, int x, int y) {
    // functional/injective, then atomic agreement on tuples that touch the
    // new pair; older tuples were checked when their pairs were added
    for (const auto& [p, q] : pairs) {
        if (p == x && q == y) return true;
        if (p == x || q == y) return false;
    }
    std::vector<std::pair<int, int>> all = pairs;
    all.emplace_back(x, y);
    const int n = static_cast<int>(all.size());
    for (const auto& [name, rel] : a.relations) {
        const int r = rel.arity;
        if (r == 0) continue;
        std::vector<int> idx(r, 0), ta(r, 0), tb(r, 0);
        // first occurrence of the new pair at position p: positions before p
        // avoid it, positions after range over everything
        for (int p = 0; p < r; ++p) {
            std::function<bool(int)> walk = [&](int pos) {
                if (pos == r) {
                    for (int t = 0; t < r; ++t) {
                        ta[t] = all[idx[t]].first;
                        tb[t] = all[idx[t]].second;
                    }
                    return a.holds(name, ta) == b.holds(name, tb);
                }
                int lo = (pos == p) ? n - 1 : 0;
                int hi = (pos < p) ? n - 1 : n;
                for (int i = lo; i < hi; ++i) {
                    idx[pos] = i;
                    if (!walk(pos + 1)) return false;
                }
                return true;
            };
            if (!walk(0)) return false;
        }
    }
    return true;
}

bool duplicator_wins(const RelStructure& a, const RelStructure& b,
                     std::vector<std::pair<int, int>> pairs, int rounds, GameMemo& memo) {
    if (rounds == 0) return true;
    std::sort(pairs.begin(), pairs.end());
    auto key = std::make_pair(pairs, rounds);
    auto it = memo.table.find(key);
    if (it != memo.table.end()) return it->second;
    bool win = true;
    // spoiler plays in A
    for (int x = 0; x < a.universe && win; ++x) {
        bool answered = false;
        for (int y = 0; y < b.universe && !answered; ++y) {
            if (!pairs_extendable(a, b, pairs, x, y)) continue;
            auto ext = pairs;
            ext.emplace_back(x, y);
            std::sort(ext.begin(), ext.end());
            ext.erase(std::unique(ext.begin(), ext.end()), ext.end());
            if (duplicator_wins(a, b, ext, rounds - 1, memo)) answered = true;
        }
        if (!answered) win = false;
    }
    // spoiler plays in B
    for (int y = 0; y < b.universe && win; ++y) {
        bool answered = false;
        for (int x = 0; x < a.universe && !answered; ++x) {
            if (!pairs_extendable(a, b, pairs, x, y)) continue;
            auto ext = pairs;
            ext.emplace_back(x, y);
            std::sort(ext.begin(), ext.end());
            ext.erase(std::unique(ext.begin(), ext.end()), ext.end());
            if (duplicator_wins(a, b, ext, rounds - 1, memo)) answered = true;
        }
        if (!answered) win = false;
    }
    memo.table[key] = win;
    return win;
}

}  // namespace

bool ef_equivalent(const RelStructure& a, const RelStructure& b, int k) {
    validate_structure(a);
    validate_structure(b);
    if (!same_signature(a, b)) throw std::invalid_argument("signature mismatch");
    if (k < 0) throw std::invalid_argument("negative round count");
    if (a.universe == 0 || b.universe == 0) return a.universe == b.universe || k == 0;
    GameMemo memo;
    return duplicator_wins(a, b, {}, k, memo);
}

}  // namespace structcore
