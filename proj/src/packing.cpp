#include "packing.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace packing {

long long e_star(long long c) {
    if (c < 0) throw std::invalid_argument("e_star on negative argument");
    long long b = c / 2;
    return (c % 2 == 0) ? b * b : b * (b + 1);
}

namespace {

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
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

PackingStats graph_stats(const BipartiteGraph& g) {
    structcore::validate_bipartite(g);
    PackingStats s;
    s.v = static_cast<long long>(g.left.size() + g.right.size());
    s.e = static_cast<long long>(g.edges.size());
    if (s.v == 0) return s;
    std::map<int, int> dense;
    for (int v : g.left) dense.emplace(v, static_cast<int>(dense.size()));
    for (int v : g.right) dense.emplace(v, static_cast<int>(dense.size()));
    Dsu dsu(dense.size());
    for (const auto& [l, r] : g.edges) dsu.unite(dense.at(l), dense.at(r));
    std::map<int, int> roots;
    for (auto& [id, idx] : dense) ++roots[dsu.find(idx)];
    s.cc = static_cast<long long>(roots.size());
    s.k = s.v - s.cc;
    return s;
}

long long pair_bound_f(long long c, long long d) {
    if (c < 0 || d < 0) throw std::invalid_argument("pair_bound_f on negative argument");
    return e_star(c + 1) + e_star(d + 1);
}

AlmostCompleteReport is_almost_ell_complete(const BipartiteGraph& g, long long ell,
                                            SideBound mode,
                                            std::optional<long long> n_bound) {
    if (ell < 1) throw std::invalid_argument("ell must be positive");
    structcore::validate_bipartite(g);
    AlmostCompleteReport rep;
    rep.ell = ell;
    rep.left_size = static_cast<long long>(g.left.size());
    rep.right_size = static_cast<long long>(g.right.size());

    std::map<int, long long> valence;
    for (int v : g.left) valence[v] = 0;
    for (int v : g.right) valence[v] = 0;
    for (const auto& [l, r] : g.edges) {
        ++valence[l];
        ++valence[r];
    }
    rep.min_valence = valence.empty() ? 0
                                      : std::min_element(valence.begin(), valence.end(),
                                                         [](const auto& a, const auto& b) {
                                                             return a.second < b.second;
                                                         })
                                            ->second;

    auto side_ok = [&](long long m) {
        if (100 * m < 99 * ell) return false;
        if (mode == SideBound::symmetric) return 100 * m <= 101 * ell;
        return m <= ell;
    };
    bool sides = side_ok(rep.left_size) && side_ok(rep.right_size);
    bool valences = !valence.empty() && 10 * rep.min_valence >= 9 * ell;
    rep.verdict = sides && valences;

    if (n_bound) {
        long long v = rep.left_size + rep.right_size;
        long long e = static_cast<long long>(g.edges.size());
        rep.bounds_hold = (v <= 2 * ell + *n_bound) && (e >= ell * ell - *n_bound);
    }
    return rep;
}

std::vector<BipartiteGraph> connected_components(const BipartiteGraph& g) {
    std::map<int, int> dense;
    for (int v : g.left) dense.emplace(v, static_cast<int>(dense.size()));
    for (int v : g.right) dense.emplace(v, static_cast<int>(dense.size()));
    if (dense.empty()) return {};
    Dsu dsu(dense.size());
    for (const auto& [l, r] : g.edges) dsu.unite(dense.at(l), dense.at(r));
    std::map<int, int> root_index;
    for (const auto& [id, idx] : dense) {
        int r = dsu.find(idx);
        root_index.emplace(r, static_cast<int>(root_index.size()));
    }
    std::vector<BipartiteGraph> out(root_index.size());
    for (int v : g.left) out[root_index.at(dsu.find(dense.at(v)))].left.push_back(v);
    for (int v : g.right) out[root_index.at(dsu.find(dense.at(v)))].right.push_back(v);
    for (const auto& e : g.edges)
        out[root_index.at(dsu.find(dense.at(e.first)))].edges.push_back(e);
    return out;
}

ExtractResult extract_dense_connected(const BipartiteGraph& g, long long ell, long long w) {
    if (!(4 * ell > w * w)) throw std::invalid_argument("require ell > w^2/4");
    PackingStats s = graph_stats(g);
    ExtractResult res;
    if (s.k > 2 * ell + w) {
        res.reason = "k(A) exceeds 2*ell + W";
        return res;
    }
    if (s.e < ell * ell) {
        res.reason = "fewer than ell^2 edges";
        return res;
    }
    for (const BipartiteGraph& comp : connected_components(g)) {
        long long v = static_cast<long long>(comp.left.size() + comp.right.size());
        long long e = static_cast<long long>(comp.edges.size());
        if (4 * e >= 4 * ell * ell - w * w && v <= 2 * ell + w) {
            res.subgraph = comp;
            return res;
        }
    }
    res.reason = "no connected component meets the bound";
    return res;
}

bool side_bound_violation_exists(long long ell, long long n_bound) {
    // A side of size ell + k (k > 0) is realizable under the hypotheses iff
    // the best companion side m1 = ell + N - k gives m1*(ell+k) >= ell^2 - N.
    // That product is concave in k, so over k >= k0 its maximum sits at
    // max(k0, N/2) or the next integer.  Sides below the band decrease
    // monotonically, so k0 alone decides.
    long long k0 = ell / 100 + 1;  // first forbidden deviation
    auto above = [&](long long k) {
        if (k < k0 || k > ell + n_bound - 1) return false;
        return (ell + n_bound - k) * (ell + k) >= ell * ell - n_bound;
    };
    for (long long k : {k0, std::max(k0, n_bound / 2), std::max(k0, n_bound / 2 + 1)})
        if (above(k)) return true;
    long long k = k0;  // below the band: product strictly decreasing in k
    if (k < ell && (ell - k) * (ell + n_bound + k) >= ell * ell - n_bound) return true;
    return false;
}

std::optional<long long> min_ell_for_side_bounds(long long n_bound, long long ell_cap) {
    for (long long ell = 1; ell <= ell_cap; ++ell)
        if (!side_bound_violation_exists(ell, n_bound)) return ell;
    return std::nullopt;
}

std::optional<long long> stable_ell_for_side_bounds(long long n_bound, long long ell_cap) {
    std::optional<long long> stable;
    for (long long ell = ell_cap; ell >= 1; --ell) {
        if (side_bound_violation_exists(ell, n_bound)) break;
        stable = ell;
    }
    return stable;
}

std::optional<BipartiteGraph> low_valence_witness(long long ell, long long n_bound) {
    if (n_bound < 1) return std::nullopt;
    // complete ell x ell plus one isolated left vertex:
    // v = 2*ell + 1 <= 2*ell + N, e = ell^2 >= ell^2 - N, min valence 0
    int a = static_cast<int>(ell);
    BipartiteGraph g = structcore::complete_bipartite(a + 1, a);
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : g.edges)
        if (e.first != a) edges.push_back(e);  // drop all edges at one left vertex
    g.edges = std::move(edges);
    return g;
}

}  // namespace packing
