#include "exhaustive.hpp"

#include <algorithm>
#include <numeric>

namespace exhaustive {

using structcore::BipartiteGraph;

void for_each_bipartite_upto(int max_vertices,
                             const std::function<void(const BipartiteGraph&)>& fn) {
    for (int v = 0; v <= max_vertices; ++v) {
        for (int a = 0; a <= v; ++a) {
            int b = v - a;
            std::vector<std::pair<int, int>> all_edges;
            for (int i = 0; i < a; ++i)
                for (int j = 0; j < b; ++j) all_edges.emplace_back(i, a + j);
            const std::size_t cells = all_edges.size();
            for (std::uint64_t mask = 0; mask < (1ull << cells); ++mask) {
                BipartiteGraph g;
                for (int i = 0; i < a; ++i) g.left.push_back(i);
                for (int j = 0; j < b; ++j) g.right.push_back(a + j);
                for (std::size_t e = 0; e < cells; ++e)
                    if (mask & (1ull << e)) g.edges.push_back(all_edges[e]);
                fn(g);
            }
        }
    }
}

MaxEdgeCheck max_edges_upto(int c) {
    MaxEdgeCheck out;
    for_each_bipartite_upto(c, [&](const BipartiteGraph& g) {
        long long e = static_cast<long long>(g.edges.size());
        if (e > out.max_edges) {
            out.max_edges = e;
            out.equality_only_complete_balanced_full = true;
        }
        if (e == out.max_edges && e > 0) {
            long long a = static_cast<long long>(g.left.size());
            long long b = static_cast<long long>(g.right.size());
            bool full = (a + b == c);
            bool complete = (e == a * b);
            bool balanced = std::llabs(a - b) <= 1;
            if (!(full && complete && balanced))
                out.equality_only_complete_balanced_full = false;
        }
    });
    return out;
}

namespace {

bool no_isolated(const BipartiteGraph& g) {
    std::vector<int> touched;
    for (const auto& [l, r] : g.edges) {
        touched.push_back(l);
        touched.push_back(r);
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    return touched.size() == g.left.size() + g.right.size();
}

}  // namespace

long long two_part_max_edges(int c, int d) {
    const int budget = c + d + 2;
    // best[v][k] = max edges of one graph with exactly v non-isolated
    // vertices and statistic k
    std::vector<std::vector<long long>> best(budget + 1,
                                             std::vector<long long>(budget + 1, -1));
    best[0][0] = 0;  // the null graph
    for_each_bipartite_upto(budget, [&](const BipartiteGraph& g) {
        if (g.edges.empty()) return;
        if (!no_isolated(g)) return;
        packing::PackingStats s = packing::graph_stats(g);
        if (s.k > budget) return;
        long long& slot = best[s.v][s.k];
        slot = std::max(slot, s.e);
    });
    long long result = 0;
    for (int v1 = 0; v1 <= budget; ++v1)
        for (int k1 = 0; k1 <= std::min(v1, c); ++k1) {
            if (best[v1][k1] < 0) continue;
            for (int v2 = 0; v1 + v2 <= budget; ++v2)
                for (int k2 = 0; k2 <= std::min(v2, d); ++k2) {
                    if (best[v2][k2] < 0) continue;
                    result = std::max(result, best[v1][k1] + best[v2][k2]);
                }
        }
    return result;
}

long long max_edges_with_k_bound(int k_bound, int max_vertices) {
    long long result = 0;
    for_each_bipartite_upto(max_vertices, [&](const BipartiteGraph& g) {
        if (!no_isolated(g)) return;
        packing::PackingStats s = packing::graph_stats(g);
        if (s.k <= k_bound) result = std::max(result, s.e);
    });
    return result;
}

std::optional<std::vector<std::pair<int, int>>> brute_force_bipartite_iso(
    const BipartiteGraph& a, const BipartiteGraph& b) {
    if (a.left.size() != b.left.size() || a.right.size() != b.right.size() ||
        a.edges.size() != b.edges.size())
        return std::nullopt;
    std::vector<int> lp(b.left.begin(), b.left.end());
    std::sort(lp.begin(), lp.end());
    do {
        std::vector<int> rp(b.right.begin(), b.right.end());
        std::sort(rp.begin(), rp.end());
        do {
            bool ok = true;
            for (std::size_t i = 0; i < a.left.size() && ok; ++i)
                for (std::size_t j = 0; j < a.right.size() && ok; ++j)
                    if (a.has_edge(a.left[i], a.right[j]) != b.has_edge(lp[i], rp[j]))
                        ok = false;
            if (ok) {
                std::vector<std::pair<int, int>> out;
                for (std::size_t i = 0; i < a.left.size(); ++i)
                    out.emplace_back(a.left[i], lp[i]);
                for (std::size_t j = 0; j < a.right.size(); ++j)
                    out.emplace_back(a.right[j], rp[j]);
                std::sort(out.begin(), out.end());
                return out;
            }
        } while (std::next_permutation(rp.begin(), rp.end()));
    } while (std::next_permutation(lp.begin(), lp.end()));
    return std::nullopt;
}

bool brute_force_structure_iso(const structcore::RelStructure& a,
                               const structcore::RelStructure& b) {
    if (!structcore::same_signature(a, b)) return false;
    if (a.universe != b.universe) return false;
    std::vector<int> perm(a.universe);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (const auto& [name, rel] : a.relations) {
            std::vector<std::vector<int>> mapped;
            for (const auto& t : rel.tuples) {
                std::vector<int> img;
                for (int v : t) img.push_back(perm[v]);
                mapped.push_back(std::move(img));
            }
            std::sort(mapped.begin(), mapped.end());
            const structcore::Relation* rb = b.find(name);
            if (!rb || mapped != rb->tuples) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

std::vector<int> naive_closure_classes(int n, const std::vector<std::pair<int, int>>& links) {
    // repeated relational squaring of the reflexive-symmetric closure
    std::vector<std::vector<char>> rel(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) rel[i][i] = 1;
    for (const auto& [x, y] : links) rel[x][y] = rel[y][x] = 1;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (rel[i][j]) continue;
                for (int k = 0; k < n; ++k)
                    if (rel[i][k] && rel[k][j]) {
                        rel[i][j] = 1;
                        changed = true;
                        break;
                    }
            }
    }
    std::vector<int> cls(n, -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        if (cls[i] >= 0) continue;
        cls[i] = next;
        for (int j = 0; j < n; ++j)
            if (rel[i][j]) cls[j] = next;
        ++next;
    }
    return cls;
}

std::vector<std::pair<std::vector<int>, std::vector<int>>> brute_force_bicliques(
    const BipartiteGraph& g, int a, int b) {
    std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
    const int nl = static_cast<int>(g.left.size());
    std::vector<int> pick;
    std::function<void(int)> walk = [&](int start) {
        if (static_cast<int>(pick.size()) == a) {
            // common neighborhood of the picked left set
            std::vector<int> common;
            for (int r : g.right) {
                bool all = true;
                for (int l : pick)
                    if (!g.has_edge(l, r)) {
                        all = false;
                        break;
                    }
                if (all) common.push_back(r);
            }
            if (static_cast<int>(common.size()) < b) return;
            // every b-subset of the common neighborhood
            std::vector<int> idx(b);
            std::iota(idx.begin(), idx.end(), 0);
            while (true) {
                std::vector<int> rs;
                for (int i : idx) rs.push_back(common[i]);
                out.emplace_back(pick, rs);
                int i = b - 1;
                while (i >= 0 && idx[i] == static_cast<int>(common.size()) - b + i) --i;
                if (i < 0) break;
                ++idx[i];
                for (int j = i + 1; j < b; ++j) idx[j] = idx[j - 1] + 1;
            }
            return;
        }
        for (int i = start; i < nl; ++i) {
            pick.push_back(g.left[i]);
            walk(i + 1);
            pick.pop_back();
        }
    };
    walk(0);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace exhaustive
