#include "generators.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace generators {

using structcore::FinTree;
using structcore::Node;

namespace {

FinTree tree_from_parents(const std::vector<int>& parent) {
    // parent[i] < i is the parent of node i+1; node 0 is the root.
    std::vector<Node> addr(parent.size() + 1);
    std::vector<int> child_count(parent.size() + 1, 0);
    addr[0] = {};
    for (std::size_t i = 0; i < parent.size(); ++i) {
        int p = parent[i];
        Node a = addr[p];
        a.push_back(child_count[p]++);
        addr[i + 1] = std::move(a);
    }
    return FinTree::from_nodes(addr);
}

}  // namespace

FinTree random_tree(int n, Rng& rng) {
    if (n <= 1) return FinTree::single();
    std::vector<int> parent(n - 1);
    for (int i = 0; i < n - 1; ++i) parent[i] = static_cast<int>(draw(rng, i + 1));
    return tree_from_parents(parent);
}

std::vector<FinTree> all_trees_upto(int max_nodes) {
    std::vector<FinTree> out;
    std::set<std::vector<int>> seen;
    for (int n = 1; n <= max_nodes; ++n) {
        std::vector<int> parent(n - 1, 0);
        std::function<void(int)> walk = [&](int pos) {
            if (pos == n - 1) {
                FinTree t = tree_from_parents(parent);
                auto code = structcore::canonical_tree_code(t);
                if (seen.insert(code).second) out.push_back(std::move(t));
                return;
            }
            for (int p = 0; p <= pos; ++p) {
                parent[pos] = p;
                walk(pos + 1);
            }
        };
        walk(0);
    }
    return out;
}

structcore::ColoredTree random_colored_tree(int max_nodes, int max_depth, int max_color,
                                            Rng& rng) {
    // grow a tree under the depth bound
    std::vector<Node> nodes = {{}};
    int n = 1 + static_cast<int>(draw(rng, max_nodes));
    std::map<Node, int> kids;
    while (static_cast<int>(nodes.size()) < n) {
        const Node& pick = nodes[draw(rng, nodes.size())];
        if (static_cast<int>(pick.size()) >= max_depth) continue;
        Node child = pick;
        child.push_back(kids[pick]++);
        nodes.push_back(child);
    }
    structcore::ColoredTree ct;
    ct.tree = FinTree::from_nodes(nodes);
    for (const Node& node : ct.tree.nodes) {
        std::vector<int> cs;
        for (int c = 1; c <= max_color; ++c)
            if (draw(rng, 100) < 30) cs.push_back(c);
        if (!cs.empty()) ct.colors[node] = cs;
    }
    return ct;
}

structcore::RelStructure random_digraph(int n, Rng& rng) {
    structcore::RelStructure m;
    m.universe = n;
    structcore::Relation rel;
    rel.arity = 2;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (draw(rng, 2) == 0) rel.tuples.push_back({i, j});
    std::sort(rel.tuples.begin(), rel.tuples.end());
    m.relations.emplace_back("E", std::move(rel));
    return m;
}

structcore::BipartiteGraph random_bipartite(int a, int b, int percent, Rng& rng) {
    structcore::BipartiteGraph g;
    for (int i = 0; i < a; ++i) g.left.push_back(i);
    for (int j = 0; j < b; ++j) g.right.push_back(a + j);
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j)
            if (draw(rng, 100) < static_cast<std::uint64_t>(percent))
                g.edges.emplace_back(i, a + j);
    return g;
}

}  // namespace generators
