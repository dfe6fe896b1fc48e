#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <set>

#include "exhaustive.hpp"
#include "generators.hpp"
#include "json_io.hpp"
#include "structcore.hpp"

using namespace structcore;

namespace {

FinTree path_tree(int length) {
    std::vector<Node> ns;
    Node cur;
    ns.push_back(cur);
    for (int i = 0; i < length; ++i) {
        cur.push_back(0);
        ns.push_back(cur);
    }
    return FinTree::from_nodes(ns);
}

FinTree star_tree(int leaves) {
    std::vector<Node> ns = {{}};
    for (int i = 0; i < leaves; ++i) ns.push_back({i});
    return FinTree::from_nodes(ns);
}

// every child-order permutation of a tree, as address relabelings
void all_relabelings(const FinTree& t, std::vector<FinTree>& out) {
    auto kids = child_map(t);
    std::vector<FinTree> acc;
    std::function<void(const Node&, const Node&, std::vector<Node>&)> rec;
    // enumerate recursively: for each node, permute the order of its children
    std::function<std::vector<std::vector<Node>>(const Node&)> build =
        [&](const Node& n) -> std::vector<std::vector<Node>> {
        std::vector<std::vector<Node>> results;  // each: address list of subtree of n
        auto cs = kids.at(n);
        std::sort(cs.begin(), cs.end());
        std::vector<int> order(cs.size());
        std::iota(order.begin(), order.end(), 0);
        // per-child alternatives
        std::vector<std::vector<std::vector<Node>>> child_alts;
        for (const Node& c : cs) child_alts.push_back(build(c));
        do {
            // combine one alternative per child under this permutation
            std::vector<std::size_t> pick(cs.size(), 0);
            while (true) {
                std::vector<Node> mine = {{}};
                for (std::size_t slot = 0; slot < order.size(); ++slot) {
                    const auto& sub = child_alts[order[slot]][pick[order[slot]]];
                    for (const Node& rel : sub) {
                        Node addr = {static_cast<int>(slot)};
                        addr.insert(addr.end(), rel.begin(), rel.end());
                        mine.push_back(addr);
                    }
                }
                results.push_back(mine);
                std::size_t i = 0;
                for (; i < pick.size(); ++i) {
                    if (pick[i] + 1 < child_alts[i].size()) {
                        ++pick[i];
                        break;
                    }
                    pick[i] = 0;
                }
                if (i == pick.size()) break;
            }
        } while (std::next_permutation(order.begin(), order.end()));
        return results;
    };
    for (const auto& addrs : build({})) out.push_back(FinTree::from_nodes(addrs));
}

}  // namespace

TEST_CASE("tree validation") {
    CHECK(is_valid_tree(FinTree::single()));
    FinTree bad;
    bad.nodes = {{0}};  // no root
    CHECK_FALSE(is_valid_tree(bad));
    bad.nodes = {{}, {1}};  // fine: prefix-closed needs only the parent
    CHECK(is_valid_tree(bad));
    bad.nodes = {{}, {0, 0}};  // missing {0}
    CHECK_FALSE(is_valid_tree(bad));
}

TEST_CASE("node addresses to strings") {
    CHECK(node_to_string({}) == "");
    CHECK(node_to_string({0, 2, 1}) == "0.2.1");
    CHECK(node_from_string("") == Node{});
    CHECK(node_from_string("0.2.1") == Node{0, 2, 1});
}

TEST_CASE("canonical code: smallest tree") {
    CHECK(canonical_tree_code(FinTree::single()) == std::vector<int>{0, 1});
}

TEST_CASE("canonical code: relabeled paths agree") {
    FinTree a = path_tree(2);
    FinTree b = FinTree::from_nodes({{}, {4}, {4, 7}});
    CHECK(canonical_tree_code(a) == canonical_tree_code(b));
}

TEST_CASE("canonical code: star vs path differ") {
    // exhaustive isomorphism search over <= 4-node trees says these are the
    // only two shapes of size 4 with the given degree profiles
    FinTree star = star_tree(3);
    FinTree path = path_tree(3);
    CHECK(canonical_tree_code(star) != canonical_tree_code(path));
    CHECK_FALSE(tree_iso(star, path).has_value());
}

TEST_CASE("canonical code: invariant under all child-order relabelings, <= 5 nodes") {
    for (const FinTree& t : generators::all_trees_upto(5)) {
        auto code = canonical_tree_code(t);
        std::vector<FinTree> relabels;
        all_relabelings(t, relabels);
        for (const FinTree& r : relabels) CHECK(canonical_tree_code(r) == code);
    }
}

TEST_CASE("colored iso: one-node examples") {
    ColoredTree a = ColoredTree::plain(FinTree::single());
    a.colors[{}] = {3};
    ColoredTree b = a;
    auto iso = colored_tree_iso(a, b);
    REQUIRE(iso.has_value());
    CHECK(iso->size() == 1);

    b.colors[{}] = {2};
    CHECK_FALSE(colored_tree_iso(a, b).has_value());
}

TEST_CASE("colored iso: child permutation") {
    ColoredTree a, b;
    a.tree = FinTree::from_nodes({{}, {0}, {1}, {0, 0}});
    a.colors[{0}] = {1};
    b.tree = FinTree::from_nodes({{}, {0}, {1}, {1, 0}});
    b.colors[{1}] = {1};
    auto iso = colored_tree_iso(a, b);
    REQUIRE(iso.has_value());
    // bijection maps a's colored child to b's colored child
    for (const auto& [x, y] : *iso)
        if (x == Node{0}) CHECK(y == Node{1});
}

TEST_CASE("colored iso agrees with color-extended canonical codes") {
    generators::Rng rng(7);
    for (int i = 0; i < 60; ++i) {
        auto a = generators::random_colored_tree(5, 3, 2, rng);
        auto b = generators::random_colored_tree(5, 3, 2, rng);
        bool codes = canonical_colored_code(a) == canonical_colored_code(b);
        CHECK(codes == colored_tree_iso(a, b).has_value());
    }
}

TEST_CASE("bipartite iso: complete graphs and near misses") {
    BipartiteGraph a = complete_bipartite(2, 2);
    BipartiteGraph b = complete_bipartite(2, 2);
    CHECK(bipartite_iso(a, b).has_value());
    b.edges.pop_back();
    CHECK_FALSE(bipartite_iso(a, b).has_value());
}

TEST_CASE("bipartite iso matches brute force on all small pairs") {
    // all graphs on 2+2 vertices, every ordered pair
    std::vector<BipartiteGraph> all;
    exhaustive::for_each_bipartite_upto(4, [&](const BipartiteGraph& g) {
        if (g.left.size() == 2 && g.right.size() == 2) all.push_back(g);
    });
    REQUIRE(all.size() == 16);
    for (const auto& a : all)
        for (const auto& b : all) {
            bool fast = bipartite_iso(a, b).has_value();
            bool slow = exhaustive::brute_force_bipartite_iso(a, b).has_value();
            CHECK(fast == slow);
        }
}

TEST_CASE("bipartite iso matches brute force on random 3+3 and 4+4") {
    generators::Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        int n = 3 + static_cast<int>(generators::draw(rng, 2));
        auto a = generators::random_bipartite(n, n, 50, rng);
        BipartiteGraph b;
        if (generators::draw(rng, 2) == 0) {
            // permuted copy
            std::vector<int> lp(a.left), rp(a.right);
            for (int k = n - 1; k > 0; --k) {
                std::swap(lp[k], lp[generators::draw(rng, k + 1)]);
                std::swap(rp[k], rp[generators::draw(rng, k + 1)]);
            }
            b.left = a.left;
            b.right = a.right;
            std::map<int, int> ml, mr;
            for (int k = 0; k < n; ++k) {
                ml[a.left[k]] = lp[k];
                mr[a.right[k]] = rp[k];
            }
            for (auto [l, r] : a.edges) b.edges.emplace_back(ml[l], mr[r]);
            std::sort(b.edges.begin(), b.edges.end());
        } else {
            b = generators::random_bipartite(n, n, 50, rng);
        }
        bool fast = bipartite_iso(a, b).has_value();
        bool slow = exhaustive::brute_force_bipartite_iso(a, b).has_value();
        CHECK(fast == slow);
    }
}

TEST_CASE("bipartite iso on same-degree 5x5 pair matches brute force") {
    // two 6-cycles vs one 12-cycle shape inside 5x5 pads: same degrees
    generators::Rng rng(23);
    for (int tries = 0; tries < 40; ++tries) {
        auto a = generators::random_bipartite(5, 5, 40, rng);
        auto b = generators::random_bipartite(5, 5, 40, rng);
        auto degs = [](const BipartiteGraph& g) {
            std::map<int, int> d;
            for (auto [l, r] : g.edges) {
                ++d[l];
                ++d[r];
            }
            std::vector<int> v;
            for (auto& [k, c] : d) v.push_back(c);
            std::sort(v.begin(), v.end());
            return v;
        };
        if (degs(a) != degs(b)) continue;
        CHECK(bipartite_iso(a, b).has_value() ==
              exhaustive::brute_force_bipartite_iso(a, b).has_value());
    }
}

TEST_CASE("partial iso validity") {
    generators::Rng rng(3);
    auto m = generators::random_digraph(4, rng);
    CHECK(partial_iso_valid(m, m, {{0, 0}, {1, 1}}));
    CHECK_FALSE(partial_iso_valid(m, m, {{0, 1}, {1, 1}}));  // not injective
}

TEST_CASE("ef: structure vs itself") {
    generators::Rng rng(5);
    for (int n = 1; n <= 4; ++n) {
        auto m = generators::random_digraph(n, rng);
        for (int k = 0; k <= 5; ++k) CHECK(ef_equivalent(m, m, k));
    }
}

TEST_CASE("ef: pure sets of different sizes") {
    RelStructure two, three;
    two.universe = 2;
    three.universe = 3;
    CHECK(ef_equivalent(two, three, 2));
    CHECK_FALSE(ef_equivalent(two, three, 3));  // spoiler exhausts the small side
}

TEST_CASE("ef: monotone non-increasing in k") {
    generators::Rng rng(9);
    for (int i = 0; i < 20; ++i) {
        auto a = generators::random_digraph(1 + generators::draw(rng, 3), rng);
        auto b = generators::random_digraph(1 + generators::draw(rng, 3), rng);
        bool prev = true;
        for (int k = 0; k <= 6; ++k) {
            bool now = ef_equivalent(a, b, k);
            CHECK((prev || !now));  // once false, stays false
            prev = now;
        }
    }
}

TEST_CASE("ef at k >= |A|+|B| equals isomorphism (size <= 6 total)") {
    generators::Rng rng(13);
    for (int i = 0; i < 60; ++i) {
        int na = 1 + static_cast<int>(generators::draw(rng, 3));
        int nb = 1 + static_cast<int>(generators::draw(rng, 3));
        auto a = generators::random_digraph(na, rng);
        auto b = generators::random_digraph(nb, rng);
        CHECK(ef_equivalent(a, b, na + nb) == exhaustive::brute_force_structure_iso(a, b));
    }
}

TEST_CASE("ef: signature mismatch raises") {
    RelStructure a, b;
    a.universe = b.universe = 1;
    a.relations.emplace_back("E", Relation{2, {}});
    CHECK_THROWS_AS(ef_equivalent(a, b, 1), std::invalid_argument);
}

TEST_CASE("json roundtrips") {
    generators::Rng rng(17);
    auto t = generators::random_tree(6, rng);
    CHECK(json_io::tree_from_json(json_io::to_json(t)).nodes == t.nodes);

    auto ct = generators::random_colored_tree(6, 3, 4, rng);
    auto ct2 = json_io::colored_tree_from_json(json_io::to_json(ct));
    CHECK(ct2.tree.nodes == ct.tree.nodes);
    for (const auto& [n, cs] : ct.colors)
        if (!cs.empty()) CHECK(ct2.colors.at(n) == cs);

    auto g = generators::random_bipartite(4, 5, 50, rng);
    auto g2 = json_io::bipartite_from_json(json_io::to_json(g));
    CHECK(g2.left == g.left);
    CHECK(g2.edges == g.edges);

    auto m = generators::random_digraph(4, rng);
    auto m2 = json_io::structure_from_json(json_io::to_json(m));
    CHECK(m2.universe == m.universe);
    CHECK(m2.relations[0].second.tuples == m.relations[0].second.tuples);
}
