#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "deeptree.hpp"
#include "generators.hpp"
#include "json_io.hpp"
#include "structcore.hpp"

using namespace deeptree;
using structcore::FinTree;
using structcore::Node;

TEST_CASE("make_i_tree shapes") {
    auto t00 = make_i_tree(0, 0, 2);
    CHECK(t00.tree.size() == 1);

    auto t01 = make_i_tree(0, 1, 2);
    CHECK(t01.tree.nodes == std::vector<Node>{{}, {0}, {1}});

    // i=1, k=2, b=2: root, <0>, <0,0>, <0,1>
    auto t12 = make_i_tree(1, 2, 2);
    CHECK(t12.tree.size() == 4);
    // direct enumeration oracle
    std::set<Node> direct;
    for (int len = 0; len <= 2; ++len) {
        std::vector<Node> level = {{}};
        for (int p = 0; p < len; ++p) {
            std::vector<Node> next;
            for (const Node& n : level)
                for (int v = 0; v < 2; ++v) {
                    if (p < 1 && v != 0) continue;
                    Node c = n;
                    c.push_back(v);
                    next.push_back(c);
                }
            level = next;
        }
        for (auto& n : level) direct.insert(n);
    }
    CHECK(std::set<Node>(t12.tree.nodes.begin(), t12.tree.nodes.end()) == direct);
    CHECK_NOTHROW(validate_i_tree(t12));
}

TEST_CASE("i-tree validator rejects broken stems") {
    ITree bad;
    bad.stem_length = 2;
    bad.tree = FinTree::from_nodes({{}, {1}});  // entry 1 at a stem position
    CHECK_THROWS_AS(validate_i_tree(bad), structcore::codec_error);
}

TEST_CASE("free join: counting and commutativity") {
    auto a = make_i_tree(2, 3, 2);
    auto b = make_i_tree(2, 5, 2);
    auto ab = free_join(a, b);
    CHECK(ab.tree.size() == a.tree.size() + b.tree.size() - 3);  // i + 1 identified
    auto ba = free_join(b, a);
    CHECK(structcore::canonical_tree_code(ab.tree) == structcore::canonical_tree_code(ba.tree));

    auto aa = free_join(a, a);
    CHECK(aa.tree.size() == 2 * a.tree.size() - 3);
}

TEST_CASE("free join with a bare stem is the identity up to isomorphism") {
    auto a = make_i_tree(2, 4, 2);
    ITree stem;
    stem.stem_length = 2;
    stem.tree = FinTree::from_nodes({{}, {0}});
    auto j = free_join(a, stem);
    CHECK(structcore::canonical_tree_code(j.tree) == structcore::canonical_tree_code(a.tree));
}

TEST_CASE("free join realizes two depth regimes over one stem") {
    auto j = free_join(make_i_tree(2, 3, 2), make_i_tree(2, 5, 2));
    // leaf depths: 3 from the first copy, 5 from the second
    std::set<std::size_t> leaf_depths;
    auto kids = structcore::child_map(j.tree);
    for (const Node& n : j.tree.nodes)
        if (kids.at(n).empty()) leaf_depths.insert(n.size());
    CHECK(leaf_depths == std::set<std::size_t>{3, 5});
    CHECK_THROWS_AS(free_join(make_i_tree(1, 2, 2), make_i_tree(2, 3, 2)),
                    std::invalid_argument);
}

TEST_CASE("uniform depths of the full b-ary tree") {
    auto t = make_i_tree(0, 3, 2);  // full binary of depth 3
    auto uni = uniform_depths(t.tree);
    for (const Node& n : t.tree.nodes) {
        REQUIRE(uni.at(n).has_value());
        CHECK(*uni.at(n) == 3 - static_cast<int>(n.size()));
    }
}

namespace {

// decorate: attach `count` fresh children, each heading a chain of `length`
// edges, so each child has uniform depth exactly `length`
void attach_uniform(std::vector<Node>& nodes, const Node& at, int next_index, int length,
                    int count) {
    for (int c = 0; c < count; ++c) {
        Node head = at;
        head.push_back(next_index + c);
        nodes.push_back(head);
        Node cur = head;
        for (int d = 0; d < length; ++d) {
            cur.push_back(0);
            nodes.push_back(cur);
        }
    }
}

}  // namespace

TEST_CASE("detect_cusps: leaves carry no label, constructed cusps are found") {
    // root with two uniform-depth-2 children, two uniform-depth-5 children,
    // and two deep chains of distinct lengths
    std::vector<Node> nodes = {{}};
    attach_uniform(nodes, {}, 0, 2, 2);
    attach_uniform(nodes, {}, 2, 5, 2);
    attach_uniform(nodes, {}, 4, 9, 1);
    attach_uniform(nodes, {}, 5, 10, 1);
    FinTree t = FinTree::from_nodes(nodes);
    auto labels = detect_cusps(t, {2, 8});
    REQUIRE(labels.size() == 1);
    CHECK(labels[0].node == Node{});
    CHECK(labels[0].m == 5);
    CHECK(labels[0].n == 2);

    // a lone leaf never qualifies
    auto none = detect_cusps(FinTree::single(), {2, 3});
    CHECK(none.empty());
}

TEST_CASE("detect_cusps is invariant under relabeling") {
    std::vector<Node> nodes = {{}};
    attach_uniform(nodes, {}, 0, 2, 2);
    attach_uniform(nodes, {}, 2, 4, 2);
    attach_uniform(nodes, {}, 4, 7, 1);
    attach_uniform(nodes, {}, 5, 8, 1);
    FinTree t = FinTree::from_nodes(nodes);
    // shuffle child indices
    std::vector<Node> moved;
    for (const Node& n : t.nodes) {
        Node m = n;
        if (!m.empty()) m[0] = 17 - m[0];
        moved.push_back(m);
    }
    FinTree t2 = FinTree::from_nodes(moved);
    auto l1 = detect_cusps(t, {2, 6});
    auto l2 = detect_cusps(t2, {2, 6});
    REQUIRE(l1.size() == l2.size());
    for (std::size_t i = 0; i < l1.size(); ++i) {
        CHECK(l1[i].m == l2[i].m);
        CHECK(l1[i].n == l2[i].n);
    }
}

TEST_CASE("assign_diffs: distinct differences and phi") {
    auto asg = assign_diffs(3, 4);
    std::set<long long> diffs;
    for (const auto& [delta, q] : asg.quads) {
        CHECK(q.n_plus < q.m_plus);
        CHECK(q.n_minus < q.m_minus);
        CHECK(diffs.insert(q.m_plus - q.n_plus).second);
        CHECK(diffs.insert(q.m_minus - q.n_minus).second);
        CHECK(asg.phi(q.m_plus - q.n_plus) == static_cast<int>(delta.size()));
        CHECK(asg.phi(q.m_minus - q.n_minus) == static_cast<int>(delta.size()));
    }
    // every delta over width 4 up to depth 3 is covered
    CHECK(asg.quads.size() == 1 + 4 + 16 + 64);
    CHECK_THROWS_AS(asg.phi(999999999), structcore::codec_error);
}

TEST_CASE("assign_diffs: depth 0 yields only the root quadruple") {
    auto asg = assign_diffs(0, 3);
    CHECK(asg.quads.size() == 1);
    CHECK(asg.quads.count(Node{}));
}

TEST_CASE("assign_diffs: pool exhaustion is loud") {
    CHECK_THROWS_AS(assign_diffs(6, 3), structcore::codec_error);
}

TEST_CASE("pool values obey the doubling rule") {
    auto asg = assign_diffs(2, 3);
    std::vector<long long> all;
    for (const auto& [lev, pool] : asg.pools)
        all.insert(all.end(), pool.begin(), pool.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i + 1 < all.size(); ++i) CHECK(all[i + 1] > 2 * all[i]);
}

TEST_CASE("membership roundtrip on a small scaffold") {
    auto asg = assign_diffs(2, 2);
    FinTree scaffold = FinTree::from_nodes(
        {{}, {0}, {1}, {0, 0}, {0, 1}, {1, 0}, {1, 1}});
    FinTree member = FinTree::from_nodes({{}, {0}, {0, 1}});
    auto labels = label_membership(scaffold, member, asg);
    CHECK(labels.size() == scaffold.size());
    auto back = cusp_decode(labels, asg);
    CHECK(back.nodes == member.nodes);
}

TEST_CASE("cusp_decode error paths") {
    auto asg = assign_diffs(1, 2);
    FinTree scaffold = FinTree::from_nodes({{}, {0}, {1}});

    // all-minus labels: no member root
    FinTree rootonly = FinTree::single();
    auto labels = label_membership(scaffold, rootonly, asg);
    // flip the root label to its minus pair
    for (auto& lab : labels)
        if (lab.node.empty()) {
            lab.m = asg.quads.at({}).m_minus;
            lab.n = asg.quads.at({}).n_minus;
        }
    CHECK_THROWS_WITH_AS(cusp_decode(labels, asg), doctest::Contains("empty"),
                         structcore::codec_error);

    // unknown difference
    labels = label_membership(scaffold, rootonly, asg);
    labels[0].m += 1;
    CHECK_THROWS_WITH_AS(cusp_decode(labels, asg), doctest::Contains("unknown difference"),
                         structcore::codec_error);

    // non-prefix-closed member set: member at <0> with a non-member root
    FinTree member = FinTree::from_nodes({{}, {0}});
    labels = label_membership(scaffold, member, asg);
    for (auto& lab : labels)
        if (lab.node.empty()) {
            lab.m = asg.quads.at({}).m_minus;
            lab.n = asg.quads.at({}).n_minus;
        }
    CHECK_THROWS_AS(cusp_decode(labels, asg), structcore::codec_error);
}

TEST_CASE("assignment JSON roundtrip preserves decoding") {
    auto asg = assign_diffs(2, 2);
    auto j = json_io::to_json(asg);
    auto back = json_io::diff_assignment_from_json(j);
    CHECK(back.quads.size() == asg.quads.size());
    CHECK(back.pools == asg.pools);

    FinTree scaffold = FinTree::from_nodes({{}, {0}, {1}});
    FinTree member = FinTree::from_nodes({{}, {1}});
    auto labels = label_membership(scaffold, member, asg);
    CHECK(cusp_decode(labels, back).nodes == member.nodes);

    // a duplicated difference must be rejected on load
    auto quads = j["quads"];
    auto first = quads.begin().key();
    j["quads"]["9.9"] = quads[first];
    CHECK_THROWS_AS(json_io::diff_assignment_from_json(j), structcore::codec_error);
}

TEST_CASE("decorate, detect, decode: the full structural pipeline") {
    // hand assignment with small values; differences stay distinct
    DiffAssignment asg;
    auto put = [&](const Node& delta, long long np, long long mp, long long nm, long long mm) {
        asg.quads[delta] = {np, mp, nm, mm};
        asg.diff_index[mp - np] = {delta, true};
        asg.diff_index[mm - nm] = {delta, false};
    };
    put({}, 1, 2, 3, 5);        // diffs 1, 2
    put({0}, 4, 8, 6, 14);      // diffs 4, 8
    put({1}, 10, 26, 20, 52);   // diffs 16, 32

    FinTree scaffold = FinTree::from_nodes({{}, {0}, {1}});
    FinTree member = FinTree::from_nodes({{}, {1}});

    const int successor_min = 2, deep_min = 60;
    std::vector<Node> nodes;
    auto kids = structcore::child_map(scaffold);
    for (const Node& n : scaffold.nodes) {
        nodes.push_back(n);
        const auto& q = asg.quads.at(n);
        long long sel_n = member.contains(n) ? q.n_plus : q.n_minus;
        long long sel_m = member.contains(n) ? q.m_plus : q.m_minus;
        int next = 0;
        for (const Node& c : kids.at(n)) next = std::max(next, c.back() + 1);
        attach_uniform(nodes, n, next, static_cast<int>(sel_n), successor_min);
        attach_uniform(nodes, n, next + successor_min, static_cast<int>(sel_m), successor_min);
        attach_uniform(nodes, n, next + 2 * successor_min, deep_min, 1);
        attach_uniform(nodes, n, next + 2 * successor_min + 1, deep_min + 1, 1);
    }
    FinTree decorated = FinTree::from_nodes(nodes);
    auto labels = detect_cusps(decorated, {successor_min, deep_min});
    REQUIRE(labels.size() == scaffold.size());
    auto back = cusp_decode(labels, asg);
    CHECK(back.nodes == member.nodes);
}
