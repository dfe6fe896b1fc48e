#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "generators.hpp"
#include "structcore.hpp"
#include "treecode.hpp"

using namespace treecode;
using structcore::ColoredTree;
using structcore::FinTree;
using structcore::Node;

TEST_CASE("pairing avoids 0 and 1 and inverts") {
    PairingFn phi;
    std::set<long long> seen;
    for (int n = 0; n < 12; ++n)
        for (int j = 0; j < 12; ++j) {
            long long v = phi(n, j);
            CHECK(v >= 2);
            CHECK(seen.insert(v).second);  // injective
            auto [bn, bj] = phi.invert(v);
            CHECK(bn == n);
            CHECK(bj == j);
        }
    CHECK(phi(0, 0) == 2);
}

TEST_CASE("special family: pairwise distinct, deep enough") {
    auto lib = make_special_family(3);
    REQUIRE(lib.trees.size() == 3);
    std::set<std::vector<int>> codes;
    for (const auto& t : lib.trees) {
        CHECK(structcore::tree_depth(t) >= 2);
        CHECK(codes.insert(structcore::canonical_tree_code(t)).second);
    }
    CHECK(make_special_family(1).trees.size() == 1);
}

TEST_CASE("atomic formula enumeration for a digraph signature") {
    structcore::RelStructure sig;
    sig.universe = 0;
    sig.relations.emplace_back("E", structcore::Relation{2, {}});
    CHECK(atomic_formulas(sig, 0).empty());
    CHECK(atomic_formulas(sig, 1).size() == 1);   // E(x0,x0)
    CHECK(atomic_formulas(sig, 2).size() == 4);   // all variable pairs
}

TEST_CASE("encode_structure: empty signature, two elements, depth 1") {
    structcore::RelStructure m;
    m.universe = 2;
    auto ct = encode_structure(m, 1);
    CHECK(ct.tree.size() == 3);
    CHECK(ct.colors.empty());
}

TEST_CASE("encode_structure: one reflexive point with unary predicate") {
    structcore::RelStructure m;
    m.universe = 1;
    m.relations.emplace_back("P", structcore::Relation{1, {{0}}});
    PairingFn phi;
    auto ct = encode_structure(m, 1, phi);
    REQUIRE(ct.colors.count(Node{0}));
    CHECK(ct.colors.at(Node{0}) == std::vector<int>{static_cast<int>(phi(1, 0))});
    CHECK_FALSE(ct.colors.count(Node{}));
}

TEST_CASE("encode_structure: two-element linear order at depth 2") {
    structcore::RelStructure m;
    m.universe = 2;
    m.relations.emplace_back("lt", structcore::Relation{2, {{0, 1}}});
    PairingFn phi;
    auto ct = encode_structure(m, 2, phi);
    // formulas in 2 vars: (0,0), (0,1), (1,0), (1,1) in lex order
    int idx01 = 1;
    long long want = phi(2, idx01);
    REQUIRE(ct.colors.count(Node{0, 1}));
    CHECK(std::binary_search(ct.colors.at(Node{0, 1}).begin(), ct.colors.at(Node{0, 1}).end(),
                             static_cast<int>(want)));
    if (ct.colors.count(Node{1, 0}))
        CHECK_FALSE(std::binary_search(ct.colors.at(Node{1, 0}).begin(),
                                       ct.colors.at(Node{1, 0}).end(), static_cast<int>(want)));
}

TEST_CASE("decode_structure roundtrips the linear order") {
    structcore::RelStructure m;
    m.universe = 2;
    m.relations.emplace_back("lt", structcore::Relation{2, {{0, 1}}});
    auto ct = encode_structure(m, 2);
    auto back = decode_structure(ct, m);
    CHECK(back.universe == 2);
    CHECK(back.relations[0].second.tuples == m.relations[0].second.tuples);
}

TEST_CASE("decode_structure: colorless tree over empty signature") {
    structcore::RelStructure sig;
    sig.universe = 0;
    structcore::RelStructure m;
    m.universe = 3;
    auto ct = encode_structure(m, 1);
    auto back = decode_structure(ct, sig);
    CHECK(back.universe == 3);
    CHECK(back.relations.empty());
}

TEST_CASE("decode_structure roundtrips random digraphs") {
    generators::Rng rng(31);
    for (int i = 0; i < 30; ++i) {
        int n = 1 + static_cast<int>(generators::draw(rng, 4));
        auto m = generators::random_digraph(n, rng);
        auto ct = encode_structure(m, 2);
        auto back = decode_structure(ct, m);
        CHECK(back.universe == m.universe);
        CHECK(back.relations[0].second.tuples == m.relations[0].second.tuples);
    }
}

TEST_CASE("decode_structure flags inconsistent colors") {
    structcore::RelStructure m;
    m.universe = 2;
    m.relations.emplace_back("E", structcore::Relation{2, {{0, 1}, {1, 0}}});
    auto ct = encode_structure(m, 2);
    // erase one of the two symmetric colors: now E(0,1) reads true at (0,1)
    // via the identity formula but false at (1,0) via the swapped formula
    ct.colors[Node{1, 0}].clear();
    ct.colors.erase(Node{1, 0});
    CHECK_THROWS_AS(decode_structure(ct, m), structcore::codec_error);
}

TEST_CASE("attach_trees: empty map and root identification") {
    FinTree t = FinTree::from_nodes({{}, {0}, {1}});
    CHECK(attach_trees(t, {}).nodes == t.nodes);

    FinTree one = FinTree::single();
    FinTree path2 = FinTree::from_nodes({{}, {0}});
    auto res = attach_trees(one, {{Node{}, path2}});
    CHECK(res.size() == 2);
}

TEST_CASE("attach_trees: size bookkeeping") {
    generators::Rng rng(37);
    for (int i = 0; i < 20; ++i) {
        FinTree t = generators::random_tree(1 + generators::draw(rng, 6), rng);
        std::map<Node, FinTree> gadgets;
        std::size_t extra = 0;
        for (const Node& n : t.nodes) {
            if (generators::draw(rng, 2) == 0) continue;
            FinTree g = generators::random_tree(1 + generators::draw(rng, 4), rng);
            extra += g.size() - 1;
            gadgets.emplace(n, g);
        }
        auto res = attach_trees(t, gadgets);
        CHECK(res.size() == t.size() + extra);
        CHECK(structcore::is_valid_tree(res));
    }
}

TEST_CASE("encode_colored_tree: one-node colorless tree") {
    ColoredTree ct = ColoredTree::plain(FinTree::single());
    PairingFn phi;
    DepthHorizon D{10};
    auto enc = encode_colored_tree(ct, phi, D);
    // root + marker chain of phi(0,0) = 2 nodes + spine of 10
    CHECK(enc.size() == 1 + 2 + 10);
}

TEST_CASE("encode_colored_tree: node count formula") {
    generators::Rng rng(41);
    PairingFn phi;
    for (int i = 0; i < 25; ++i) {
        auto ct = generators::random_colored_tree(6, 3, 4, rng);
        auto D = minimal_horizon(ct, phi);
        auto enc = encode_colored_tree(ct, phi, D);
        std::size_t want = ct.tree.size();
        for (const Node& n : ct.tree.nodes) {
            want += D.depth;                                  // spine
            want += phi(static_cast<int>(n.size()), 0);       // marker chain
            auto it = ct.colors.find(n);
            if (it != ct.colors.end())
                for (int c : it->second) want += phi(static_cast<int>(n.size()), c);
        }
        CHECK(enc.size() == want);
        CHECK(structcore::is_valid_tree(enc));
    }
}

TEST_CASE("encode_colored_tree rejects reserved color and small horizons") {
    ColoredTree ct = ColoredTree::plain(FinTree::single());
    ct.colors[{}] = {0};
    CHECK_THROWS_WITH_AS(encode_colored_tree(ct, {}, {100}),
                         doctest::Contains("reserved"), structcore::codec_error);

    ColoredTree ok = ColoredTree::plain(FinTree::single());
    ok.colors[{}] = {3};
    // phi(0,3) = 8: a horizon of 5 cannot host it
    CHECK_THROWS_WITH_AS(encode_colored_tree(ok, {}, {5}),
                         doctest::Contains("color 3"), structcore::codec_error);
}

TEST_CASE("decode_colored_tree: smallest roundtrip") {
    ColoredTree ct = ColoredTree::plain(FinTree::single());
    ct.colors[{}] = {1};
    PairingFn phi;
    DepthHorizon D{10};
    auto enc = encode_colored_tree(ct, phi, D);
    auto back = decode_colored_tree(enc, phi, D);
    REQUIRE(structcore::colored_tree_iso(ct, back).has_value());
}

TEST_CASE("decode_colored_tree: random roundtrips") {
    generators::Rng rng(43);
    PairingFn phi;
    for (int i = 0; i < 40; ++i) {
        auto ct = generators::random_colored_tree(8, 3, 8, rng);
        auto D = minimal_horizon(ct, phi);
        auto enc = encode_colored_tree(ct, phi, D);
        auto back = decode_colored_tree(enc, phi, D);
        CHECK(structcore::colored_tree_iso(ct, back).has_value());
    }
}

TEST_CASE("iso invariance both ways on all small colored trees") {
    // all colored trees with <= 4 nodes, colors drawn from {1, 2}
    std::vector<ColoredTree> all;
    for (const FinTree& t : generators::all_trees_upto(4)) {
        std::size_t n = t.size();
        std::vector<std::vector<int>> palettes = {{}, {1}, {2}, {1, 2}};
        std::vector<std::size_t> pick(n, 0);
        while (true) {
            ColoredTree ct = ColoredTree::plain(t);
            for (std::size_t i = 0; i < n; ++i)
                if (!palettes[pick[i]].empty()) ct.colors[t.nodes[i]] = palettes[pick[i]];
            all.push_back(ct);
            std::size_t i = 0;
            for (; i < n; ++i) {
                if (pick[i] + 1 < palettes.size()) {
                    ++pick[i];
                    break;
                }
                pick[i] = 0;
            }
            if (i == n) break;
        }
    }
    PairingFn phi;
    // one shared horizon large enough for depth <= 3, colors <= 2
    DepthHorizon D{static_cast<int>(phi(3, 2)) + 1};
    std::vector<std::vector<int>> colored_codes, encoded_codes;
    for (const auto& ct : all) {
        colored_codes.push_back(structcore::canonical_colored_code(ct));
        encoded_codes.push_back(structcore::canonical_tree_code(encode_colored_tree(ct, phi, D)));
    }
    std::size_t checked = 0;
    for (std::size_t i = 0; i < all.size() && checked < 60000; ++i)
        for (std::size_t j = i + 1; j < all.size() && checked < 60000; ++j, ++checked) {
            bool src = colored_codes[i] == colored_codes[j];
            bool img = encoded_codes[i] == encoded_codes[j];
            CHECK(src == img);
        }
}

TEST_CASE("decode_colored_tree works on relabeled encodings") {
    // the decoder reads structure only, so scrambling addresses of the
    // encoded tree must not change the decoded result
    generators::Rng rng(59);
    PairingFn phi;
    auto scramble = [&rng](const FinTree& t) {
        auto kids = structcore::child_map(t);
        std::vector<Node> out;
        std::function<void(const Node&, const Node&)> walk = [&](const Node& n,
                                                                 const Node& fresh) {
            out.push_back(fresh);
            auto cs = kids.at(n);
            // random distinct child indices
            std::vector<int> idx(cs.size());
            std::iota(idx.begin(), idx.end(), 0);
            for (std::size_t i = cs.size(); i > 1; --i)
                std::swap(idx[i - 1], idx[generators::draw(rng, i)]);
            for (std::size_t i = 0; i < cs.size(); ++i) {
                Node f = fresh;
                f.push_back(3 * idx[i] + 1);
                walk(cs[i], f);
            }
        };
        walk({}, {});
        return FinTree::from_nodes(out);
    };
    for (int i = 0; i < 10; ++i) {
        auto ct = generators::random_colored_tree(6, 2, 5, rng);
        auto D = minimal_horizon(ct, phi);
        auto enc = scramble(encode_colored_tree(ct, phi, D));
        auto back = decode_colored_tree(enc, phi, D);
        CHECK(structcore::colored_tree_iso(ct, back).has_value());
    }
}

TEST_CASE("decode_colored_tree rejects mangled input") {
    ColoredTree ct = ColoredTree::plain(FinTree::from_nodes({{}, {0}}));
    ct.colors[{0}] = {2};
    PairingFn phi;
    DepthHorizon D{12};
    auto enc = encode_colored_tree(ct, phi, D);
    // cut every spine in half: original nodes lose their depth certificate
    std::vector<Node> trimmed;
    for (const Node& n : enc.nodes)
        if (n.size() <= 6) trimmed.push_back(n);
    auto bad = FinTree::from_nodes(trimmed);
    CHECK_THROWS_AS(decode_colored_tree(bad, phi, D), structcore::codec_error);
}

TEST_CASE("decode_colored_tree on arbitrary trees fails cleanly") {
    generators::Rng rng(61);
    PairingFn phi;
    for (int i = 0; i < 60; ++i) {
        auto junk = generators::random_tree(2 + static_cast<int>(generators::draw(rng, 20)), rng);
        try {
            auto ct = decode_colored_tree(junk, phi, {6});
            // a successful decode must reproduce the input when re-encoded
            auto re = encode_colored_tree(ct, phi, {6});
            CHECK(structcore::tree_iso(re, junk).has_value());
        } catch (const structcore::codec_error&) {
            CHECK(true);
        }
    }
}

TEST_CASE("library coding roundtrips and rejects unknown gadgets") {
    auto lib = make_special_family(4);
    DepthHorizon D{12};  // gadget depths reach 1 + (3 + 2) = 6 < 12
    generators::Rng rng(47);
    for (int i = 0; i < 20; ++i) {
        auto ct = generators::random_colored_tree(6, 2, 3, rng);
        auto enc = encode_colored_tree_with_library(ct, lib, D);
        auto back = decode_colored_tree_with_library(enc, lib, D);
        CHECK(structcore::colored_tree_iso(ct, back).has_value());
    }
    // a gadget outside the library must be rejected
    ColoredTree ct = ColoredTree::plain(FinTree::single());
    ct.colors[{}] = {2};
    auto enc = encode_colored_tree_with_library(ct, lib, D);
    auto smaller = make_special_family(2);
    CHECK_THROWS_WITH_AS(decode_colored_tree_with_library(enc, smaller, D),
                         doctest::Contains("unrecognized"), structcore::codec_error);
}

TEST_CASE("library coding keeps non-isomorphic inputs apart") {
    auto lib = make_special_family(4);
    DepthHorizon D{12};
    generators::Rng rng(53);
    int made = 0, guard = 0;
    while (made < 15 && guard++ < 200) {
        auto a = generators::random_colored_tree(6, 2, 3, rng);
        auto b = generators::random_colored_tree(6, 2, 3, rng);
        if (structcore::canonical_colored_code(a) == structcore::canonical_colored_code(b))
            continue;
        auto ea = encode_colored_tree_with_library(a, lib, D);
        auto eb = encode_colored_tree_with_library(b, lib, D);
        CHECK(structcore::canonical_tree_code(ea) != structcore::canonical_tree_code(eb));
        ++made;
    }
    CHECK(made == 15);
}
