#include "deeptree.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace deeptree {

using structcore::codec_error;
using structcore::node_to_string;

void validate_i_tree(const ITree& t) {
    structcore::validate_tree(t.tree);
    if (t.stem_length < 0) throw codec_error("negative stem length");
    for (const Node& n : t.tree.nodes)
        for (int j = 0; j < std::min<int>(t.stem_length, static_cast<int>(n.size())); ++j)
            if (n[j] != 0)
                throw codec_error("node " + node_to_string(n) + " breaks the stem shape at " +
                                  std::to_string(j));
    // the stem itself must be present
    Node stem;
    for (int j = 0; j < t.stem_length; ++j) {
        if (!t.tree.contains(stem))
            throw codec_error("stem node of length " + std::to_string(j) + " missing");
        stem.push_back(0);
    }
}

ITree make_i_tree(int i, int k, int width) {
    if (i < 0 || k < i) throw std::invalid_argument("need 0 <= i <= k");
    if (width < 1) throw std::invalid_argument("width must be >= 1");
    std::vector<Node> nodes;
    std::function<void(Node&)> gen = [&](Node& cur) {
        nodes.push_back(cur);
        if (static_cast<int>(cur.size()) == k) return;
        int pos = static_cast<int>(cur.size());
        int hi = pos < i ? 1 : width;  // stem positions carry only 0
        for (int v = 0; v < hi; ++v) {
            cur.push_back(v);
            gen(cur);
            cur.pop_back();
        }
    };
    Node root;
    gen(root);
    ITree t;
    t.stem_length = i;
    t.tree = FinTree::from_nodes(nodes);
    validate_i_tree(t);
    return t;
}

ITree free_join(const ITree& a, const ITree& b) {
    validate_i_tree(a);
    validate_i_tree(b);
    if (a.stem_length != b.stem_length)
        throw std::invalid_argument("free join requires equal stem lengths");
    const int i = a.stem_length;
    // nodes of length <= i are identified (each side has at most one per
    // level); deeper nodes are kept apart by doubling the entry at position i
    std::vector<Node> nodes;
    auto add_side = [&](const ITree& t, int offset) {
        for (const Node& n : t.tree.nodes) {
            if (static_cast<int>(n.size()) <= i) {
                nodes.push_back(n);
                continue;
            }
            Node remapped = n;
            remapped[i] = 2 * n[i] + offset;
            nodes.push_back(remapped);
        }
    };
    add_side(a, 0);
    add_side(b, 1);
    ITree out;
    out.stem_length = i;
    out.tree = FinTree::from_nodes(nodes);
    validate_i_tree(out);
    return out;
}

std::map<Node, std::optional<int>> uniform_depths(const FinTree& t) {
    auto kids = structcore::child_map(t);
    std::map<Node, std::optional<int>> out;
    std::function<std::optional<int>(const Node&)> rec = [&](const Node& n) {
        const auto& cs = kids.at(n);
        std::optional<int> result;
        if (cs.empty()) {
            result = 0;
        } else {
            bool all_uniform = true;
            std::set<int> depths;
            for (const Node& c : cs) {
                auto d = rec(c);
                if (!d)
                    all_uniform = false;
                else
                    depths.insert(*d + 1);
            }
            if (all_uniform && depths.size() == 1) result = *depths.begin();
        }
        out[n] = result;
        return result;
    };
    rec({});
    return out;
}

std::vector<CuspLabel> detect_cusps(const FinTree& t, const CuspThresholds& th) {
    if (th.successor_min < 1 || th.deep_min < 1)
        throw std::invalid_argument("thresholds must be positive");
    structcore::validate_tree(t);
    auto kids = structcore::child_map(t);
    auto uni = uniform_depths(t);
    auto heights = structcore::node_heights(t);

    std::vector<CuspLabel> out;
    for (const Node& n : t.nodes) {
        const auto& cs = kids.at(n);
        if (cs.empty()) continue;
        std::map<int, int> uniform_count;
        int deep = 0;
        for (const Node& c : cs) {
            if (uni.at(c)) ++uniform_count[*uni.at(c)];
            if (heights.at(c) >= th.deep_min) ++deep;
        }
        if (deep < th.successor_min) continue;
        std::vector<int> depths;
        for (const auto& [d, cnt] : uniform_count)
            if (cnt >= th.successor_min) depths.push_back(d);
        for (std::size_t x = 0; x < depths.size(); ++x)
            for (std::size_t y = x + 1; y < depths.size(); ++y)
                out.push_back({n, depths[y], depths[x]});  // m > n
    }
    return out;
}

int DiffAssignment::phi(long long diff) const {
    auto it = diff_index.find(diff);
    if (it == diff_index.end())
        throw codec_error("unknown difference " + std::to_string(diff));
    return static_cast<int>(it->second.first.size());
}

DiffAssignment assign_diffs(int depth_bound, int width) {
    if (depth_bound < 0 || width < 1) throw std::invalid_argument("bad assignment bounds");
    DiffAssignment out;

    // value stock: 1, 3, 7, ... doubling-plus-one keeps every pool pair
    // n < m at m > 2n, hence all differences distinct
    long long next_value = 1;
    auto take_values = [&](int count) {
        std::vector<long long> vs;
        for (int c = 0; c < count; ++c) {
            if (next_value > (1ll << 62) / 2 - 1) throw codec_error("value pool exhausted");
            vs.push_back(next_value);
            next_value = 2 * next_value + 1;
        }
        return vs;
    };

    // δ addresses per level
    std::vector<std::vector<Node>> deltas(depth_bound + 1);
    deltas[0] = {Node{}};
    for (int lev = 1; lev <= depth_bound; ++lev)
        for (const Node& d : deltas[lev - 1])
            for (int w = 0; w < width; ++w) {
                Node c = d;
                c.push_back(w);
                deltas[lev].push_back(c);
            }

    for (int lev = 0; lev <= depth_bound; ++lev) {
        const long long pairs_needed = 2ll * static_cast<long long>(deltas[lev].size());
        // segment sized so that intra-quad disjointness never starves the tail
        int s = 4;
        while (static_cast<long long>(s) * (s - 1) / 2 < pairs_needed + 2 * s) ++s;
        std::vector<long long> pool = take_values(s);
        out.pools[lev] = pool;

        std::vector<std::pair<int, int>> pair_list;  // index pairs into pool
        for (int x = 0; x < s; ++x)
            for (int y = x + 1; y < s; ++y) pair_list.emplace_back(x, y);
        std::vector<char> used(pair_list.size(), 0);

        std::size_t cursor = 0;
        for (const Node& delta : deltas[lev]) {
            while (cursor < pair_list.size() && used[cursor]) ++cursor;
            if (cursor >= pair_list.size()) throw codec_error("pair pool exhausted");
            auto p1 = pair_list[cursor];
            used[cursor] = 1;
            std::size_t second = cursor + 1;
            while (second < pair_list.size() &&
                   (used[second] || pair_list[second].first == p1.first ||
                    pair_list[second].first == p1.second ||
                    pair_list[second].second == p1.first ||
                    pair_list[second].second == p1.second))
                ++second;
            if (second >= pair_list.size()) throw codec_error("pair pool exhausted");
            auto p2 = pair_list[second];
            used[second] = 1;

            DiffQuad q;
            q.n_plus = pool[p1.first];
            q.m_plus = pool[p1.second];
            q.n_minus = pool[p2.first];
            q.m_minus = pool[p2.second];
            out.quads[delta] = q;
            long long dplus = q.m_plus - q.n_plus;
            long long dminus = q.m_minus - q.n_minus;
            if (!out.diff_index.emplace(dplus, std::make_pair(delta, true)).second ||
                !out.diff_index.emplace(dminus, std::make_pair(delta, false)).second)
                throw codec_error("difference reused");  // impossible under the doubling rule
        }
    }
    return out;
}

std::vector<CuspLabel> label_membership(const FinTree& scaffold, const FinTree& member_tree,
                                        const DiffAssignment& assignment) {
    structcore::validate_tree(scaffold);
    structcore::validate_tree(member_tree);
    for (const Node& n : member_tree.nodes)
        if (!scaffold.contains(n))
            throw std::invalid_argument("member tree is not inside the scaffold");
    std::vector<CuspLabel> out;
    for (const Node& n : scaffold.nodes) {
        auto it = assignment.quads.find(n);
        if (it == assignment.quads.end())
            throw std::invalid_argument("no quadruple for scaffold node " + node_to_string(n));
        const DiffQuad& q = it->second;
        if (member_tree.contains(n))
            out.push_back({n, q.m_plus, q.n_plus});
        else
            out.push_back({n, q.m_minus, q.n_minus});
    }
    return out;
}

FinTree cusp_decode(const std::vector<CuspLabel>& labels, const DiffAssignment& assignment) {
    std::vector<Node> members;
    for (const CuspLabel& lab : labels) {
        if (lab.m == lab.n) throw codec_error("degenerate label at " + node_to_string(lab.node));
        long long diff = lab.m - lab.n;
        auto it = assignment.diff_index.find(diff);
        if (it == assignment.diff_index.end())
            throw codec_error("unknown difference " + std::to_string(diff) + " at " +
                              node_to_string(lab.node));
        const auto& [delta, is_member] = it->second;
        const DiffQuad& q = assignment.quads.at(delta);
        long long want_m = is_member ? q.m_plus : q.m_minus;
        long long want_n = is_member ? q.n_plus : q.n_minus;
        if (lab.m != want_m || lab.n != want_n)
            throw codec_error("label values at " + node_to_string(lab.node) +
                              " do not match the assignment quadruple");
        if (delta.size() != lab.node.size())
            throw codec_error("label depth " + std::to_string(lab.node.size()) + " at " +
                              node_to_string(lab.node) + " disagrees with the difference level " +
                              std::to_string(delta.size()));
        if (is_member) members.push_back(lab.node);
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (members.empty()) throw codec_error("decoded member set is empty (root not a member)");
    // prefix closure check, then assemble
    FinTree t;
    t.nodes = members;
    try {
        structcore::validate_tree(t);
    } catch (const codec_error& e) {
        throw codec_error(std::string("member set is not a tree: ") + e.what());
    }
    return t;
}

}  // namespace deeptree
