#include "json_io.hpp"

#include <fstream>

namespace json_io {

using structcore::codec_error;

json to_json(const structcore::FinTree& t) {
    json j;
    j["nodes"] = t.nodes;
    return j;
}

structcore::FinTree tree_from_json(const json& j) {
    if (!j.contains("nodes") || !j["nodes"].is_array())
        throw codec_error("tree JSON must have a 'nodes' array");
    std::vector<structcore::Node> ns;
    for (const auto& e : j["nodes"]) ns.push_back(e.get<structcore::Node>());
    return structcore::FinTree::from_nodes(std::move(ns));
}

json to_json(const structcore::ColoredTree& ct) {
    json j = to_json(ct.tree);
    json cols = json::object();
    for (const auto& [n, cs] : ct.colors)
        if (!cs.empty()) cols[structcore::node_to_string(n)] = cs;
    j["colors"] = cols;
    return j;
}

structcore::ColoredTree colored_tree_from_json(const json& j) {
    structcore::ColoredTree ct;
    ct.tree = tree_from_json(j);
    if (j.contains("colors")) {
        for (const auto& [key, val] : j["colors"].items()) {
            auto node = structcore::node_from_string(key);
            auto cs = val.get<std::vector<int>>();
            std::sort(cs.begin(), cs.end());
            cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
            ct.colors[node] = std::move(cs);
        }
    }
    structcore::validate_colored_tree(ct);
    return ct;
}

json to_json(const structcore::BipartiteGraph& g) {
    json j;
    j["left"] = g.left;
    j["right"] = g.right;
    json edges = json::array();
    for (const auto& [l, r] : g.edges) edges.push_back({l, r});
    j["edges"] = edges;
    return j;
}

structcore::BipartiteGraph bipartite_from_json(const json& j) {
    for (const char* key : {"left", "right", "edges"})
        if (!j.contains(key)) throw codec_error(std::string("bipartite JSON missing '") + key + "'");
    std::vector<int> l = j["left"].get<std::vector<int>>();
    std::vector<int> r = j["right"].get<std::vector<int>>();
    std::vector<std::pair<int, int>> e;
    for (const auto& ed : j["edges"]) {
        if (!ed.is_array() || ed.size() != 2) throw codec_error("edge must be a pair");
        e.emplace_back(ed[0].get<int>(), ed[1].get<int>());
    }
    return structcore::BipartiteGraph::make(std::move(l), std::move(r), std::move(e));
}

json to_json(const structcore::RelStructure& m) {
    json j;
    j["universe"] = m.universe;
    json rels = json::object();
    for (const auto& [name, rel] : m.relations) {
        json r;
        r["arity"] = rel.arity;
        r["tuples"] = rel.tuples;
        rels[name] = r;
    }
    j["relations"] = rels;
    return j;
}

structcore::RelStructure structure_from_json(const json& j) {
    structcore::RelStructure m;
    if (!j.contains("universe")) throw codec_error("structure JSON missing 'universe'");
    m.universe = j["universe"].get<int>();
    if (j.contains("relations")) {
        for (const auto& [name, rj] : j["relations"].items()) {
            structcore::Relation rel;
            rel.arity = rj["arity"].get<int>();
            for (const auto& t : rj["tuples"]) rel.tuples.push_back(t.get<std::vector<int>>());
            std::sort(rel.tuples.begin(), rel.tuples.end());
            rel.tuples.erase(std::unique(rel.tuples.begin(), rel.tuples.end()), rel.tuples.end());
            m.relations.emplace_back(name, std::move(rel));
        }
        std::sort(m.relations.begin(), m.relations.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    }
    structcore::validate_structure(m);
    return m;
}

json to_json(const deeptree::DiffAssignment& a) {
    json pools = json::object();
    for (const auto& [level, vals] : a.pools) pools[std::to_string(level)] = vals;
    json quads = json::object();
    for (const auto& [delta, q] : a.quads) {
        json e;
        e["plus"] = {q.n_plus, q.m_plus};
        e["minus"] = {q.n_minus, q.m_minus};
        quads[structcore::node_to_string(delta)] = e;
    }
    return {{"pools", pools}, {"quads", quads}};
}

deeptree::DiffAssignment diff_assignment_from_json(const json& j) {
    deeptree::DiffAssignment a;
    if (j.contains("pools"))
        for (const auto& [level, vals] : j["pools"].items())
            a.pools[std::stoi(level)] = vals.get<std::vector<long long>>();
    if (!j.contains("quads")) throw codec_error("assignment JSON missing 'quads'");
    for (const auto& [key, e] : j["quads"].items()) {
        auto delta = structcore::node_from_string(key);
        deeptree::DiffQuad q;
        q.n_plus = e["plus"][0].get<long long>();
        q.m_plus = e["plus"][1].get<long long>();
        q.n_minus = e["minus"][0].get<long long>();
        q.m_minus = e["minus"][1].get<long long>();
        if (q.n_plus >= q.m_plus || q.n_minus >= q.m_minus)
            throw codec_error("quadruple at '" + key + "' is not ordered");
        a.quads[delta] = q;
        if (!a.diff_index.emplace(q.m_plus - q.n_plus, std::make_pair(delta, true)).second ||
            !a.diff_index.emplace(q.m_minus - q.n_minus, std::make_pair(delta, false)).second)
            throw codec_error("assignment reuses a difference at '" + key + "'");
    }
    return a;
}

json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw codec_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw codec_error("parse error in " + path + ": " + e.what());
    }
}

void save_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw codec_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace json_io
