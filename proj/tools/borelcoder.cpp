// Command-line front end: encode/decode between structures, colored trees,
// trees and bipartite graph codes; generate seeded corpora; run the
// verification suites.  All I/O uses the JSON formats of the library.

#include <CLI11.hpp>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <thread>

#include <fstream>

#include "deeptree.hpp"
#include "generators.hpp"
#include "graphcode.hpp"
#include "json_io.hpp"
#include "packing.hpp"
#include "structcore.hpp"
#include "treecode.hpp"
#include "verify.hpp"

using json = nlohmann::json;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitConfig = 3;

int thread_cap() {
    const char* env = std::getenv("BORELCODER_THREADS");
    if (!env) return 1;
    int v = std::atoi(env);
    return v < 1 ? 1 : v;
}

std::vector<verify::SuiteReport> run_suites(
    std::vector<std::function<verify::SuiteReport()>> jobs) {
    const int cap = std::min<int>(thread_cap(), static_cast<int>(jobs.size()));
    std::vector<verify::SuiteReport> out(jobs.size());
    if (cap <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) out[i] = jobs[i]();
        return out;
    }
    std::vector<std::thread> pool;
    std::size_t next = 0;
    std::mutex mu;
    for (int t = 0; t < cap; ++t)
        pool.emplace_back([&] {
            while (true) {
                std::size_t mine;
                {
                    std::lock_guard<std::mutex> lock(mu);
                    if (next >= jobs.size()) return;
                    mine = next++;
                }
                out[mine] = jobs[mine]();
            }
        });
    for (auto& th : pool) th.join();
    return out;
}

json merged_report(const std::string& name, const json& config,
                   const std::vector<verify::SuiteReport>& reports) {
    json failures = json::array();
    json notes = json::array();
    int cases = 0;
    for (const auto& rep : reports) {
        cases += static_cast<int>(rep.cases.size());
        for (const auto& c : rep.cases) {
            if (!c.pass)
                failures.push_back({{"case", rep.suite + "/" + c.id}, {"detail", c.detail}});
            else if (!c.detail.empty())
                notes.push_back({{"case", rep.suite + "/" + c.id}, {"note", c.detail}});
        }
    }
    auto by_case = [](const json& a, const json& b) { return a["case"] < b["case"]; };
    std::sort(failures.begin(), failures.end(), by_case);
    std::sort(notes.begin(), notes.end(), by_case);
    json out = {{"suite", name}, {"config", config}, {"cases", cases}, {"failures", failures}};
    if (!notes.empty()) out["notes"] = notes;
    return out;
}

struct EncodeOpts {
    std::string kind, in, out, manifest;
    std::string variant = "paired";
    int m = 1;
    std::vector<int> scales;
    int horizon = 0;  // 0: computed minimal
    int depth = 2;
    std::uint64_t seed = 0;
};

json graph_code_json(const graphcode::GraphCode& code) {
    json j = json_io::to_json(code.graph);
    j["m"] = code.m;
    j["variant"] = graphcode::variant_name(code.variant);
    json blocks = json::object();
    for (const auto& [node, blk] : code.blocks)
        blocks[structcore::node_to_string(node)] = blk;
    j["blocks"] = blocks;
    return j;
}

int cmd_encode(const EncodeOpts& o) {
    json input = json_io::load_file(o.in);
    treecode::PairingFn phi;
    json manifest;
    manifest["kind"] = o.kind;
    manifest["pairing"] = phi.name();
    manifest["marker"] = treecode::kMarkerColor;
    manifest["variant"] = o.variant;

    structcore::FinTree plain_tree;
    if (o.kind == "structure") {
        auto m = json_io::structure_from_json(input);
        auto ct = treecode::encode_structure(m, o.depth, phi);
        int horizon = o.horizon ? o.horizon : treecode::minimal_horizon(ct, phi).depth;
        plain_tree = treecode::encode_colored_tree(ct, phi, {horizon});
        manifest["depth"] = o.depth;
        manifest["horizon"] = horizon;
        json sig = json::object();
        for (const auto& [name, rel] : m.relations) sig[name] = rel.arity;
        manifest["signature"] = sig;
    } else if (o.kind == "colored-tree") {
        auto ct = json_io::colored_tree_from_json(input);
        int horizon = o.horizon ? o.horizon : treecode::minimal_horizon(ct, phi).depth;
        plain_tree = treecode::encode_colored_tree(ct, phi, {horizon});
        manifest["horizon"] = horizon;
        json_io::save_file(o.out, json_io::to_json(plain_tree));
        json_io::save_file(o.manifest, manifest);
        return 0;
    } else if (o.kind == "tree") {
        plain_tree = json_io::tree_from_json(input);
    } else {
        std::cerr << "unknown kind '" << o.kind << "'\n";
        return kExitConfig;
    }

    auto variant = graphcode::variant_from_name(o.variant);
    if (!o.scales.empty()) {
        graphcode::ScaleSequence sc{o.scales};
        auto g = graphcode::build_multiscale(plain_tree, sc, variant);
        manifest["scales"] = o.scales;
        json_io::save_file(o.out, json_io::to_json(g));
    } else {
        auto code = graphcode::build_code(plain_tree, o.m, variant);
        manifest["m"] = o.m;
        json_io::save_file(o.out, graph_code_json(code));
    }
    json_io::save_file(o.manifest, manifest);
    return 0;
}

struct DecodeOpts {
    std::string kind, in, out, manifest;
    int m = 0;
};

int cmd_decode(const DecodeOpts& o) {
    json input = json_io::load_file(o.in);
    json manifest;
    if (!o.manifest.empty()) manifest = json_io::load_file(o.manifest);
    treecode::PairingFn phi;

    if (o.kind == "colored-tree") {
        // plain tree -> colored tree; horizon comes from the manifest
        auto t = json_io::tree_from_json(input);
        if (!manifest.contains("horizon")) {
            std::cerr << "decoding a colored tree requires a manifest with 'horizon'\n";
            return kExitConfig;
        }
        auto ct = treecode::decode_colored_tree(t, phi, {manifest["horizon"].get<int>()});
        json_io::save_file(o.out, json_io::to_json(ct));
        return 0;
    }

    auto g = json_io::bipartite_from_json(input);
    structcore::FinTree tree;
    if (manifest.contains("scales")) {
        graphcode::ScaleSequence sc{manifest["scales"].get<std::vector<int>>()};
        tree = graphcode::decode_multiscale(g, sc);
    } else {
        int m = o.m;
        if (m == 0 && manifest.contains("m")) m = manifest["m"].get<int>();
        if (m == 0 && input.contains("m")) m = input["m"].get<int>();
        if (m == 0) {
            std::cerr << "supply --m or a manifest naming the scale\n";
            return kExitConfig;
        }
        tree = graphcode::decode_tree_from_code(g, m);
    }
    if (o.kind == "tree") {
        json_io::save_file(o.out, json_io::to_json(tree));
        return 0;
    }
    if (o.kind == "structure") {
        for (const char* key : {"horizon", "signature", "depth"})
            if (!manifest.contains(key)) {
                std::cerr << "structure decoding requires a manifest with '" << key << "'\n";
                return kExitConfig;
            }
        auto ct = treecode::decode_colored_tree(tree, phi, {manifest["horizon"].get<int>()});
        structcore::RelStructure sig;
        sig.universe = 0;
        for (const auto& [name, arity] : manifest["signature"].items())
            sig.relations.emplace_back(name, structcore::Relation{arity.get<int>(), {}});
        std::sort(sig.relations.begin(), sig.relations.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        auto m = treecode::decode_structure(ct, sig, phi);
        json_io::save_file(o.out, json_io::to_json(m));
        return 0;
    }
    std::cerr << "unknown kind '" << o.kind << "'\n";
    return kExitConfig;
}

struct GenOpts {
    std::string kind, out;
    int nodes = 6;
    int depth = 2;
    int width = 3;
    std::uint64_t seed = 1;
};

int cmd_gen(const GenOpts& o) {
    generators::Rng rng(o.seed);
    json j;
    if (o.kind == "tree") {
        j = json_io::to_json(generators::random_tree(o.nodes, rng));
    } else if (o.kind == "colored-tree") {
        j = json_io::to_json(generators::random_colored_tree(o.nodes, 3, 8, rng));
    } else if (o.kind == "structure") {
        j = json_io::to_json(generators::random_digraph(o.nodes, rng));
    } else if (o.kind == "graph") {
        j = json_io::to_json(generators::random_bipartite(o.nodes, o.nodes, 50, rng));
    } else if (o.kind == "diffs") {
        j = json_io::to_json(deeptree::assign_diffs(o.depth, o.width));
    } else {
        std::cerr << "unknown kind '" << o.kind << "'\n";
        return kExitConfig;
    }
    json_io::save_file(o.out, j);
    return 0;
}

struct TablesOpts {
    std::string kind = "estar";
    std::string out;
    int max = 12;
};

int cmd_tables(const TablesOpts& o) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!o.out.empty()) {
        file.open(o.out);
        if (!file) {
            std::cerr << "cannot write " << o.out << "\n";
            return kExitConfig;
        }
        os = &file;
    }
    if (o.kind == "estar") {
        *os << "c,e_star\n";
        for (int c = 0; c <= o.max; ++c) *os << c << "," << packing::e_star(c) << "\n";
        return 0;
    }
    if (o.kind == "pairbound") {
        *os << "c,d,f\n";
        for (int c = 0; c <= o.max; ++c)
            for (int d = 0; d <= o.max; ++d)
                *os << c << "," << d << "," << packing::pair_bound_f(c, d) << "\n";
        return 0;
    }
    std::cerr << "unknown table '" << o.kind << "'\n";
    return kExitConfig;
}

struct VerifyOpts {
    std::string suite, out;
    int max_nodes = 4;
    int m = 1;
    int samples = 20;
    std::uint64_t seed = 1;
    std::vector<int> scales = {1, 8};
};

int cmd_verify(const VerifyOpts& o) {
    std::vector<std::function<verify::SuiteReport()>> jobs;
    json config = {{"suite", o.suite}, {"max_nodes", o.max_nodes}, {"m", o.m},
                   {"samples", o.samples}, {"seed", o.seed}, {"scales", o.scales}};
    if (o.suite == "roundtrip") {
        jobs = {
            [&] {
                return verify::graph_roundtrip(std::min(o.max_nodes, 5), o.samples, 10,
                                               {1, 2}, o.seed);
            },
            [&] { return verify::structure_roundtrips(o.samples, o.samples, o.samples / 2,
                                                      o.seed); },
            [&] { return verify::multiscale(o.scales, o.samples, 8, o.seed); },
        };
    } else if (o.suite == "packing") {
        jobs = {
            [] { return verify::packing_extremal(7); },
            [] { return verify::packing_pair_bound(3, 8); },
            [] { return verify::packing_thresholds(3); },
            [&] { return verify::dense_extraction(o.samples, o.seed); },
        };
    } else if (o.suite == "blocks") {
        jobs = {
            [&] { return verify::block_facts(o.max_nodes, {1, 2}); },
            [&] { return verify::block_enumeration(o.max_nodes, o.m); },
        };
    } else if (o.suite == "cusps") {
        jobs = {[&] { return verify::cusp_layer(3, 4, o.samples, o.seed); }};
    } else if (o.suite == "ef") {
        jobs = {[&] { return verify::ef_agreement(o.samples, o.seed); }};
    } else {
        std::cerr << "unknown suite '" << o.suite << "'\n";
        return kExitConfig;
    }
    auto reports = run_suites(std::move(jobs));
    json report = merged_report(o.suite, config, reports);
    std::cout << report.dump(2) << "\n";
    if (!o.out.empty()) json_io::save_file(o.out, report);
    return report["failures"].empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"combinatorial coding toolkit: trees, colored trees, bipartite graph codes"};
    app.require_subcommand(1);

    EncodeOpts eo;
    auto* enc = app.add_subcommand("encode", "encode an object into the next stage");
    enc->add_option("--kind", eo.kind, "structure | colored-tree | tree")->required();
    enc->add_option("--in", eo.in, "input JSON path")->required();
    enc->add_option("--out", eo.out, "output JSON path")->required();
    enc->add_option("--manifest", eo.manifest, "manifest path (default <out>.manifest.json)");
    enc->add_option("--variant", eo.variant, "paper | paired (default paired)");
    enc->add_option("--m", eo.m, "block parameter (default 1)");
    enc->add_option("--scales", eo.scales, "multiscale block parameters")->delimiter(',');
    enc->add_option("--horizon", eo.horizon, "depth horizon (default: minimal valid)");
    enc->add_option("--depth", eo.depth, "tuple depth for structure encoding (default 2)");
    enc->add_option("--seed", eo.seed, "seed recorded in the manifest");

    DecodeOpts dopts;
    auto* dec = app.add_subcommand("decode", "decode an object back");
    dec->add_option("--kind", dopts.kind, "structure | colored-tree | tree")->required();
    dec->add_option("--in", dopts.in, "input JSON path")->required();
    dec->add_option("--out", dopts.out, "output JSON path")->required();
    dec->add_option("--manifest", dopts.manifest, "manifest path");
    dec->add_option("--m", dopts.m, "block parameter when no manifest is given");

    GenOpts go;
    auto* gen = app.add_subcommand("gen", "generate a random input or an assignment");
    gen->add_option("--kind", go.kind, "tree | colored-tree | structure | graph | diffs")
        ->required();
    gen->add_option("--out", go.out, "output JSON path")->required();
    gen->add_option("--nodes", go.nodes, "size parameter (default 6)");
    gen->add_option("--depth", go.depth, "assignment depth bound (default 2)");
    gen->add_option("--width", go.width, "assignment branching width (default 3)");
    gen->add_option("--seed", go.seed, "random seed (default 1)");

    TablesOpts to;
    auto* tab = app.add_subcommand("tables", "emit bound tables as CSV");
    tab->add_option("--kind", to.kind, "estar | pairbound (default estar)");
    tab->add_option("--max", to.max, "largest argument (default 12)");
    tab->add_option("--out", to.out, "CSV path (default stdout)");

    VerifyOpts vo;
    auto* ver = app.add_subcommand("verify", "run a verification suite");
    ver->add_option("suite", vo.suite, "roundtrip | packing | blocks | cusps | ef")->required();
    ver->add_option("--max-nodes", vo.max_nodes, "tree size cap (default 4)");
    ver->add_option("--m", vo.m, "block parameter (default 1)");
    ver->add_option("--samples", vo.samples, "random sample count (default 20)");
    ver->add_option("--seed", vo.seed, "random seed (default 1)");
    ver->add_option("--scales", vo.scales, "multiscale parameters (default 1,8)")->delimiter(',');
    ver->add_option("--out", vo.out, "also write the JSON report here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (enc->parsed()) {
            if (eo.manifest.empty()) eo.manifest = eo.out + ".manifest.json";
            return cmd_encode(eo);
        }
        if (dec->parsed()) return cmd_decode(dopts);
        if (gen->parsed()) return cmd_gen(go);
        if (tab->parsed()) return cmd_tables(to);
        if (ver->parsed()) return cmd_verify(vo);
    } catch (const structcore::codec_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        // malformed input files are parse failures; everything else is config
        return std::string(e.what()).find("parse error") != std::string::npos ? kExitParse
                                                                              : kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
