#ifndef BORELCODER_JSON_IO_HPP
#define BORELCODER_JSON_IO_HPP

#include <json.hpp>

#include "deeptree.hpp"
#include "structcore.hpp"

// JSON interchange formats:
//   tree          {"nodes": [[...int]]}
//   colored tree  {"nodes": [...], "colors": {"<dotted node>": [int]}}
//   bipartite     {"left": [id], "right": [id], "edges": [[id,id]]}
//   structure     {"universe": u,
//                  "relations": {"name": {"arity": r, "tuples": [[...int]]}}}
//   assignment    {"pools": {"<level>": [ints]},
//                  "quads": {"<dotted delta>": {"plus": [n,m], "minus": [n,m]}}}

namespace json_io {

using nlohmann::json;

json to_json(const structcore::FinTree& t);
structcore::FinTree tree_from_json(const json& j);

json to_json(const structcore::ColoredTree& ct);
structcore::ColoredTree colored_tree_from_json(const json& j);

json to_json(const structcore::BipartiteGraph& g);
structcore::BipartiteGraph bipartite_from_json(const json& j);

json to_json(const structcore::RelStructure& m);
structcore::RelStructure structure_from_json(const json& j);

json to_json(const deeptree::DiffAssignment& a);
deeptree::DiffAssignment diff_assignment_from_json(const json& j);  // rebuilds and
                                                                    // re-checks the index

json load_file(const std::string& path);           // throws codec_error with position info
void save_file(const std::string& path, const json& j);

}  // namespace json_io

#endif
