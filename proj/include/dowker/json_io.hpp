/*
  JSON serialization of the library's value types.

  Persistence diagrams serialize as {dim, points: [[birth, death|"inf"]]},
  edge maps as an object keyed by edge id, line graphs and skeletons as
  documented per type. nlohmann::json keeps object keys ordered, so every
  export is byte-stable for identical inputs.
*/
#pragma once

#include <string>

#include "json.hpp"

#include "dowker/line_graph.hpp"
#include "dowker/persistence.hpp"
#include "dowker/skeleton.hpp"

namespace dowker {

using json = nlohmann::ordered_json;

// {dim, points: [[birth, death|"inf"], ...]} in the diagram's stored order.
json pd_to_json(const PersistenceDiagram& d, int dim);
PersistenceDiagram pd_from_json(const json& j);

// {"<edge id>": {class, birth, death|"inf"}, ...}, keys in numeric order.
json edge_map_to_json(const EdgePointMap& m);

// {kind, nodes: [{id, weight}, ...], edges: [[a, b], ...]} with a < b.
json line_graph_to_json(const LineGraph& lg);

// {kind, simplices: [{v: [...], value, dim}, ...]} in filtration order.
json skeleton_to_json(const DowkerSkeleton& sk);

json wdist_record(const std::string& a, const std::string& b, int dim, double wd);

json read_json_file(const std::string& path);

// Writes to the path, or to stdout when path is empty; always '\n'-terminated.
void write_text(const std::string& path, const std::string& text);

}  // namespace dowker
