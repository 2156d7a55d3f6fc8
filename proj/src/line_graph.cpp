#include "dowker/line_graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace dowker {

const char* kind_name(DowkerKind kind) {
  return kind == DowkerKind::source ? "source" : "sink";
}

std::size_t LineGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& nbrs : adjacency) twice += nbrs.size();
  return twice / 2;
}

namespace {

// Edges sharing an endpoint form a clique; groups are disjoint because the
// shared endpoint determines the group, so no pair is emitted twice.
LineGraph clique_by_endpoint(const WeightedDigraph& g, DowkerKind kind) {
  LineGraph lg;
  lg.kind = kind;
  lg.adjacency.resize(g.edges.size());
  lg.node_weight.reserve(g.edges.size());
  for (const auto& e : g.edges) lg.node_weight.push_back(e.weight);

  std::vector<std::vector<EdgeId>> groups(g.node_count);
  for (EdgeId i = 0; i < g.edge_count(); ++i) {
    NodeId shared = kind == DowkerKind::source ? g.edges[i].source : g.edges[i].target;
    groups[shared].push_back(i);
  }
  for (const auto& group : groups) {
    for (std::size_t a = 0; a + 1 < group.size(); ++a) {
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        lg.adjacency[group[a]].push_back(group[b]);
        lg.adjacency[group[b]].push_back(group[a]);
      }
    }
  }
  for (auto& nbrs : lg.adjacency) std::sort(nbrs.begin(), nbrs.end());
  return lg;
}

}  // namespace

LineGraphPair build_line_graphs(const WeightedDigraph& g) {
  if (g.edges.empty()) throw std::invalid_argument("build_line_graphs: empty graph");
  return {clique_by_endpoint(g, DowkerKind::source),
          clique_by_endpoint(g, DowkerKind::sink)};
}

LineGraphStats line_graph_stats(const LineGraph& lg) {
  LineGraphStats s;
  s.nodes = lg.node_count();
  s.edges = lg.edge_count();
  for (const auto& nbrs : lg.adjacency) s.max_degree = std::max(s.max_degree, nbrs.size());
  return s;
}

}  // namespace dowker
