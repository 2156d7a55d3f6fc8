/*
  Source and sink line graphs of a weighted digraph.

  Line-graph nodes are the original edge ids. Two edges are adjacent in the
  source line graph when they leave the same node, and in the sink line graph
  when they enter the same node. Both graphs are undirected and share the same
  node set; each node carries its original edge's filtration weight.
*/
#pragma once

#include <cstddef>
#include <vector>

#include "dowker/temporal_graph.hpp"

namespace dowker {

enum class DowkerKind { source, sink };

const char* kind_name(DowkerKind kind);

struct LineGraph {
  DowkerKind kind = DowkerKind::source;
  std::vector<std::vector<EdgeId>> adjacency;  // sorted, symmetric, no self
  std::vector<double> node_weight;             // per line-graph node (= edge)

  std::size_t node_count() const { return adjacency.size(); }
  std::size_t edge_count() const;
};

struct LineGraphPair {
  LineGraph source;
  LineGraph sink;
};

LineGraphPair build_line_graphs(const WeightedDigraph& g);

struct LineGraphStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t max_degree = 0;
};

LineGraphStats line_graph_stats(const LineGraph& lg);

}  // namespace dowker
