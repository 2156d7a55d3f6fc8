/*
  Temporal digraph ingestion and normalization.

  A TemporalDigraph is the raw input: directed edges with real timestamps,
  densely re-indexed node ids, no self-loops, at most one edge per ordered
  (source, target) pair (duplicates collapse to the earliest time).
  normalize_weights maps timestamps affinely onto [0, 1] filtration weights.
*/
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dowker {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

struct TemporalEdge {
  NodeId source = 0;
  NodeId target = 0;
  double time = 0.0;
};

struct TemporalDigraph {
  NodeId node_count = 0;
  std::vector<TemporalEdge> edges;
  std::optional<int> label;
};

struct WeightedEdge {
  NodeId source = 0;
  NodeId target = 0;
  double weight = 0.0;  // filtration value in [0, 1]
};

// Edge ids are positions in `edges`, dense and stable.
struct WeightedDigraph {
  NodeId node_count = 0;
  std::vector<WeightedEdge> edges;
  std::optional<int> label;

  EdgeId edge_count() const { return static_cast<EdgeId>(edges.size()); }
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads whitespace-separated "source target time" lines; '#' starts a comment.
// Node ids are re-indexed densely in ascending raw-id order (self-loop
// endpoints still count as seen). Self-loops are dropped, duplicate ordered
// pairs collapse to their minimum time. With has_labels set, looks up the
// file's stem in a "labels.tsv" sidecar next to it.
TemporalDigraph load_edge_list(const std::string& path, bool has_labels = false);

// Parses from an already-read buffer; `name` is used in error messages.
TemporalDigraph parse_edge_list(const std::string& text, const std::string& name);

// Writes the same text format back; re-ingesting reproduces the graph exactly.
std::string format_edge_list(const TemporalDigraph& g);
void save_edge_list(const TemporalDigraph& g, const std::string& path);

// weight = (t - t_min) / (t_max - t_min); all zeros when t_max == t_min.
WeightedDigraph normalize_weights(const TemporalDigraph& g);

// Treats edge times as filtration weights directly; they must lie in [0, 1].
WeightedDigraph as_weighted(const TemporalDigraph& g);

// Edge reversal; swaps the Dowker source/sink roles.
WeightedDigraph transpose(const WeightedDigraph& g);

}  // namespace dowker
