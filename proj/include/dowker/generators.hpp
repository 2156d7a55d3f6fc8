/*
  Deterministic graph generators and dataset writing.

  All randomness comes from a seed through SplitRng, which maps the raw
  mt19937_64 stream to doubles and bounded ints itself, so outputs are
  identical across platforms and standard libraries.
*/
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dowker/temporal_graph.hpp"

namespace dowker {

class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  // Uniform in [0, 1) with 53 bits of mantissa.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform in {0, .., n-1}; modulo bias is negligible for n << 2^64.
  std::uint64_t bounded(std::uint64_t n) { return eng_() % n; }

  double normal();  // Box-Muller, one value per call

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[static_cast<std::size_t>(bounded(i))]);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

struct RandomGraphConfig {
  NodeId min_nodes = 10;
  NodeId max_nodes = 40;
  EdgeId min_edges = 20;
  EdgeId max_edges = 120;
  std::optional<NodeId> max_in_degree;
};

// Distinct ordered pairs with uniform times in (0, 1).
TemporalDigraph random_temporal(std::uint64_t seed, const RandomGraphConfig& cfg = {});

// Spokes 0..k-1 into hub k; weights[i] is the weight of spoke i.
WeightedDigraph star_graph(const std::vector<double>& weights);

// 2k nodes alternating source/sink around a cycle: edges 2i -> 2i+1 and
// 2i+2 -> 2i+1 (mod 2k). weights[j] is the weight of edge j (2k edges).
WeightedDigraph alternating_cycle(NodeId k, const std::vector<double>& weights);

// Random tree edges parent -> child with times increasing along root paths.
TemporalDigraph diffusion_tree(std::uint64_t seed, NodeId nodes);

// Three 5-node graphs with one shared symmetric PD0 whose directed sink
// diagrams are pairwise distinct: a baseline branching graph, a timestamp
// swap, and an edge reversal.
std::array<WeightedDigraph, 3> indistinguishable_triple();

// count graphs, labels 0 (diffusion tree) / 1 (random temporal digraph),
// with randomized sizes and times.
std::vector<TemporalDigraph> classification_dataset(std::uint64_t seed, std::size_t count);

// Unlabeled random graphs for regression-style training.
std::vector<TemporalDigraph> regression_dataset(std::uint64_t seed, std::size_t count,
                                                const RandomGraphConfig& cfg);

// Writes g0000.tsv.. plus a labels.tsv sidecar for labeled graphs.
void write_dataset(const std::vector<TemporalDigraph>& graphs, const std::string& dir);

std::vector<TemporalDigraph> load_dataset(const std::string& dir);

}  // namespace dowker
