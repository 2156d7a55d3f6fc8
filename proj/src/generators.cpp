#include "dowker/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

namespace dowker {

namespace fs = std::filesystem;

double SplitRng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform(), u2 = uniform();
  while (u1 == 0.0) u1 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

TemporalDigraph random_temporal(std::uint64_t seed, const RandomGraphConfig& cfg) {
  if (cfg.min_nodes < 2 || cfg.max_nodes < cfg.min_nodes || cfg.max_edges < cfg.min_edges)
    throw std::invalid_argument("random_temporal: bad config");
  SplitRng rng(seed);
  const NodeId n =
      cfg.min_nodes + static_cast<NodeId>(rng.bounded(cfg.max_nodes - cfg.min_nodes + 1));
  EdgeId target =
      cfg.min_edges + static_cast<EdgeId>(rng.bounded(cfg.max_edges - cfg.min_edges + 1));
  const std::uint64_t distinct = static_cast<std::uint64_t>(n) * (n - 1);
  if (target > distinct) target = static_cast<EdgeId>(distinct);

  TemporalDigraph g;
  g.node_count = n;
  std::set<std::pair<NodeId, NodeId>> seen;
  std::vector<NodeId> in_degree(n, 0);
  std::uint64_t attempts = 0;
  while (seen.size() < target && attempts < 200ull * target + 1000) {
    ++attempts;
    NodeId u = static_cast<NodeId>(rng.bounded(n));
    NodeId v = static_cast<NodeId>(rng.bounded(n));
    if (u == v || seen.count({u, v})) continue;
    if (cfg.max_in_degree && in_degree[v] >= *cfg.max_in_degree) continue;
    seen.insert({u, v});
    ++in_degree[v];
    g.edges.push_back({u, v, rng.uniform()});
  }
  if (g.edges.empty()) throw std::runtime_error("random_temporal: produced no edges");
  return g;
}

WeightedDigraph star_graph(const std::vector<double>& weights) {
  if (weights.empty()) throw std::invalid_argument("star_graph: no spokes");
  WeightedDigraph g;
  const NodeId hub = static_cast<NodeId>(weights.size());
  g.node_count = hub + 1;
  for (NodeId i = 0; i < hub; ++i) g.edges.push_back({i, hub, weights[i]});
  return g;
}

WeightedDigraph alternating_cycle(NodeId k, const std::vector<double>& weights) {
  if (k < 2) throw std::invalid_argument("alternating_cycle: need k >= 2");
  if (weights.size() != 2ull * k)
    throw std::invalid_argument("alternating_cycle: need 2k weights");
  WeightedDigraph g;
  g.node_count = 2 * k;
  for (NodeId i = 0; i < k; ++i) {
    g.edges.push_back({static_cast<NodeId>(2 * i), static_cast<NodeId>(2 * i + 1),
                       weights[2 * i]});
    g.edges.push_back({static_cast<NodeId>((2 * i + 2) % (2 * k)),
                       static_cast<NodeId>(2 * i + 1), weights[2 * i + 1]});
  }
  return g;
}

TemporalDigraph diffusion_tree(std::uint64_t seed, NodeId nodes) {
  if (nodes < 2) throw std::invalid_argument("diffusion_tree: need >= 2 nodes");
  SplitRng rng(seed);
  TemporalDigraph g;
  g.node_count = nodes;
  std::vector<double> reach(nodes, 0.0);
  for (NodeId child = 1; child < nodes; ++child) {
    NodeId parent = static_cast<NodeId>(rng.bounded(child));
    double t = reach[parent] + 0.05 + 0.95 * rng.uniform();
    reach[child] = t;
    g.edges.push_back({parent, child, t});
  }
  return g;
}

std::array<WeightedDigraph, 3> indistinguishable_triple() {
  auto mk = [](std::vector<WeightedEdge> edges) {
    WeightedDigraph g;
    g.node_count = 5;
    g.edges = std::move(edges);
    return g;
  };
  const double third = 1.0 / 3.0, two_thirds = 2.0 / 3.0;
  WeightedDigraph a = mk({{0, 1, 0.0}, {0, 2, third}, {1, 3, two_thirds}, {1, 4, 1.0}});
  WeightedDigraph b = mk({{0, 1, 0.0}, {0, 2, two_thirds}, {1, 3, third}, {1, 4, 1.0}});
  WeightedDigraph c = mk({{0, 1, 0.0}, {0, 2, third}, {3, 1, two_thirds}, {1, 4, 1.0}});
  return {a, b, c};
}

std::vector<TemporalDigraph> classification_dataset(std::uint64_t seed, std::size_t count) {
  std::vector<TemporalDigraph> out;
  out.reserve(count);
  SplitRng rng(seed);
  RandomGraphConfig dense;
  dense.min_nodes = 10;
  dense.max_nodes = 20;
  dense.min_edges = 15;
  dense.max_edges = 45;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t sub_seed = rng.raw();
    if (i % 2 == 1) {
      TemporalDigraph g = random_temporal(sub_seed, dense);
      g.label = 1;
      out.push_back(std::move(g));
    } else {
      NodeId n = 10 + static_cast<NodeId>(rng.bounded(11));  // 10..20 nodes
      TemporalDigraph g = diffusion_tree(sub_seed, n);
      g.label = 0;
      out.push_back(std::move(g));
    }
  }
  return out;
}

std::vector<TemporalDigraph> regression_dataset(std::uint64_t seed, std::size_t count,
                                                const RandomGraphConfig& cfg) {
  std::vector<TemporalDigraph> out;
  out.reserve(count);
  SplitRng rng(seed);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_temporal(rng.raw(), cfg));
  return out;
}

void write_dataset(const std::vector<TemporalDigraph>& graphs, const std::string& dir) {
  fs::create_directories(dir);
  bool any_label = false;
  std::string labels;
  char name[32];
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    std::snprintf(name, sizeof(name), "g%04zu", i);
    save_edge_list(graphs[i], (fs::path(dir) / (std::string(name) + ".tsv")).string());
    if (graphs[i].label) {
      any_label = true;
      labels += name;
      labels += '\t';
      labels += std::to_string(*graphs[i].label);
      labels += '\n';
    }
  }
  if (any_label) {
    std::ofstream out(fs::path(dir) / "labels.tsv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write labels.tsv in " + dir);
    out << labels;
  }
}

std::vector<TemporalDigraph> load_dataset(const std::string& dir) {
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".tsv" && entry.path().filename() != "labels.tsv")
      files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("no .tsv graphs in " + dir);
  const bool labeled = fs::exists(fs::path(dir) / "labels.tsv");
  std::vector<TemporalDigraph> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(load_edge_list(f, labeled));
  return out;
}

}  // namespace dowker
