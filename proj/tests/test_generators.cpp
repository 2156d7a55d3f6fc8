#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "dowker/generators.hpp"

using namespace dowker;

TEST_SUITE("generators") {

TEST_CASE("split rng is deterministic and in range") {
  SplitRng a(42), b(42), c(43);
  bool same = true, differ = false, ranged = true;
  for (int i = 0; i < 200; ++i) {
    const double ua = a.uniform();
    same = same && ua == b.uniform();
    differ = differ || ua != c.uniform();
    ranged = ranged && ua >= 0.0 && ua < 1.0;
    ranged = ranged && a.bounded(7) < 7 && b.bounded(7) < 7 && c.bounded(7) < 7;
  }
  CHECK(same);
  CHECK(differ);
  CHECK(ranged);

  std::vector<int> v = {1, 2, 3, 4, 5, 6};
  std::vector<int> w = v;
  SplitRng s1(9), s2(9);
  s1.shuffle(v);
  s2.shuffle(w);
  CHECK(v == w);
  std::sort(v.begin(), v.end());
  CHECK(v == std::vector<int>{1, 2, 3, 4, 5, 6});
}

TEST_CASE("random temporal graphs respect their bounds") {
  RandomGraphConfig cfg;
  cfg.min_nodes = 10;
  cfg.max_nodes = 20;
  cfg.min_edges = 15;
  cfg.max_edges = 40;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    TemporalDigraph g = random_temporal(seed, cfg);
    CHECK(g.node_count >= 10);
    CHECK(g.node_count <= 20);
    CHECK(g.edges.size() <= 40);
    CHECK(!g.edges.empty());
    std::set<std::pair<NodeId, NodeId>> pairs;
    for (const TemporalEdge& e : g.edges) {
      CHECK(e.source != e.target);
      CHECK(e.source < g.node_count);
      CHECK(e.target < g.node_count);
      CHECK(e.time >= 0.0);
      CHECK(e.time < 1.0);
      CHECK(pairs.insert({e.source, e.target}).second);
    }
  }
  CHECK(format_edge_list(random_temporal(4, cfg)) ==
        format_edge_list(random_temporal(4, cfg)));
}

TEST_CASE("in-degree cap holds") {
  RandomGraphConfig cfg;
  cfg.min_nodes = 12;
  cfg.max_nodes = 12;
  cfg.min_edges = 40;
  cfg.max_edges = 60;
  cfg.max_in_degree = 3;
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    TemporalDigraph g = random_temporal(seed, cfg);
    std::vector<int> in_deg(g.node_count, 0);
    for (const TemporalEdge& e : g.edges) ++in_deg[e.target];
    CHECK(*std::max_element(in_deg.begin(), in_deg.end()) <= 3);
  }
}

TEST_CASE("diffusion trees spread forward in time") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TemporalDigraph g = diffusion_tree(seed, 15);
    CHECK(g.node_count == 15);
    REQUIRE(g.edges.size() == 14);
    // Edge i reaches node i + 1; children always fire after their parent.
    std::vector<double> reach(15, 0.0);
    std::vector<bool> covered(15, false);
    covered[0] = true;
    for (const TemporalEdge& e : g.edges) {
      CHECK(covered[e.source]);  // parents precede children
      CHECK(!covered[e.target]);
      covered[e.target] = true;
      CHECK(e.time > reach[e.source]);
      reach[e.target] = e.time;
    }
    CHECK(std::all_of(covered.begin(), covered.end(), [](bool b) { return b; }));
  }
  CHECK_THROWS_AS(diffusion_tree(0, 1), std::invalid_argument);
}

TEST_CASE("fixture generators have the documented shapes") {
  WeightedDigraph star = star_graph({0.4, 0.2});
  CHECK(star.node_count == 3);
  REQUIRE(star.edges.size() == 2);
  CHECK(star.edges[0].source == 0);
  CHECK(star.edges[0].target == 2);
  CHECK(star.edges[1].weight == 0.2);

  WeightedDigraph cyc = alternating_cycle(3, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
  CHECK(cyc.node_count == 6);
  CHECK(cyc.edges.size() == 6);
  for (const WeightedEdge& e : cyc.edges) CHECK(e.target % 2 == 1);
  CHECK_THROWS_AS(alternating_cycle(1, {0.1, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(alternating_cycle(2, {0.1}), std::invalid_argument);

  auto triple = indistinguishable_triple();
  for (const WeightedDigraph& g : triple) {
    CHECK(g.node_count == 5);
    CHECK(g.edges.size() == 4);
  }
}

TEST_CASE("classification dataset alternates labeled classes") {
  auto data = classification_dataset(77, 12);
  REQUIRE(data.size() == 12);
  for (std::size_t i = 0; i < data.size(); ++i) {
    REQUIRE(data[i].label.has_value());
    CHECK(*data[i].label == static_cast<int>(i % 2));
    CHECK(data[i].node_count >= 10);
    CHECK(data[i].node_count <= 20);
    if (i % 2 == 0) CHECK(data[i].edges.size() == data[i].node_count - 1u);
  }
  auto again = classification_dataset(77, 12);
  CHECK(again[3].edges.size() == data[3].edges.size());
}

TEST_CASE("regression dataset is unlabeled and seeded") {
  RandomGraphConfig cfg;
  cfg.min_nodes = 6;
  cfg.max_nodes = 9;
  cfg.min_edges = 8;
  cfg.max_edges = 14;
  auto data = regression_dataset(5, 6, cfg);
  REQUIRE(data.size() == 6);
  for (const TemporalDigraph& g : data) CHECK(!g.label.has_value());
  auto again = regression_dataset(5, 6, cfg);
  CHECK(again[2].edges.size() == data[2].edges.size());
}

}  // TEST_SUITE
