#include <algorithm>

#include "doctest.h"
#include "dowker/generators.hpp"
#include "dowker/line_graph.hpp"

using namespace dowker;

TEST_SUITE("line_graph") {

TEST_CASE("star: spokes form a sink clique and a source antichain") {
  WeightedDigraph g = star_graph({0.1, 0.2, 0.3});
  LineGraphPair lg = build_line_graphs(g);

  CHECK(lg.sink.node_count() == 3);
  CHECK(lg.source.node_count() == 3);
  CHECK(lg.sink.edge_count() == 3);    // triangle on the three spokes
  CHECK(lg.source.edge_count() == 0);  // no two spokes share a source
  CHECK(lg.sink.adjacency[0] == std::vector<EdgeId>{1, 2});
  CHECK(lg.sink.node_weight == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(lg.source.node_weight == std::vector<double>{0.1, 0.2, 0.3});
}

TEST_CASE("shared sources and targets are tracked separately") {
  // e0 = 0->1, e1 = 0->2 share a source; e0, e2 = 3->1 share a target.
  WeightedDigraph g;
  g.node_count = 4;
  g.edges = {{0, 1, 0.1}, {0, 2, 0.2}, {3, 1, 0.3}};
  LineGraphPair lg = build_line_graphs(g);
  CHECK(lg.source.adjacency[0] == std::vector<EdgeId>{1});
  CHECK(lg.source.adjacency[2].empty());
  CHECK(lg.sink.adjacency[0] == std::vector<EdgeId>{2});
  CHECK(lg.sink.adjacency[1].empty());
}

TEST_CASE("adjacency is symmetric, sorted, and loop-free") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    TemporalDigraph tg = random_temporal(seed, {5, 15, 10, 40, {}});
    WeightedDigraph g = normalize_weights(tg);
    LineGraphPair both = build_line_graphs(g);
    for (const LineGraph* lg : {&both.source, &both.sink}) {
      REQUIRE(lg->node_count() == g.edges.size());
      for (EdgeId u = 0; u < lg->adjacency.size(); ++u) {
        const auto& nbrs = lg->adjacency[u];
        CHECK(std::is_sorted(nbrs.begin(), nbrs.end()));
        CHECK(std::adjacent_find(nbrs.begin(), nbrs.end()) == nbrs.end());
        for (EdgeId v : nbrs) {
          CHECK(v != u);
          const auto& back = lg->adjacency[v];
          CHECK(std::binary_search(back.begin(), back.end(), u));
        }
      }
    }
  }
}

TEST_CASE("adjacency means a shared endpoint of the right kind") {
  TemporalDigraph tg = random_temporal(3, {6, 10, 12, 30, {}});
  WeightedDigraph g = normalize_weights(tg);
  LineGraphPair both = build_line_graphs(g);
  for (EdgeId a = 0; a < g.edge_count(); ++a)
    for (EdgeId b = 0; b < g.edge_count(); ++b) {
      if (a == b) continue;
      const bool src_adj = std::binary_search(both.source.adjacency[a].begin(),
                                              both.source.adjacency[a].end(), b);
      const bool snk_adj = std::binary_search(both.sink.adjacency[a].begin(),
                                              both.sink.adjacency[a].end(), b);
      CHECK(src_adj == (g.edges[a].source == g.edges[b].source));
      CHECK(snk_adj == (g.edges[a].target == g.edges[b].target));
    }
}

TEST_CASE("stats") {
  WeightedDigraph g = star_graph({0.1, 0.2, 0.3, 0.4});
  LineGraphPair lg = build_line_graphs(g);
  LineGraphStats s = line_graph_stats(lg.sink);
  CHECK(s.nodes == 4);
  CHECK(s.edges == 6);
  CHECK(s.max_degree == 3);
}

TEST_CASE("empty graph is rejected") {
  WeightedDigraph g;
  g.node_count = 3;
  CHECK_THROWS_AS(build_line_graphs(g), std::invalid_argument);
}

}  // TEST_SUITE
