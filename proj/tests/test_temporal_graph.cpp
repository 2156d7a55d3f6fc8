#include <algorithm>
#include <filesystem>
#include <fstream>
#include <tuple>

#include "doctest.h"
#include "dowker/generators.hpp"
#include "dowker/temporal_graph.hpp"

using namespace dowker;
namespace fs = std::filesystem;

TEST_SUITE("temporal_graph") {

TEST_CASE("parses lines, comments and blanks") {
  TemporalDigraph g = parse_edge_list("# header\n0 1 3.5\n\n1 2 4 # trailing\n", "t");
  CHECK(g.node_count == 3);
  REQUIRE(g.edges.size() == 2);
  CHECK(g.edges[0].source == 0);
  CHECK(g.edges[0].target == 1);
  CHECK(g.edges[0].time == 3.5);
  CHECK(g.edges[1].source == 1);
  CHECK(g.edges[1].target == 2);
  CHECK(g.edges[1].time == 4.0);
}

TEST_CASE("re-indexes sparse ids densely in ascending order") {
  TemporalDigraph g = parse_edge_list("100 7 1\n7 42 2\n", "t");
  CHECK(g.node_count == 3);
  // raw 7 -> 0, 42 -> 1, 100 -> 2
  CHECK(g.edges[0].source == 0);
  CHECK(g.edges[0].target == 1);
  CHECK(g.edges[1].source == 2);
  CHECK(g.edges[1].target == 0);
}

TEST_CASE("drops self-loops but keeps their endpoint") {
  TemporalDigraph g = parse_edge_list("0 1 1\n2 2 5\n", "t");
  CHECK(g.node_count == 3);
  CHECK(g.edges.size() == 1);
}

TEST_CASE("duplicate ordered pairs collapse to the earliest time") {
  TemporalDigraph g = parse_edge_list("0 1 5\n0 1 3\n0 1 9\n", "t");
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0].time == 3.0);
}

TEST_CASE("rejects malformed input") {
  CHECK_THROWS_AS(parse_edge_list("0 1\n", "t"), ParseError);
  CHECK_THROWS_AS(parse_edge_list("0 1 2 3\n", "t"), ParseError);
  CHECK_THROWS_AS(parse_edge_list("0 1 abc\n", "t"), ParseError);
  CHECK_THROWS_AS(parse_edge_list("-1 1 2\n", "t"), ParseError);
  CHECK_THROWS_AS(parse_edge_list("", "t"), ParseError);
  CHECK_THROWS_AS(parse_edge_list("# only comments\n", "t"), ParseError);
  CHECK_THROWS_AS(parse_edge_list("3 3 1\n", "t"), ParseError);  // only a self-loop
}

TEST_CASE("export and re-ingest reproduce the graph exactly") {
  auto edge_key = [](const TemporalEdge& e) {
    return std::tuple<NodeId, NodeId, double>{e.source, e.target, e.time};
  };
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    TemporalDigraph g = random_temporal(seed, {5, 12, 8, 30, {}});
    std::string text = format_edge_list(g);
    TemporalDigraph back = parse_edge_list(text, "roundtrip");

    // Parsing canonicalizes edge order; a second pass is the identity.
    std::string canonical = format_edge_list(back);
    CHECK(format_edge_list(parse_edge_list(canonical, "again")) == canonical);

    // When every node is incident to an edge, re-indexing keeps ids, so the
    // parsed graph is the original up to edge order.
    std::vector<bool> covered(g.node_count, false);
    for (const auto& e : g.edges) covered[e.source] = covered[e.target] = true;
    if (std::find(covered.begin(), covered.end(), false) == covered.end()) {
      CHECK(back.node_count == g.node_count);
      REQUIRE(back.edges.size() == g.edges.size());
      std::vector<std::tuple<NodeId, NodeId, double>> got, want;
      for (const auto& e : back.edges) got.push_back(edge_key(e));
      for (const auto& e : g.edges) want.push_back(edge_key(e));
      std::sort(want.begin(), want.end());
      CHECK(got == want);
    }
  }
}

TEST_CASE("normalize maps times affinely onto [0,1]") {
  TemporalDigraph g = parse_edge_list("0 1 10\n1 2 20\n2 3 30\n", "t");
  WeightedDigraph w = normalize_weights(g);
  CHECK(w.edges[0].weight == 0.0);
  CHECK(w.edges[1].weight == 0.5);
  CHECK(w.edges[2].weight == 1.0);
}

TEST_CASE("normalize of constant times is all zeros") {
  TemporalDigraph g = parse_edge_list("0 1 7\n1 2 7\n", "t");
  WeightedDigraph w = normalize_weights(g);
  CHECK(w.edges[0].weight == 0.0);
  CHECK(w.edges[1].weight == 0.0);
}

TEST_CASE("as_weighted validates the range") {
  TemporalDigraph g = parse_edge_list("0 1 0.25\n1 2 1\n", "t");
  WeightedDigraph w = as_weighted(g);
  CHECK(w.edges[0].weight == 0.25);
  TemporalDigraph bad = parse_edge_list("0 1 1.5\n", "t");
  CHECK_THROWS_AS(as_weighted(bad), std::invalid_argument);
}

TEST_CASE("transpose reverses every edge and nothing else") {
  TemporalDigraph g = parse_edge_list("0 1 0.2\n1 2 0.8\n", "t");
  WeightedDigraph w = as_weighted(g);
  WeightedDigraph t = transpose(w);
  CHECK(t.node_count == w.node_count);
  REQUIRE(t.edges.size() == 2);
  CHECK(t.edges[0].source == 1);
  CHECK(t.edges[0].target == 0);
  CHECK(t.edges[0].weight == 0.2);
}

TEST_CASE("label sidecar lookup by file stem") {
  fs::path dir = fs::temp_directory_path() / "dowker_label_test";
  fs::create_directories(dir);
  {
    std::ofstream g(dir / "g0000.tsv");
    g << "0 1 1\n1 2 2\n";
    std::ofstream l(dir / "labels.tsv");
    l << "g0000\t1\ng0001\t0\n";
  }
  TemporalDigraph g = load_edge_list((dir / "g0000.tsv").string(), true);
  REQUIRE(g.label.has_value());
  CHECK(*g.label == 1);
  TemporalDigraph plain = load_edge_list((dir / "g0000.tsv").string(), false);
  CHECK(!plain.label.has_value());
  fs::remove_all(dir);
}

TEST_CASE("dataset write and load round-trip with labels") {
  fs::path dir = fs::temp_directory_path() / "dowker_dataset_test";
  fs::remove_all(dir);
  std::vector<TemporalDigraph> graphs = classification_dataset(7, 6);
  write_dataset(graphs, dir.string());
  std::vector<TemporalDigraph> back = load_dataset(dir.string());
  REQUIRE(back.size() == graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    CHECK(back[i].label == graphs[i].label);
    CHECK(back[i].edges.size() == graphs[i].edges.size());
  }
  fs::remove_all(dir);
}

}  // TEST_SUITE
