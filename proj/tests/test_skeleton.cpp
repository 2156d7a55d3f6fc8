#include <algorithm>
#include <limits>
#include <vector>

#include "doctest.h"
#include "dowker/generators.hpp"
#include "dowker/skeleton.hpp"

using namespace dowker;

namespace {

FilteredSimplex vtx(NodeId a, double v) {
  FilteredSimplex s;
  s.vertices = {a, kNoNode, kNoNode};
  s.value = v;
  s.dim = 0;
  return s;
}
FilteredSimplex pair_s(NodeId a, NodeId b, double v) {
  FilteredSimplex s;
  s.vertices = {a, b, kNoNode};
  s.value = v;
  s.dim = 1;
  return s;
}
FilteredSimplex tri(NodeId a, NodeId b, NodeId c, double v) {
  FilteredSimplex s;
  s.vertices = {a, b, c};
  s.value = v;
  s.dim = 2;
  return s;
}

// Independent min-max evaluation used to cross-check skeleton values.
double brute_value(const WeightedDigraph& g, DowkerKind kind, std::vector<NodeId> verts) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> w(g.node_count, std::vector<double>(g.node_count, inf));
  for (const auto& e : g.edges) w[e.source][e.target] = std::min(w[e.source][e.target], e.weight);
  double best = inf;
  for (NodeId wit = 0; wit < g.node_count; ++wit) {
    double worst = 0.0;
    for (NodeId m : verts)
      worst = std::max(worst, kind == DowkerKind::sink ? w[m][wit] : w[wit][m]);
    best = std::min(best, worst);
  }
  return best;
}

}  // namespace

TEST_SUITE("skeleton") {

TEST_CASE("star sink skeleton lists every witnessed subset at its min-max value") {
  WeightedDigraph g = star_graph({0.1, 0.2, 0.3});
  DowkerSkeleton sk = build_skeleton(g, DowkerKind::sink);
  std::vector<FilteredSimplex> expected = {
      vtx(0, 0.1),          vtx(1, 0.2),          pair_s(0, 1, 0.2),
      vtx(2, 0.3),          pair_s(0, 2, 0.3),    pair_s(1, 2, 0.3),
      tri(0, 1, 2, 0.3),
  };
  CHECK(sk.simplices == expected);

  DowkerSkeleton src = build_skeleton(g, DowkerKind::source);
  std::vector<FilteredSimplex> expected_src = {vtx(3, 0.1)};
  CHECK(src.simplices == expected_src);
}

TEST_CASE("alternating cycle skeleton is a hollow square") {
  WeightedDigraph g = alternating_cycle(4, {0.1, 0.1, 0.2, 0.2, 0.3, 0.3, 0.4, 0.4});
  DowkerSkeleton sk = build_skeleton(g, DowkerKind::sink);
  std::vector<FilteredSimplex> expected = {
      vtx(0, 0.1),       vtx(2, 0.1),       pair_s(0, 2, 0.1), vtx(4, 0.2),
      pair_s(2, 4, 0.2), vtx(6, 0.3),       pair_s(4, 6, 0.3), pair_s(0, 6, 0.4),
  };
  CHECK(sk.simplices == expected);
}

TEST_CASE("source skeleton equals sink skeleton of the transpose") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    TemporalDigraph tg = random_temporal(seed, {5, 15, 10, 50, {}});
    WeightedDigraph g = normalize_weights(tg);
    DowkerSkeleton a = build_skeleton(g, DowkerKind::source);
    DowkerSkeleton b = build_skeleton(transpose(g), DowkerKind::sink);
    CHECK(a.simplices == b.simplices);
  }
}

TEST_CASE("parallel build matches the serial reference exactly") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    TemporalDigraph tg = random_temporal(seed, {10, 30, 30, 100, {}});
    WeightedDigraph g = normalize_weights(tg);
    for (DowkerKind kind : {DowkerKind::sink, DowkerKind::source}) {
      DowkerSkeleton par = build_skeleton(g, kind);
      DowkerSkeleton ser = build_skeleton_serial(g, kind);
      CHECK(par.simplices == ser.simplices);
    }
  }
}

TEST_CASE("every simplex value matches brute-force min-max; nothing is missing") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    TemporalDigraph tg = random_temporal(seed, {4, 8, 6, 20, {}});
    WeightedDigraph g = normalize_weights(tg);
    for (DowkerKind kind : {DowkerKind::sink, DowkerKind::source}) {
      DowkerSkeleton sk = build_skeleton(g, kind);
      for (const auto& s : sk.simplices) {
        std::vector<NodeId> verts(s.vertices.begin(), s.vertices.begin() + s.dim + 1);
        CHECK(s.value == brute_value(g, kind, verts));
      }
      // Completeness for vertices and pairs.
      auto contains = [&](std::vector<NodeId> verts, double v) {
        FilteredSimplex probe;
        std::copy(verts.begin(), verts.end(), probe.vertices.begin());
        probe.dim = static_cast<std::uint8_t>(verts.size() - 1);
        probe.value = v;
        return std::find(sk.simplices.begin(), sk.simplices.end(), probe) !=
               sk.simplices.end();
      };
      constexpr double inf = std::numeric_limits<double>::infinity();
      for (NodeId a = 0; a < g.node_count; ++a) {
        double va = brute_value(g, kind, {a});
        if (va < inf) CHECK(contains({a}, va));
        for (NodeId b = a + 1; b < g.node_count; ++b) {
          double vab = brute_value(g, kind, {a, b});
          if (vab < inf) CHECK(contains({a, b}, vab));
        }
      }
    }
  }
}

TEST_CASE("filtration order and downward closure hold") {
  TemporalDigraph tg = random_temporal(11, {10, 20, 40, 100, {}});
  WeightedDigraph g = normalize_weights(tg);
  DowkerSkeleton sk = build_skeleton(g, DowkerKind::sink);
  CHECK(std::is_sorted(sk.simplices.begin(), sk.simplices.end(), filtration_less));
  for (const auto& s : sk.simplices) {
    if (s.dim == 0) continue;
    std::vector<NodeId> verts(s.vertices.begin(), s.vertices.begin() + s.dim + 1);
    for (std::size_t skip = 0; skip <= s.dim; ++skip) {
      std::vector<NodeId> face;
      for (std::size_t i = 0; i < verts.size(); ++i)
        if (i != skip) face.push_back(verts[i]);
      bool found = false;
      for (const auto& f : sk.simplices) {
        if (f.dim + 1 != s.dim) continue;
        std::vector<NodeId> fv(f.vertices.begin(), f.vertices.begin() + f.dim + 1);
        if (fv == face) {
          found = true;
          CHECK(f.value <= s.value);
          break;
        }
      }
      CHECK(found);
    }
  }
}

TEST_CASE("skeleton_at is nested and threshold-correct") {
  TemporalDigraph tg = random_temporal(5, {8, 16, 20, 60, {}});
  WeightedDigraph g = normalize_weights(tg);
  DowkerSkeleton sk = build_skeleton(g, DowkerKind::sink);
  DowkerSkeleton half = skeleton_at(sk, 0.5);
  DowkerSkeleton full = skeleton_at(sk, 1.0);
  for (const auto& s : half.simplices) CHECK(s.value <= 0.5);
  CHECK(full.simplices == sk.simplices);
  CHECK(half.simplices.size() <= full.simplices.size());
  for (const auto& s : half.simplices)
    CHECK(std::find(full.simplices.begin(), full.simplices.end(), s) != full.simplices.end());
  CHECK_THROWS_AS(skeleton_at(sk, 1.5), std::invalid_argument);
}

TEST_CASE("candidate budget guard throws instead of exploding") {
  WeightedDigraph g = star_graph({0.1, 0.2, 0.3, 0.4, 0.5});
  SkeletonOptions opts;
  opts.max_candidates = 3;
  CHECK_THROWS_AS(build_skeleton(g, DowkerKind::sink, opts), std::runtime_error);
  CHECK_THROWS_AS(build_skeleton_serial(g, DowkerKind::sink, opts), std::runtime_error);
}

TEST_CASE("pair simplices correspond to sink line-graph adjacency") {
  TemporalDigraph tg = random_temporal(9, {6, 12, 15, 40, {}});
  WeightedDigraph g = normalize_weights(tg);
  DowkerSkeleton sk = build_skeleton(g, DowkerKind::sink);
  // {a, b} is a sink pair simplex iff some node is a common out-neighbor,
  // i.e. two original edges from a and b enter the same node.
  auto has_pair = [&](NodeId a, NodeId b) {
    for (const auto& e : g.edges)
      for (const auto& f : g.edges)
        if (e.source == a && f.source == b && e.target == f.target) return true;
    return false;
  };
  for (NodeId a = 0; a < g.node_count; ++a)
    for (NodeId b = a + 1; b < g.node_count; ++b) {
      bool in_sk = false;
      for (const auto& s : sk.simplices)
        if (s.dim == 1 && s.vertices[0] == a && s.vertices[1] == b) in_sk = true;
      CHECK(in_sk == has_pair(a, b));
    }
}

}  // TEST_SUITE
