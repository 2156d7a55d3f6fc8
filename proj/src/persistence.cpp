#include "dowker/persistence.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace dowker {

namespace {

// Union-find whose roots remember (birth, founder). The elder rule is a
// lexicographic comparison on exactly that pair, so ties at equal birth
// resolve to the smaller founder vertex deterministically.
struct ComponentForest {
  std::vector<NodeId> parent;
  std::vector<double> birth;    // valid at roots
  std::vector<NodeId> founder;  // valid at roots

  explicit ComponentForest(std::size_t n)
      : parent(n, kNoNode), birth(n, 0.0), founder(n, kNoNode) {}

  bool alive(NodeId v) const { return parent[v] != kNoNode; }

  void make_set(NodeId v, double t) {
    parent[v] = v;
    birth[v] = t;
    founder[v] = v;
  }

  NodeId find(NodeId v) {
    NodeId root = v;
    while (parent[root] != root) root = parent[root];
    while (parent[v] != root) {
      NodeId next = parent[v];
      parent[v] = root;
      v = next;
    }
    return root;
  }

  // Merges the components of a and b. Returns the (birth, founder) of the
  // younger component when a real merge happened, nullopt when a and b
  // already share a component.
  std::optional<std::pair<double, NodeId>> merge(NodeId a, NodeId b) {
    NodeId ra = find(a);
    NodeId rb = find(b);
    if (ra == rb) return std::nullopt;
    auto key = [this](NodeId r) { return std::make_pair(birth[r], founder[r]); };
    NodeId elder = key(ra) < key(rb) ? ra : rb;
    NodeId younger = elder == ra ? rb : ra;
    auto died = std::make_pair(birth[younger], founder[younger]);
    parent[younger] = elder;
    return died;
  }
};

std::uint64_t pair_key(NodeId a, NodeId b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Symmetric difference of two ascending index lists (mod-2 column addition).
void xor_columns(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                 std::vector<std::uint32_t>& out) {
  out.clear();
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(out));
}

}  // namespace

bool point_less(const PdPoint& a, const PdPoint& b) {
  if (a.dim != b.dim) return a.dim < b.dim;
  if (a.birth != b.birth) return a.birth < b.birth;
  bool af = a.death.has_value();
  bool bf = b.death.has_value();
  if (af != bf) return af;  // finite deaths before essentials
  if (!af) return false;
  return *a.death < *b.death;
}

void PersistenceDiagram::sort_canonical() {
  std::sort(points.begin(), points.end(), point_less);
}

PersistenceDiagram PersistenceDiagram::positive_only() const {
  PersistenceDiagram out;
  for (const PdPoint& p : points)
    if (!p.zero_persistence()) out.points.push_back(p);
  return out;
}

const char* class_name(PointClass c) {
  switch (c) {
    case PointClass::paired: return "paired";
    case PointClass::unpaired: return "unpaired";
    case PointClass::disappearing: return "disappearing";
  }
  return "?";
}

PersistenceResult compute_persistence(const WeightedDigraph& g, DowkerKind kind,
                                      const SkeletonOptions& opts) {
  DowkerSkeleton sk = build_skeleton(g, kind, opts);

  PersistenceResult res;
  ComponentForest forest(g.node_count);

  // Death time of the component each vertex founded; kept for the edge map.
  std::vector<std::optional<double>> founder_death(g.node_count);

  // Pair simplices in filtration order, with positivity from union-find.
  std::vector<const FilteredSimplex*> pairs;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> pair_lookup;
  std::vector<bool> pair_positive;

  for (const FilteredSimplex& s : sk.simplices) {
    if (s.dim == 0) {
      forest.make_set(s.vertices[0], s.value);
    } else if (s.dim == 1) {
      std::uint32_t idx = static_cast<std::uint32_t>(pairs.size());
      pairs.push_back(&s);
      pair_lookup.emplace_back(pair_key(s.vertices[0], s.vertices[1]), idx);
      auto died = forest.merge(s.vertices[0], s.vertices[1]);
      pair_positive.push_back(!died.has_value());
      if (died) {
        res.pd0.points.push_back({died->first, s.value, 0});
        founder_death[died->second] = s.value;
      }
    }
  }
  std::sort(pair_lookup.begin(), pair_lookup.end());
  auto pair_index = [&](NodeId a, NodeId b) {
    const std::uint64_t key = pair_key(a, b);
    auto it = std::lower_bound(pair_lookup.begin(), pair_lookup.end(),
                               std::make_pair(key, std::uint32_t{0}));
    if (it == pair_lookup.end() || it->first != key)
      throw std::logic_error("compute_persistence: triangle facet missing");
    return it->second;
  };
  for (NodeId v = 0; v < g.node_count; ++v) {
    if (forest.alive(v) && forest.find(v) == v)
      res.pd0.points.push_back({forest.birth[v], std::nullopt, 0});
  }
  res.pd0.sort_canonical();

  // PD1: reduce triangle boundary columns over pair positions. Any nonzero
  // partial sum of triangle boundaries is a 1-cycle, so its maximal pair is
  // always positive; the loop below can only settle on positive pivots.
  std::vector<std::int32_t> pivot_owner(pairs.size(), -1);
  std::vector<std::vector<std::uint32_t>> stored;
  std::vector<bool> pair_claimed(pairs.size(), false);

  std::vector<std::uint32_t> col, tmp;  // reused across triangles
  for (const FilteredSimplex& s : sk.simplices) {
    if (s.dim != 2) continue;
    NodeId a = s.vertices[0], b = s.vertices[1], c = s.vertices[2];
    col.assign({pair_index(a, b), pair_index(a, c), pair_index(b, c)});
    std::sort(col.begin(), col.end());
    while (!col.empty() && pivot_owner[col.back()] >= 0) {
      xor_columns(col, stored[pivot_owner[col.back()]], tmp);
      col.swap(tmp);
    }
    if (col.empty()) continue;  // positive triangle
    std::uint32_t low = col.back();
    pivot_owner[low] = static_cast<std::int32_t>(stored.size());
    stored.push_back(col);
    pair_claimed[low] = true;
    res.pd1.points.push_back({pairs[low]->value, s.value, 1});
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pair_positive[i] && !pair_claimed[i])
      res.pd1.points.push_back({pairs[i]->value, std::nullopt, 1});
  }
  res.pd1.sort_canonical();

  // Edge map: ascending (weight, edge id); the first edge anchored at a not
  // yet activated complex vertex inherits that vertex's component fate.
  std::vector<EdgeId> order(g.edges.size());
  for (EdgeId i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](EdgeId x, EdgeId y) {
    if (g.edges[x].weight != g.edges[y].weight)
      return g.edges[x].weight < g.edges[y].weight;
    return x < y;
  });
  res.edge_map.resize(g.edges.size());
  std::vector<bool> activated(g.node_count, false);
  for (EdgeId e : order) {
    const WeightedEdge& we = g.edges[e];
    NodeId anchor = kind == DowkerKind::sink ? we.source : we.target;
    EdgePointEntry& entry = res.edge_map[e];
    if (!activated[anchor]) {
      activated[anchor] = true;
      entry.birth = we.weight;  // equals the vertex simplex value
      entry.death = founder_death[anchor];
      if (!entry.death)
        entry.cls = PointClass::unpaired;
      else if (*entry.death > entry.birth)
        entry.cls = PointClass::paired;
      else
        entry.cls = PointClass::disappearing;
    } else {
      entry.birth = we.weight;
      entry.death = we.weight;
      entry.cls = PointClass::disappearing;
    }
  }
  return res;
}

std::pair<PersistenceDiagram, EdgePointMap> pd0_with_edge_map(
    const WeightedDigraph& g, DowkerKind kind, const SkeletonOptions& opts) {
  PersistenceResult res = compute_persistence(g, kind, opts);
  return {std::move(res.pd0), std::move(res.edge_map)};
}

PersistenceDiagram pd1(const WeightedDigraph& g, DowkerKind kind,
                       const SkeletonOptions& opts) {
  return compute_persistence(g, kind, opts).pd1;
}

namespace {

bool same_positive_multiset(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  PersistenceDiagram pa = a.positive_only();
  PersistenceDiagram pb = b.positive_only();
  pa.sort_canonical();
  pb.sort_canonical();
  return pa.points == pb.points;
}

}  // namespace

DualityReport check_duality(const WeightedDigraph& g, const SkeletonOptions& opts) {
  PersistenceResult sink = compute_persistence(g, DowkerKind::sink, opts);
  PersistenceResult source = compute_persistence(g, DowkerKind::source, opts);
  DualityReport rep;
  rep.pd0_match = same_positive_multiset(sink.pd0, source.pd0);
  rep.pd1_match = same_positive_multiset(sink.pd1, source.pd1);
  return rep;
}

PersistenceDiagram symmetric_pd0(const WeightedDigraph& g) {
  std::map<std::pair<NodeId, NodeId>, double> undirected;
  for (const WeightedEdge& e : g.edges) {
    NodeId a = std::min(e.source, e.target);
    NodeId b = std::max(e.source, e.target);
    if (a == b) continue;
    auto [it, fresh] = undirected.emplace(std::make_pair(a, b), e.weight);
    if (!fresh && e.weight < it->second) it->second = e.weight;
  }

  struct UEdge {
    NodeId a, b;
    double w;
  };
  std::vector<UEdge> edges;
  edges.reserve(undirected.size());
  for (const auto& [key, w] : undirected) edges.push_back({key.first, key.second, w});
  std::stable_sort(edges.begin(), edges.end(),
                   [](const UEdge& x, const UEdge& y) { return x.w < y.w; });

  PersistenceDiagram out;
  ComponentForest forest(g.node_count);
  for (const UEdge& e : edges) {
    bool a_new = !forest.alive(e.a);
    bool b_new = !forest.alive(e.b);
    if (a_new && b_new) {
      // One component appears; the edge's two endpoints are born together.
      NodeId f = std::min(e.a, e.b);
      forest.make_set(e.a, e.w);
      forest.make_set(e.b, e.w);
      forest.parent[std::max(e.a, e.b)] = f;
      forest.founder[f] = f;
    } else if (a_new != b_new) {
      NodeId fresh = a_new ? e.a : e.b;
      NodeId host = a_new ? e.b : e.a;
      forest.make_set(fresh, e.w);
      forest.parent[fresh] = forest.find(host);
      out.points.push_back({e.w, e.w, 0});
    } else {
      auto died = forest.merge(e.a, e.b);
      if (died) out.points.push_back({died->first, e.w, 0});
    }
  }
  for (NodeId v = 0; v < g.node_count; ++v) {
    if (forest.alive(v) && forest.find(v) == v)
      out.points.push_back({forest.birth[v], std::nullopt, 0});
  }
  out.sort_canonical();
  return out;
}

}  // namespace dowker
