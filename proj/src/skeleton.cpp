#include "dowker/skeleton.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dowker {

bool filtration_less(const FilteredSimplex& a, const FilteredSimplex& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.dim != b.dim) return a.dim < b.dim;
  return a.vertices < b.vertices;
}

namespace {

struct SimplexKey {
  NodeId a, b, c;  // ascending; unused slots = kNoNode
  bool operator==(const SimplexKey&) const = default;
};

struct SimplexKeyHash {
  std::size_t operator()(const SimplexKey& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint64_t x : {std::uint64_t(k.a), std::uint64_t(k.b), std::uint64_t(k.c)}) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

using MinMap = std::unordered_map<SimplexKey, double, SimplexKeyHash>;

struct WitnessMember {
  NodeId node;
  double weight;
};

// Per witness w: nodes b with an edge b->w (sink) or w->b (source), i.e. the
// members w can certify, sorted ascending by node id.
std::vector<std::vector<WitnessMember>> witness_members(const WeightedDigraph& g,
                                                        DowkerKind kind) {
  std::vector<std::vector<WitnessMember>> members(g.node_count);
  std::vector<std::uint32_t> degree(g.node_count, 0);
  for (const auto& e : g.edges)
    ++degree[kind == DowkerKind::sink ? e.target : e.source];
  for (NodeId w = 0; w < g.node_count; ++w) members[w].reserve(degree[w]);
  for (const auto& e : g.edges) {
    if (kind == DowkerKind::sink) {
      members[e.target].push_back({e.source, e.weight});
    } else {
      members[e.source].push_back({e.target, e.weight});
    }
  }
  for (auto& m : members) {
    std::sort(m.begin(), m.end(),
              [](const WitnessMember& x, const WitnessMember& y) { return x.node < y.node; });
  }
  return members;
}

std::uint64_t candidate_budget(const std::vector<std::vector<WitnessMember>>& members) {
  std::uint64_t total = 0;
  for (const auto& m : members) {
    std::uint64_t d = m.size();
    total += d + d * (d - 1) / 2 + d * (d - 1) * (d - 2) / 6;
  }
  return total;
}

void keep_min(MinMap& acc, SimplexKey key, double value) {
  auto [it, inserted] = acc.emplace(key, value);
  if (!inserted && value < it->second) it->second = value;
}

// Emits every subset of size 1..3 of one witness's member list with candidate
// value = max of member weights; the accumulator keeps the min over witnesses.
void enumerate_witness(const std::vector<WitnessMember>& m, MinMap& acc) {
  const std::size_t d = m.size();
  for (std::size_t i = 0; i < d; ++i) {
    keep_min(acc, {m[i].node, kNoNode, kNoNode}, m[i].weight);
    for (std::size_t j = i + 1; j < d; ++j) {
      const double wij = std::max(m[i].weight, m[j].weight);
      keep_min(acc, {m[i].node, m[j].node, kNoNode}, wij);
      for (std::size_t k = j + 1; k < d; ++k) {
        keep_min(acc, {m[i].node, m[j].node, m[k].node}, std::max(wij, m[k].weight));
      }
    }
  }
}

bool key_less(const SimplexKey& x, const SimplexKey& y) {
  if (x.a != y.a) return x.a < y.a;
  if (x.b != y.b) return x.b < y.b;
  return x.c < y.c;
}

// Small inputs: enumerate every candidate into a flat list, sort, and keep the
// first (minimal) value per key. Same min-over-witnesses result as the hash
// accumulator without per-entry allocation or thread spawn.
DowkerSkeleton build_flat(const WeightedDigraph& g, DowkerKind kind,
                          const std::vector<std::vector<WitnessMember>>& members,
                          std::uint64_t budget) {
  std::vector<std::pair<SimplexKey, double>> cand;
  cand.reserve(static_cast<std::size_t>(budget));
  for (const auto& m : members) {
    const std::size_t d = m.size();
    for (std::size_t i = 0; i < d; ++i) {
      cand.push_back({{m[i].node, kNoNode, kNoNode}, m[i].weight});
      for (std::size_t j = i + 1; j < d; ++j) {
        const double wij = std::max(m[i].weight, m[j].weight);
        cand.push_back({{m[i].node, m[j].node, kNoNode}, wij});
        for (std::size_t k = j + 1; k < d; ++k) {
          cand.push_back({{m[i].node, m[j].node, m[k].node}, std::max(wij, m[k].weight)});
        }
      }
    }
  }
  std::sort(cand.begin(), cand.end(), [](const auto& x, const auto& y) {
    if (!(x.first == y.first)) return key_less(x.first, y.first);
    return x.second < y.second;
  });

  DowkerSkeleton sk;
  sk.kind = kind;
  sk.node_count = g.node_count;
  sk.simplices.reserve(cand.size());
  std::size_t i = 0;
  while (i < cand.size()) {
    const SimplexKey key = cand[i].first;
    FilteredSimplex s;
    s.vertices = {key.a, key.b, key.c};
    s.dim = static_cast<std::uint8_t>((key.b != kNoNode) + (key.c != kNoNode));
    s.value = cand[i].second;
    sk.simplices.push_back(s);
    do ++i; while (i < cand.size() && cand[i].first == key);
  }
  std::sort(sk.simplices.begin(), sk.simplices.end(), filtration_less);
  return sk;
}

DowkerSkeleton finish(const WeightedDigraph& g, DowkerKind kind, MinMap&& acc) {
  DowkerSkeleton sk;
  sk.kind = kind;
  sk.node_count = g.node_count;
  sk.simplices.reserve(acc.size());
  for (const auto& [key, value] : acc) {
    FilteredSimplex s;
    s.vertices = {key.a, key.b, key.c};
    s.dim = static_cast<std::uint8_t>((key.b != kNoNode) + (key.c != kNoNode));
    s.value = value;
    sk.simplices.push_back(s);
  }
  std::sort(sk.simplices.begin(), sk.simplices.end(), filtration_less);
  return sk;
}

void check_budget(const std::vector<std::vector<WitnessMember>>& members,
                  const SkeletonOptions& opts) {
  if (candidate_budget(members) > opts.max_candidates) {
    throw std::runtime_error("build_skeleton: candidate budget exceeded (" +
                             std::to_string(candidate_budget(members)) + " > " +
                             std::to_string(opts.max_candidates) + ")");
  }
}

}  // namespace

DowkerSkeleton build_skeleton_serial(const WeightedDigraph& g, DowkerKind kind,
                                     const SkeletonOptions& opts) {
  if (g.edges.empty()) throw std::invalid_argument("build_skeleton: empty graph");
  auto members = witness_members(g, kind);
  check_budget(members, opts);
  MinMap acc;
  for (const auto& m : members) enumerate_witness(m, acc);
  return finish(g, kind, std::move(acc));
}

DowkerSkeleton build_skeleton(const WeightedDigraph& g, DowkerKind kind,
                              const SkeletonOptions& opts) {
  if (g.edges.empty()) throw std::invalid_argument("build_skeleton: empty graph");
  auto members = witness_members(g, kind);
  check_budget(members, opts);

  // Tiny budgets: flat sort-and-collapse beats hashing and skips thread spawn.
  // Hashing wins again once duplicate keys dominate the candidate list.
  const std::uint64_t budget = candidate_budget(members);
  if (budget <= 256) return build_flat(g, kind, members, budget);

#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  std::vector<MinMap> partial(threads);
#ifdef _OPENMP
#pragma omp parallel num_threads(threads)
  {
    MinMap& acc = partial[omp_get_thread_num()];
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t w = 0; w < static_cast<std::int64_t>(members.size()); ++w) {
      enumerate_witness(members[w], acc);
    }
  }
#else
  for (const auto& m : members) enumerate_witness(m, partial[0]);
#endif

  // Min-merge is order-independent, and the final sort is a total order, so
  // the result is identical to the serial build regardless of scheduling.
  MinMap merged = std::move(partial[0]);
  for (int t = 1; t < threads; ++t) {
    for (const auto& [key, value] : partial[t]) keep_min(merged, key, value);
  }
  return finish(g, kind, std::move(merged));
}

DowkerSkeleton skeleton_at(const DowkerSkeleton& sk, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("skeleton_at: delta outside [0,1]");
  }
  DowkerSkeleton sub;
  sub.kind = sk.kind;
  sub.node_count = sk.node_count;
  for (const auto& s : sk.simplices) {
    if (s.value <= delta) sub.simplices.push_back(s);
  }
  return sub;
}

}  // namespace dowker
