#include "dowker/reference_pd.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

namespace dowker {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Simplex {
  std::vector<NodeId> verts;  // ascending
  double value = kInf;
  int dim() const { return static_cast<int>(verts.size()) - 1; }
};

bool simplex_less(const Simplex& a, const Simplex& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.verts.size() != b.verts.size()) return a.verts.size() < b.verts.size();
  return a.verts < b.verts;
}

// Cheapest arrow from -> to, read straight off the edge list each time.
double arrow_weight(const WeightedDigraph& g, NodeId from, NodeId to) {
  double best = kInf;
  for (const WeightedEdge& e : g.edges)
    if (e.source == from && e.target == to) best = std::min(best, e.weight);
  return best;
}

// value(S) = min over witnesses w of max over members b of weight of the
// member-to-witness arrow (sink kind) or witness-to-member arrow (source).
// Transcribes the definition verbatim: every witness is scanned in full.
double dowker_value(const std::vector<NodeId>& s, const WeightedDigraph& g,
                    DowkerKind kind) {
  double best = kInf;
  for (NodeId witness = 0; witness < g.node_count; ++witness) {
    double worst = 0.0;
    for (NodeId member : s) {
      double arrow = kind == DowkerKind::sink ? arrow_weight(g, member, witness)
                                              : arrow_weight(g, witness, member);
      worst = std::max(worst, arrow);
    }
    best = std::min(best, worst);
  }
  return best;
}

}  // namespace

ReferenceDiagrams reference_persistence(const WeightedDigraph& g, DowkerKind kind) {
  if (g.node_count > 12)
    throw std::invalid_argument("reference_persistence: graph too large (max 12 nodes)");

  const NodeId n = g.node_count;
  std::vector<Simplex> simplices;
  for (NodeId a = 0; a < n; ++a) {
    Simplex s{{a}};
    s.value = dowker_value(s.verts, g, kind);
    if (s.value < kInf) simplices.push_back(s);
  }
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b) {
      Simplex s{{a, b}};
      s.value = dowker_value(s.verts, g, kind);
      if (s.value < kInf) simplices.push_back(s);
    }
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b)
      for (NodeId c = b + 1; c < n; ++c) {
        Simplex s{{a, b, c}};
        s.value = dowker_value(s.verts, g, kind);
        if (s.value < kInf) simplices.push_back(s);
      }
  std::sort(simplices.begin(), simplices.end(), simplex_less);

  // Position of every simplex for facet lookup.
  auto position_of = [&](const std::vector<NodeId>& verts) {
    for (std::size_t i = 0; i < simplices.size(); ++i)
      if (simplices[i].verts == verts) return i;
    throw std::logic_error("facet missing from complex");
  };

  // Full dense boundary matrix over Z/2, columns in filtration order. The
  // reduction below is the textbook loop verbatim: xor whole columns and
  // rescan for the lowest 1, with no sparse storage or clearing tricks.
  const std::size_t m = simplices.size();
  std::vector<std::vector<char>> matrix(m, std::vector<char>(m, 0));
  for (std::size_t j = 0; j < m; ++j) {
    const auto& verts = simplices[j].verts;
    if (verts.size() == 1) continue;
    for (std::size_t skip = 0; skip < verts.size(); ++skip) {
      std::vector<NodeId> facet;
      for (std::size_t k = 0; k < verts.size(); ++k)
        if (k != skip) facet.push_back(verts[k]);
      matrix[j][position_of(facet)] = 1;
    }
  }

  auto low_of = [&](std::size_t j) -> long {
    for (std::size_t r = m; r-- > 0;)
      if (matrix[j][r]) return static_cast<long>(r);
    return -1;
  };

  std::vector<long> owner_of_low(m, -1);
  std::vector<long> low(m, -1);
  for (std::size_t j = 0; j < m; ++j) {
    low[j] = low_of(j);
    while (low[j] >= 0 && owner_of_low[static_cast<std::size_t>(low[j])] >= 0) {
      const std::size_t other =
          static_cast<std::size_t>(owner_of_low[static_cast<std::size_t>(low[j])]);
      for (std::size_t r = 0; r < m; ++r) matrix[j][r] ^= matrix[other][r];
      low[j] = low_of(j);
    }
    if (low[j] >= 0) owner_of_low[static_cast<std::size_t>(low[j])] = static_cast<long>(j);
  }

  std::vector<bool> paired_as_birth(m, false);
  ReferenceDiagrams out;
  auto emit = [&](std::size_t birth_idx, std::optional<double> death) {
    int d = simplices[birth_idx].dim();
    if (d > 1) return;
    PdPoint p{simplices[birth_idx].value, death, static_cast<std::uint8_t>(d)};
    (d == 0 ? out.pd0 : out.pd1).points.push_back(p);
  };
  for (std::size_t j = 0; j < m; ++j) {
    if (low[j] < 0) continue;
    std::size_t i = static_cast<std::size_t>(low[j]);
    paired_as_birth[i] = true;
    emit(i, simplices[j].value);
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (low[i] < 0 && !paired_as_birth[i]) emit(i, std::nullopt);
  }
  out.pd0.sort_canonical();
  out.pd1.sort_canonical();
  return out;
}

}  // namespace dowker
