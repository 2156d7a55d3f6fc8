/*
  Exact persistence of Dowker skeletons, dimensions 0 and 1.

  PD0 runs union-find over the skeleton's vertices and pairs in filtration
  order under the elder rule (older birth survives; equal births keep the
  smaller founder vertex). PD1 reduces triangle boundary columns over the
  pair simplices. Zero-persistence points are retained in raw diagrams.

  pd0_with_edge_map also assigns every original edge its 0-dimensional point:
  the edge that first activates a complex vertex inherits that component's
  (birth, death) fate; every other edge is a disappearing point (t, t).
*/
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dowker/skeleton.hpp"
#include "dowker/temporal_graph.hpp"

namespace dowker {

struct PdPoint {
  double birth = 0.0;
  std::optional<double> death;  // nullopt = essential (infinite death)
  std::uint8_t dim = 0;

  bool zero_persistence() const { return death.has_value() && *death == birth; }
  friend bool operator==(const PdPoint&, const PdPoint&) = default;
};

// (dim, birth, death) with infinite deaths last; a canonical multiset order.
bool point_less(const PdPoint& a, const PdPoint& b);

struct PersistenceDiagram {
  std::vector<PdPoint> points;

  void sort_canonical();
  PersistenceDiagram positive_only() const;  // drops zero-persistence points
};

enum class PointClass : std::uint8_t { paired, unpaired, disappearing };

const char* class_name(PointClass c);

struct EdgePointEntry {
  double birth = 0.0;
  std::optional<double> death;
  PointClass cls = PointClass::disappearing;
};

// Indexed by original edge id.
using EdgePointMap = std::vector<EdgePointEntry>;

struct PersistenceResult {
  PersistenceDiagram pd0;
  PersistenceDiagram pd1;
  EdgePointMap edge_map;
};

PersistenceResult compute_persistence(const WeightedDigraph& g, DowkerKind kind,
                                      const SkeletonOptions& opts = {});

std::pair<PersistenceDiagram, EdgePointMap> pd0_with_edge_map(
    const WeightedDigraph& g, DowkerKind kind, const SkeletonOptions& opts = {});

PersistenceDiagram pd1(const WeightedDigraph& g, DowkerKind kind,
                       const SkeletonOptions& opts = {});

struct DualityReport {
  bool pd0_match = false;
  bool pd1_match = false;
  bool all() const { return pd0_match && pd1_match; }
};

// Source vs sink diagrams compared as multisets of positive-persistence
// points per dimension; the Dowker duality theorem says they must agree.
DualityReport check_duality(const WeightedDigraph& g, const SkeletonOptions& opts = {});

// Direction-forgetting comparator: per unordered pair keep the minimum
// weight, then 0-dimensional persistence of the resulting weighted graph.
// An edge introducing both endpoints starts one component (single birth).
PersistenceDiagram symmetric_pd0(const WeightedDigraph& g);

}  // namespace dowker
