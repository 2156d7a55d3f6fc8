/*
  Filtered 2-skeleton of the Dowker sink/source complex.

  For the sink complex, a simplex on nodes {b0..bk} (k <= 2) enters at
  value(sigma) = min over witnesses w of max over members b of weight(b->w),
  with missing edges counting as +inf; simplices with no witness are omitted.
  The source complex uses edges w->b, i.e. the sink complex of the transpose.

  Simplices are sorted by (value, dim, vertices), a valid filtration order.
  build_skeleton enumerates witness neighborhoods in parallel (OpenMP) with a
  per-thread min-accumulate merge; build_skeleton_serial is the reference
  implementation the parallel kernel must match byte for byte.
*/
#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "dowker/line_graph.hpp"
#include "dowker/temporal_graph.hpp"

namespace dowker {

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct FilteredSimplex {
  std::array<NodeId, 3> vertices{kNoNode, kNoNode, kNoNode};  // ascending
  double value = 0.0;
  std::uint8_t dim = 0;

  friend bool operator==(const FilteredSimplex&, const FilteredSimplex&) = default;
};

// (value, dim, lexicographic vertices): the canonical filtration order.
bool filtration_less(const FilteredSimplex& a, const FilteredSimplex& b);

struct DowkerSkeleton {
  DowkerKind kind = DowkerKind::sink;
  NodeId node_count = 0;
  std::vector<FilteredSimplex> simplices;  // sorted by filtration_less
};

struct SkeletonOptions {
  // Aborts when the witness loops would emit more candidate simplices than
  // this; sum over witnesses of d + C(d,2) + C(d,3) for in/out-degree d.
  std::uint64_t max_candidates = 200'000'000;
};

DowkerSkeleton build_skeleton(const WeightedDigraph& g, DowkerKind kind,
                              const SkeletonOptions& opts = {});
DowkerSkeleton build_skeleton_serial(const WeightedDigraph& g, DowkerKind kind,
                                     const SkeletonOptions& opts = {});

// All simplices with value <= delta; downward-closed by face monotonicity.
DowkerSkeleton skeleton_at(const DowkerSkeleton& sk, double delta);

}  // namespace dowker
