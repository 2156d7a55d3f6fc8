/*
  Brute-force persistence oracle for small graphs (at most 12 nodes).

  Deliberately shares no algorithmic code with the production path: it
  enumerates every vertex subset of size 1..3, evaluates the Dowker value by
  scanning all witnesses, and reduces the full boundary matrix column by
  column with no shortcuts. Tests compare its exact output to the engine.
*/
#pragma once

#include "dowker/persistence.hpp"

namespace dowker {

struct ReferenceDiagrams {
  PersistenceDiagram pd0;
  PersistenceDiagram pd1;
};

// Throws std::invalid_argument when g has more than 12 nodes.
ReferenceDiagrams reference_persistence(const WeightedDigraph& g, DowkerKind kind);

}  // namespace dowker
