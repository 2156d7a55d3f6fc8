/*
  Diagram metrics: exact 2-Wasserstein distance with diagonal projections,
  and persistence images with their squared-difference distance.

  Wasserstein matching is solved exactly on the (nA+nB) square cost matrix in
  which each real point may also match its orthogonal diagonal projection at
  cost (death-birth)^2/2 and diagonal-diagonal matches are free. Matched
  costs are summed in sorted order so the distance is exactly symmetric.
*/
#pragma once

#include <string>
#include <vector>

#include "dowker/persistence.hpp"

namespace dowker {

struct WassersteinOptions {
  double inf_cap = 1.0;    // finite stand-in for infinite deaths
  bool drop_zero = true;   // ignore zero-persistence points
};

// match_a[i]: index into b's points, or -1 for the diagonal (match_b alike).
struct WassersteinResult {
  double distance = 0.0;
  double squared = 0.0;
  std::vector<int> match_a;
  std::vector<int> match_b;
};

WassersteinResult wasserstein2(const PersistenceDiagram& a, const PersistenceDiagram& b,
                               const WassersteinOptions& opts = {});

struct PiConfig {
  int rows = 20;
  int cols = 20;
  double birth_min = 0.0;
  double birth_max = 1.0;
  double pers_min = 0.0;
  double pers_max = 1.0;
  double sigma = 0.05;
  double inf_cap = 1.0;
};

struct PersistenceImage {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;  // row-major; rows index persistence bins

  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
};

// Each point contributes persistence-weighted Gaussian mass, integrated
// exactly over every pixel, so the image sum equals the total weight times
// the Gaussian mass falling inside the configured bounds.
PersistenceImage persistence_image(const PersistenceDiagram& d, const PiConfig& cfg = {});

// Sum of squared pixel differences; throws on shape mismatch.
double pie_distance(const PersistenceImage& a, const PersistenceImage& b);

std::string image_csv(const PersistenceImage& img);

}  // namespace dowker
