/*
  Training loop and gradient checking.

  The loss per graph is WD²(pred PD0, exact PD0) + WD²(pred PD1, exact PD1)
  + λ · cross-entropy (labeled samples only). Wasserstein terms
  differentiate through the optimal matching recomputed on every forward
  pass. Single-threaded, fully deterministic for a given seed.
*/
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dowker/model.hpp"

namespace dowker {

struct TrainConfig {
  int epochs = 50;
  int batch = 8;
  double lr = 1e-3;
  double lambda = 1.0;   // label-loss weight
  std::uint64_t seed = 7;
  double inf_cap = 1.0;  // stand-in death for essential points
  double test_fraction = 0.2;
};

// Everything the loss needs, precomputed once per graph.
struct TrainSample {
  WeightedDigraph graph;
  LineGraphPair lines;
  std::vector<std::vector<EdgeId>> union_adj;
  Tensor h0;
  // Ground truth as capped finite (birth, death) pairs, positive only.
  std::vector<std::pair<double, double>> gt0, gt1;
  std::optional<int> label;
};

TrainSample make_sample(const WeightedDigraph& g, double inf_cap);

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double test_wd0 = 0.0;
  double test_wd1 = 0.0;
  double accuracy = -1.0;  // -1 when the test fold has no labels
};

struct TrainResult {
  std::vector<EpochStats> history;
  std::vector<std::size_t> train_indices, test_indices;
};

TrainResult train(ModelState& ms, const std::vector<TrainSample>& data,
                  const TrainConfig& cfg);

// "epoch,train_loss,test_wd0,test_wd1,accuracy" rows.
std::string history_csv(const TrainResult& r);

// Mean loss over the given samples; fills flat per-parameter gradients when
// grads is non-null (cleared first). The returned matchings are frozen per
// call exactly as during training.
double batch_loss(const ModelState& ms, const std::vector<const TrainSample*>& batch,
                  double lambda, std::vector<Tensor>* grads);

struct ModelEval {
  double wd0 = 0.0;
  double wd1 = 0.0;
  double pie0 = 0.0;
  double pie1 = 0.0;
  std::optional<int> predicted_label;
};

// Inference + comparison against the sample's exact diagrams.
ModelEval evaluate_sample(const ModelState& ms, const TrainSample& s, double inf_cap);

struct GradCheckEntry {
  std::string tensor;
  double max_rel_error = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double max_rel_error = 0.0;
  bool pass = false;
};

// Central finite differences (step h) on every parameter scalar against the
// analytic gradient; relative error uses max(|a|, |fd|, 1e-3) as scale.
GradCheckReport gradient_check(ModelState& ms, const std::vector<const TrainSample*>& batch,
                               double lambda, double h = 1e-4, double tolerance = 1e-4);

}  // namespace dowker
