/*
  Source/sink line-graph message-passing network.

  Per layer, each branch applies a self transform plus a summed linear
  message over its line graph, then the two branch states fuse through a
  linear map on their concatenation; ReLU everywhere. The fused state feeds
  both branches of the next layer. Heads: per-edge 2-layer MLPs squashed to
  [0,1]^2 with birth <= death for the diagram heads (PD1 first aggregates
  weight-scaled neighbor embeddings over the union adjacency), and a pooled
  MLP for label scores.
*/
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dowker/autodiff.hpp"
#include "dowker/line_graph.hpp"
#include "dowker/persistence.hpp"
#include "dowker/temporal_graph.hpp"

namespace dowker {

struct ModelConfig {
  int hidden = 32;   // d
  int layers = 3;    // M
  int classes = 2;   // C
  bool share_branches = false;  // tie source weights to sink weights
  bool mean_pool = false;       // max pooling by default
};

struct Mlp {
  Tensor w1, b1, w2, b2;
};

struct LayerParams {
  // Stored input-major (in x out) so row-major embeddings multiply on the
  // right. With share_branches the *_si tensors stay empty and the source
  // weights serve both branches.
  Tensor w_msg_so, w_self_so, w_msg_si, w_self_si;
  Tensor w_fuse;  // 2d x d
};

struct ModelState {
  ModelConfig config;
  std::uint64_t seed = 0;
  std::vector<LayerParams> layers;
  Mlp head_pd0, head_pd1, head_label;

  // Adam state, parallel to parameters().
  std::vector<Tensor> adam_m, adam_v;
  std::int64_t adam_step = 0;

  // Stable enumeration of trainable tensors (skips tied/empty ones).
  std::vector<Tensor*> parameters();
  std::vector<const Tensor*> parameters() const;
  std::vector<std::string> parameter_names() const;
};

// Glorot-uniform weights, zero biases, fresh zeroed Adam buffers.
ModelState init_model(const ModelConfig& cfg, std::uint64_t seed);

// E x 1 column of filtration weights, shared by both branches.
Tensor init_features(const WeightedDigraph& g);

// One forward pass binds every parameter onto the tape once; refs are in
// parameters() order so gradients can be harvested back.
struct ModelBinding {
  std::vector<Tape::Ref> params;
};
ModelBinding bind_model(Tape& tape, const ModelState& ms);

Tape::Ref sslgnn_forward(Tape& tape, const ModelState& ms, const ModelBinding& bind,
                         const LineGraphPair& lines, const Tensor& h0);

Tape::Ref predict_pd0(Tape& tape, const ModelState& ms, const ModelBinding& bind,
                      Tape::Ref embeddings);

// union_adj is the per-node union of both line graphs' neighbor lists and
// must outlive the tape; node_weights are the line-graph node weights.
Tape::Ref predict_pd1(Tape& tape, const ModelState& ms, const ModelBinding& bind,
                      Tape::Ref embeddings,
                      const std::vector<std::vector<EdgeId>>* union_adj,
                      std::vector<double> node_weights);

Tape::Ref predict_label_scores(Tape& tape, const ModelState& ms, const ModelBinding& bind,
                               Tape::Ref embeddings);

std::vector<std::vector<EdgeId>> union_adjacency(const LineGraphPair& lines);

// rows x 2 tensor of (birth, death) rows as a diagram of the given dim.
PersistenceDiagram points_to_diagram(const Tensor& points, int dim);

// Versioned JSON tensor dump; load validates version and every shape.
void save_model(const ModelState& ms, const std::string& path);
ModelState load_model(const std::string& path);

}  // namespace dowker
