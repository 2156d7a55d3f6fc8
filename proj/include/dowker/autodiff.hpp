/*
  Minimal reverse-mode autodiff on dense row-major matrices.

  A Tape owns a DAG of eagerly evaluated nodes; backward(loss) accumulates
  gradients in reverse topological (= construction) order. Only the ops the
  network needs exist, each with a hand-written adjoint:

    matmul, add, relu, sigmoid, add_bias, scale, concat_cols,
    spmm_sym   (sum over an undirected adjacency; self-adjoint),
    row_scale  (constant per-row scalars),
    row_max / row_mean (column-wise pooling to one row),
    minmax_rows (sorts each 2-wide row; gradient follows the permutation),
    softmax_xent (scalar cross-entropy against a fixed label),
    wd2_fixed_match (squared 2-Wasserstein cost through a frozen matching).
*/
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dowker/temporal_graph.hpp"

namespace dowker {

struct Tensor {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Tensor() = default;
  Tensor(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  std::size_t size() const { return data.size(); }

  friend bool operator==(const Tensor&, const Tensor&) = default;
};

class Tape {
 public:
  using Ref = std::int32_t;

  // Leaves. Both kinds hold a copy of the value; only params receive grads.
  Ref input(Tensor value);
  Ref param(Tensor value);

  Ref matmul(Ref a, Ref b);
  Ref add(Ref a, Ref b);
  Ref relu(Ref a);
  Ref sigmoid(Ref a);
  Ref add_bias(Ref a, Ref bias);  // bias: 1 x cols, broadcast over rows
  Ref scale(Ref a, double k);
  Ref concat_cols(Ref a, Ref b);

  // out[u] = sum of a[v] over v in (*adj)[u]; adj must outlive the tape and
  // be symmetric (the adjoint reuses the same adjacency).
  Ref spmm_sym(const std::vector<std::vector<EdgeId>>* adj, Ref a);

  // out[r] = s[r] * a[r] for constant scalars s.
  Ref row_scale(Ref a, std::vector<double> s);

  Ref row_max(Ref a);   // 1 x cols; ties route the gradient to the first max
  Ref row_mean(Ref a);  // 1 x cols

  // a must be rows x 2; each row becomes (min, max). Equal entries count as
  // already ordered.
  Ref minmax_rows(Ref a);

  // logits: 1 x C. Value is the scalar -log softmax(logits)[label].
  Ref softmax_xent(Ref logits, int label);

  // pred: rows x 2 points. match[i] is an index into gt or -1 for the
  // diagonal. Unmatched gt points add their (constant) diagonal cost so the
  // value is the full squared Wasserstein transport cost of the matching.
  Ref wd2_fixed_match(Ref pred, std::vector<std::pair<double, double>> gt,
                      std::vector<int> match);

  const Tensor& value(Ref r) const { return nodes_[static_cast<std::size_t>(r)].value; }
  const Tensor& grad(Ref r) const { return nodes_[static_cast<std::size_t>(r)].grad; }

  // loss must be 1 x 1; seeds d(loss)/d(loss) = 1 and sweeps backward.
  void backward(Ref loss);

 private:
  enum class Op : std::uint8_t {
    input, param, matmul, add, relu, sigmoid, add_bias, scale, concat_cols,
    spmm_sym, row_scale, row_max, row_mean, minmax_rows, softmax_xent,
    wd2_fixed_match,
  };

  struct Node {
    Op op;
    Ref a = -1;
    Ref b = -1;
    Tensor value;
    Tensor grad;
    bool needs_grad = false;

    double k = 0.0;  // scale factor
    int label = -1;
    const std::vector<std::vector<EdgeId>>* adj = nullptr;
    std::vector<double> row_scalars;
    std::vector<int> routing;  // argmax rows / swap flags / matching
    std::vector<std::pair<double, double>> gt;
  };

  Ref push(Node n);
  std::vector<Node> nodes_;
};

}  // namespace dowker
