#include "dowker/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dowker {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

Tape::Ref Tape::push(Node n) {
  // A node needs a gradient buffer when it is a param or depends on one.
  if (n.op == Op::param) {
    n.needs_grad = true;
  } else {
    if (n.a >= 0) n.needs_grad |= nodes_[static_cast<std::size_t>(n.a)].needs_grad;
    if (n.b >= 0) n.needs_grad |= nodes_[static_cast<std::size_t>(n.b)].needs_grad;
  }
  if (n.needs_grad) n.grad = Tensor(n.value.rows, n.value.cols);
  nodes_.push_back(std::move(n));
  return static_cast<Ref>(nodes_.size() - 1);
}

Tape::Ref Tape::input(Tensor value) {
  Node n;
  n.op = Op::input;
  n.value = std::move(value);
  return push(std::move(n));
}

Tape::Ref Tape::param(Tensor value) {
  Node n;
  n.op = Op::param;
  n.value = std::move(value);
  return push(std::move(n));
}

Tape::Ref Tape::matmul(Ref a, Ref b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  require(A.cols == B.rows, "matmul: inner dimensions differ");
  Node n;
  n.op = Op::matmul;
  n.a = a;
  n.b = b;
  n.value = Tensor(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      const double av = A.at(i, k);
      if (av == 0.0) continue;
      for (int j = 0; j < B.cols; ++j) n.value.at(i, j) += av * B.at(k, j);
    }
  return push(std::move(n));
}

Tape::Ref Tape::add(Ref a, Ref b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  require(A.rows == B.rows && A.cols == B.cols, "add: shapes differ");
  Node n;
  n.op = Op::add;
  n.a = a;
  n.b = b;
  n.value = A;
  for (std::size_t i = 0; i < n.value.data.size(); ++i) n.value.data[i] += B.data[i];
  return push(std::move(n));
}

Tape::Ref Tape::relu(Ref a) {
  Node n;
  n.op = Op::relu;
  n.a = a;
  n.value = value(a);
  for (double& x : n.value.data) x = x > 0.0 ? x : 0.0;
  return push(std::move(n));
}

Tape::Ref Tape::sigmoid(Ref a) {
  Node n;
  n.op = Op::sigmoid;
  n.a = a;
  n.value = value(a);
  for (double& x : n.value.data) x = 1.0 / (1.0 + std::exp(-x));
  return push(std::move(n));
}

Tape::Ref Tape::add_bias(Ref a, Ref bias) {
  const Tensor& A = value(a);
  const Tensor& B = value(bias);
  require(B.rows == 1 && B.cols == A.cols, "add_bias: bias must be 1 x cols");
  Node n;
  n.op = Op::add_bias;
  n.a = a;
  n.b = bias;
  n.value = A;
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) n.value.at(i, j) += B.at(0, j);
  return push(std::move(n));
}

Tape::Ref Tape::scale(Ref a, double k) {
  Node n;
  n.op = Op::scale;
  n.a = a;
  n.k = k;
  n.value = value(a);
  for (double& x : n.value.data) x *= k;
  return push(std::move(n));
}

Tape::Ref Tape::concat_cols(Ref a, Ref b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  require(A.rows == B.rows, "concat_cols: row counts differ");
  Node n;
  n.op = Op::concat_cols;
  n.a = a;
  n.b = b;
  n.value = Tensor(A.rows, A.cols + B.cols);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j) n.value.at(i, j) = A.at(i, j);
    for (int j = 0; j < B.cols; ++j) n.value.at(i, A.cols + j) = B.at(i, j);
  }
  return push(std::move(n));
}

Tape::Ref Tape::spmm_sym(const std::vector<std::vector<EdgeId>>* adj, Ref a) {
  const Tensor& A = value(a);
  require(adj != nullptr && adj->size() == static_cast<std::size_t>(A.rows),
          "spmm_sym: adjacency size mismatch");
  Node n;
  n.op = Op::spmm_sym;
  n.a = a;
  n.adj = adj;
  n.value = Tensor(A.rows, A.cols);
  for (int u = 0; u < A.rows; ++u)
    for (EdgeId v : (*adj)[static_cast<std::size_t>(u)])
      for (int j = 0; j < A.cols; ++j) n.value.at(u, j) += A.at(static_cast<int>(v), j);
  return push(std::move(n));
}

Tape::Ref Tape::row_scale(Ref a, std::vector<double> s) {
  const Tensor& A = value(a);
  require(s.size() == static_cast<std::size_t>(A.rows), "row_scale: scalar count mismatch");
  Node n;
  n.op = Op::row_scale;
  n.a = a;
  n.row_scalars = std::move(s);
  n.value = A;
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) n.value.at(i, j) *= n.row_scalars[static_cast<std::size_t>(i)];
  return push(std::move(n));
}

Tape::Ref Tape::row_max(Ref a) {
  const Tensor& A = value(a);
  require(A.rows >= 1, "row_max: empty input");
  Node n;
  n.op = Op::row_max;
  n.a = a;
  n.value = Tensor(1, A.cols);
  n.routing.assign(static_cast<std::size_t>(A.cols), 0);
  for (int j = 0; j < A.cols; ++j) {
    double best = A.at(0, j);
    int arg = 0;
    for (int i = 1; i < A.rows; ++i) {
      if (A.at(i, j) > best) {
        best = A.at(i, j);
        arg = i;
      }
    }
    n.value.at(0, j) = best;
    n.routing[static_cast<std::size_t>(j)] = arg;
  }
  return push(std::move(n));
}

Tape::Ref Tape::row_mean(Ref a) {
  const Tensor& A = value(a);
  require(A.rows >= 1, "row_mean: empty input");
  Node n;
  n.op = Op::row_mean;
  n.a = a;
  n.value = Tensor(1, A.cols);
  for (int j = 0; j < A.cols; ++j) {
    double sum = 0.0;
    for (int i = 0; i < A.rows; ++i) sum += A.at(i, j);
    n.value.at(0, j) = sum / A.rows;
  }
  return push(std::move(n));
}

Tape::Ref Tape::minmax_rows(Ref a) {
  const Tensor& A = value(a);
  require(A.cols == 2, "minmax_rows: needs two columns");
  Node n;
  n.op = Op::minmax_rows;
  n.a = a;
  n.value = A;
  n.routing.assign(static_cast<std::size_t>(A.rows), 0);
  for (int i = 0; i < A.rows; ++i) {
    if (A.at(i, 0) > A.at(i, 1)) {
      n.routing[static_cast<std::size_t>(i)] = 1;
      n.value.at(i, 0) = A.at(i, 1);
      n.value.at(i, 1) = A.at(i, 0);
    }
  }
  return push(std::move(n));
}

Tape::Ref Tape::softmax_xent(Ref logits, int label) {
  const Tensor& L = value(logits);
  require(L.rows == 1, "softmax_xent: logits must be one row");
  require(label >= 0 && label < L.cols, "softmax_xent: label out of range");
  Node n;
  n.op = Op::softmax_xent;
  n.a = logits;
  n.label = label;
  double top = *std::max_element(L.data.begin(), L.data.end());
  double denom = 0.0;
  for (double x : L.data) denom += std::exp(x - top);
  n.value = Tensor(1, 1);
  n.value.at(0, 0) = -(L.data[static_cast<std::size_t>(label)] - top - std::log(denom));
  return push(std::move(n));
}

Tape::Ref Tape::wd2_fixed_match(Ref pred, std::vector<std::pair<double, double>> gt,
                                std::vector<int> match) {
  const Tensor& P = value(pred);
  require(P.cols == 2, "wd2_fixed_match: points are rows x 2");
  require(match.size() == static_cast<std::size_t>(P.rows),
          "wd2_fixed_match: one match entry per predicted point");
  Node n;
  n.op = Op::wd2_fixed_match;
  n.a = pred;
  n.gt = std::move(gt);
  n.routing = std::move(match);
  std::vector<bool> used(n.gt.size(), false);
  double total = 0.0;
  for (int i = 0; i < P.rows; ++i) {
    const double b = P.at(i, 0), d = P.at(i, 1);
    const int j = n.routing[static_cast<std::size_t>(i)];
    if (j >= 0) {
      require(static_cast<std::size_t>(j) < n.gt.size() && !used[static_cast<std::size_t>(j)],
              "wd2_fixed_match: matching is not injective into gt");
      used[static_cast<std::size_t>(j)] = true;
      const auto [gb, gd] = n.gt[static_cast<std::size_t>(j)];
      total += (b - gb) * (b - gb) + (d - gd) * (d - gd);
    } else {
      const double h = (d - b) / 2.0;
      total += 2.0 * h * h;
    }
  }
  for (std::size_t j = 0; j < n.gt.size(); ++j) {
    if (used[j]) continue;
    const double h = (n.gt[j].second - n.gt[j].first) / 2.0;
    total += 2.0 * h * h;  // constant toll, no gradient
  }
  n.value = Tensor(1, 1);
  n.value.at(0, 0) = total;
  return push(std::move(n));
}

void Tape::backward(Ref loss) {
  Node& top = nodes_[static_cast<std::size_t>(loss)];
  require(top.value.rows == 1 && top.value.cols == 1, "backward: loss must be scalar");
  require(top.needs_grad, "backward: loss does not depend on any param");
  top.grad.at(0, 0) = 1.0;

  for (Ref r = loss; r >= 0; --r) {
    Node& n = nodes_[static_cast<std::size_t>(r)];
    if (!n.needs_grad) continue;
    const Tensor& g = n.grad;
    auto ga = [&]() -> Tensor& { return nodes_[static_cast<std::size_t>(n.a)].grad; };
    auto gb = [&]() -> Tensor& { return nodes_[static_cast<std::size_t>(n.b)].grad; };
    auto a_needs = [&]() {
      return n.a >= 0 && nodes_[static_cast<std::size_t>(n.a)].needs_grad;
    };
    auto b_needs = [&]() {
      return n.b >= 0 && nodes_[static_cast<std::size_t>(n.b)].needs_grad;
    };

    switch (n.op) {
      case Op::input:
      case Op::param:
        break;
      case Op::matmul: {
        const Tensor& A = nodes_[static_cast<std::size_t>(n.a)].value;
        const Tensor& B = nodes_[static_cast<std::size_t>(n.b)].value;
        if (a_needs()) {
          Tensor& da = ga();
          for (int i = 0; i < A.rows; ++i)
            for (int j = 0; j < B.cols; ++j) {
              const double gv = g.at(i, j);
              if (gv == 0.0) continue;
              for (int k = 0; k < A.cols; ++k) da.at(i, k) += gv * B.at(k, j);
            }
        }
        if (b_needs()) {
          Tensor& db = gb();
          for (int i = 0; i < A.rows; ++i)
            for (int k = 0; k < A.cols; ++k) {
              const double av = A.at(i, k);
              if (av == 0.0) continue;
              for (int j = 0; j < B.cols; ++j) db.at(k, j) += av * g.at(i, j);
            }
        }
        break;
      }
      case Op::add:
        if (a_needs())
          for (std::size_t i = 0; i < g.data.size(); ++i) ga().data[i] += g.data[i];
        if (b_needs())
          for (std::size_t i = 0; i < g.data.size(); ++i) gb().data[i] += g.data[i];
        break;
      case Op::relu:
        if (a_needs()) {
          Tensor& da = ga();
          for (std::size_t i = 0; i < g.data.size(); ++i)
            if (n.value.data[i] > 0.0) da.data[i] += g.data[i];
        }
        break;
      case Op::sigmoid:
        if (a_needs()) {
          Tensor& da = ga();
          for (std::size_t i = 0; i < g.data.size(); ++i) {
            const double s = n.value.data[i];
            da.data[i] += g.data[i] * s * (1.0 - s);
          }
        }
        break;
      case Op::add_bias:
        if (a_needs())
          for (std::size_t i = 0; i < g.data.size(); ++i) ga().data[i] += g.data[i];
        if (b_needs()) {
          Tensor& db = gb();
          for (int i = 0; i < n.value.rows; ++i)
            for (int j = 0; j < n.value.cols; ++j) db.at(0, j) += g.at(i, j);
        }
        break;
      case Op::scale:
        if (a_needs())
          for (std::size_t i = 0; i < g.data.size(); ++i) ga().data[i] += n.k * g.data[i];
        break;
      case Op::concat_cols:
        if (n.a >= 0) {
          const int ac = nodes_[static_cast<std::size_t>(n.a)].value.cols;
          if (a_needs()) {
            Tensor& da = ga();
            for (int i = 0; i < n.value.rows; ++i)
              for (int j = 0; j < ac; ++j) da.at(i, j) += g.at(i, j);
          }
          if (b_needs()) {
            Tensor& db = gb();
            for (int i = 0; i < n.value.rows; ++i)
              for (int j = 0; j < db.cols; ++j) db.at(i, j) += g.at(i, ac + j);
          }
        }
        break;
      case Op::spmm_sym:
        if (a_needs()) {
          Tensor& da = ga();
          for (int u = 0; u < n.value.rows; ++u)
            for (EdgeId v : (*n.adj)[static_cast<std::size_t>(u)])
              for (int j = 0; j < n.value.cols; ++j)
                da.at(static_cast<int>(v), j) += g.at(u, j);
        }
        break;
      case Op::row_scale:
        if (a_needs()) {
          Tensor& da = ga();
          for (int i = 0; i < n.value.rows; ++i)
            for (int j = 0; j < n.value.cols; ++j)
              da.at(i, j) += n.row_scalars[static_cast<std::size_t>(i)] * g.at(i, j);
        }
        break;
      case Op::row_max:
        if (a_needs()) {
          Tensor& da = ga();
          for (int j = 0; j < n.value.cols; ++j)
            da.at(n.routing[static_cast<std::size_t>(j)], j) += g.at(0, j);
        }
        break;
      case Op::row_mean:
        if (a_needs()) {
          Tensor& da = ga();
          const double inv = 1.0 / da.rows;
          for (int i = 0; i < da.rows; ++i)
            for (int j = 0; j < da.cols; ++j) da.at(i, j) += inv * g.at(0, j);
        }
        break;
      case Op::minmax_rows:
        if (a_needs()) {
          Tensor& da = ga();
          for (int i = 0; i < n.value.rows; ++i) {
            if (n.routing[static_cast<std::size_t>(i)]) {
              da.at(i, 0) += g.at(i, 1);
              da.at(i, 1) += g.at(i, 0);
            } else {
              da.at(i, 0) += g.at(i, 0);
              da.at(i, 1) += g.at(i, 1);
            }
          }
        }
        break;
      case Op::softmax_xent:
        if (a_needs()) {
          const Tensor& L = nodes_[static_cast<std::size_t>(n.a)].value;
          Tensor& da = ga();
          double top2 = *std::max_element(L.data.begin(), L.data.end());
          double denom = 0.0;
          for (double x : L.data) denom += std::exp(x - top2);
          const double gv = g.at(0, 0);
          for (int j = 0; j < L.cols; ++j) {
            double soft = std::exp(L.at(0, j) - top2) / denom;
            da.at(0, j) += gv * (soft - (j == n.label ? 1.0 : 0.0));
          }
        }
        break;
      case Op::wd2_fixed_match:
        if (a_needs()) {
          const Tensor& P = nodes_[static_cast<std::size_t>(n.a)].value;
          Tensor& da = ga();
          const double gv = g.at(0, 0);
          for (int i = 0; i < P.rows; ++i) {
            const double b = P.at(i, 0), d = P.at(i, 1);
            const int j = n.routing[static_cast<std::size_t>(i)];
            if (j >= 0) {
              const auto [gb2, gd2] = n.gt[static_cast<std::size_t>(j)];
              da.at(i, 0) += gv * 2.0 * (b - gb2);
              da.at(i, 1) += gv * 2.0 * (d - gd2);
            } else {
              da.at(i, 0) += gv * (b - d);
              da.at(i, 1) += gv * (d - b);
            }
          }
        }
        break;
    }
  }
}

}  // namespace dowker
