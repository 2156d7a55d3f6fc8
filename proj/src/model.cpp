#include "dowker/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "dowker/generators.hpp"
#include "json.hpp"

namespace dowker {

namespace {

using nlohmann::json;

constexpr int kModelVersion = 1;

template <typename State, typename Tensors, typename Fn>
void visit_parameters(State& ms, Tensors& out, Fn name_sink) {
  const bool shared = ms.config.share_branches;
  for (std::size_t i = 0; i < ms.layers.size(); ++i) {
    auto& l = ms.layers[i];
    const std::string p = "layer" + std::to_string(i) + ".";
    out.push_back(&l.w_msg_so);
    name_sink(p + "w_msg_so");
    out.push_back(&l.w_self_so);
    name_sink(p + "w_self_so");
    if (!shared) {
      out.push_back(&l.w_msg_si);
      name_sink(p + "w_msg_si");
      out.push_back(&l.w_self_si);
      name_sink(p + "w_self_si");
    }
    out.push_back(&l.w_fuse);
    name_sink(p + "w_fuse");
  }
  auto head = [&](auto& h, const std::string& p) {
    out.push_back(&h.w1);
    name_sink(p + ".w1");
    out.push_back(&h.b1);
    name_sink(p + ".b1");
    out.push_back(&h.w2);
    name_sink(p + ".w2");
    out.push_back(&h.b2);
    name_sink(p + ".b2");
  };
  head(ms.head_pd0, "head_pd0");
  head(ms.head_pd1, "head_pd1");
  head(ms.head_label, "head_label");
}

Tensor glorot(SplitRng& rng, int rows, int cols) {
  Tensor t(rows, cols);
  const double limit = std::sqrt(6.0 / (rows + cols));
  for (double& x : t.data) x = (2.0 * rng.uniform() - 1.0) * limit;
  return t;
}

}  // namespace

std::vector<Tensor*> ModelState::parameters() {
  std::vector<Tensor*> out;
  visit_parameters(*this, out, [](const std::string&) {});
  return out;
}

std::vector<const Tensor*> ModelState::parameters() const {
  std::vector<const Tensor*> out;
  visit_parameters(*this, out, [](const std::string&) {});
  return out;
}

std::vector<std::string> ModelState::parameter_names() const {
  std::vector<const Tensor*> sink;
  std::vector<std::string> names;
  visit_parameters(*this, sink, [&](const std::string& n) { names.push_back(n); });
  return names;
}

ModelState init_model(const ModelConfig& cfg, std::uint64_t seed) {
  if (cfg.hidden < 1 || cfg.layers < 1 || cfg.classes < 1)
    throw std::invalid_argument("init_model: need hidden, layers, classes >= 1");
  ModelState ms;
  ms.config = cfg;
  ms.seed = seed;
  SplitRng rng(seed);
  const int d = cfg.hidden;
  for (int m = 0; m < cfg.layers; ++m) {
    const int in = m == 0 ? 1 : d;
    LayerParams l;
    l.w_msg_so = glorot(rng, in, d);
    l.w_self_so = glorot(rng, in, d);
    if (!cfg.share_branches) {
      l.w_msg_si = glorot(rng, in, d);
      l.w_self_si = glorot(rng, in, d);
    }
    l.w_fuse = glorot(rng, 2 * d, d);
    ms.layers.push_back(std::move(l));
  }
  auto mk_head = [&](int out_dim) {
    Mlp h;
    h.w1 = glorot(rng, d, d);
    // Slightly positive so ReLU units start active even on all-zero rows;
    // an exact-zero pre-activation would sit on the kink and defeat
    // finite-difference gradient validation.
    h.b1 = Tensor(1, d);
    for (double& x : h.b1.data) x = 0.01;
    h.w2 = glorot(rng, d, out_dim);
    h.b2 = Tensor(1, out_dim);
    return h;
  };
  ms.head_pd0 = mk_head(2);
  ms.head_pd1 = mk_head(2);
  ms.head_label = mk_head(cfg.classes);

  for (Tensor* t : ms.parameters()) {
    ms.adam_m.push_back(Tensor(t->rows, t->cols));
    ms.adam_v.push_back(Tensor(t->rows, t->cols));
  }
  return ms;
}

Tensor init_features(const WeightedDigraph& g) {
  Tensor h0(static_cast<int>(g.edges.size()), 1);
  for (std::size_t e = 0; e < g.edges.size(); ++e) h0.data[e] = g.edges[e].weight;
  return h0;
}

ModelBinding bind_model(Tape& tape, const ModelState& ms) {
  ModelBinding b;
  for (const Tensor* t : ms.parameters()) b.params.push_back(tape.param(*t));
  return b;
}

namespace {

// Ref lookup helpers that mirror the parameters() enumeration order.
struct BoundModel {
  const ModelState& ms;
  const ModelBinding& bind;
  std::size_t cursor = 0;

  Tape::Ref next() { return bind.params.at(cursor++); }
};

struct BoundLayer {
  Tape::Ref w_msg_so, w_self_so, w_msg_si, w_self_si, w_fuse;
};

struct BoundMlp {
  Tape::Ref w1, b1, w2, b2;
};

struct BoundRefs {
  std::vector<BoundLayer> layers;
  BoundMlp pd0, pd1, label;
};

BoundRefs unpack(const ModelState& ms, const ModelBinding& bind) {
  BoundModel cur{ms, bind};
  BoundRefs out;
  for (std::size_t i = 0; i < ms.layers.size(); ++i) {
    BoundLayer l{};
    l.w_msg_so = cur.next();
    l.w_self_so = cur.next();
    if (ms.config.share_branches) {
      l.w_msg_si = l.w_msg_so;
      l.w_self_si = l.w_self_so;
    } else {
      l.w_msg_si = cur.next();
      l.w_self_si = cur.next();
    }
    l.w_fuse = cur.next();
    out.layers.push_back(l);
  }
  auto mlp = [&] {
    BoundMlp h{};
    h.w1 = cur.next();
    h.b1 = cur.next();
    h.w2 = cur.next();
    h.b2 = cur.next();
    return h;
  };
  out.pd0 = mlp();
  out.pd1 = mlp();
  out.label = mlp();
  if (cur.cursor != bind.params.size())
    throw std::logic_error("model binding drifted from parameter order");
  return out;
}

Tape::Ref mlp_forward(Tape& t, const BoundMlp& h, Tape::Ref x) {
  Tape::Ref a = t.relu(t.add_bias(t.matmul(x, h.w1), h.b1));
  return t.add_bias(t.matmul(a, h.w2), h.b2);
}

}  // namespace

Tape::Ref sslgnn_forward(Tape& tape, const ModelState& ms, const ModelBinding& bind,
                         const LineGraphPair& lines, const Tensor& h0) {
  if (lines.source.node_count() != lines.sink.node_count())
    throw std::invalid_argument("sslgnn_forward: line graphs disagree on node count");
  if (static_cast<std::size_t>(h0.rows) != lines.source.node_count())
    throw std::invalid_argument("sslgnn_forward: h0 row count mismatch");
  BoundRefs refs = unpack(ms, bind);
  Tape::Ref h = tape.input(h0);
  for (const BoundLayer& l : refs.layers) {
    Tape::Ref so = tape.relu(tape.add(tape.matmul(h, l.w_self_so),
                                      tape.spmm_sym(&lines.source.adjacency,
                                                    tape.matmul(h, l.w_msg_so))));
    Tape::Ref si = tape.relu(tape.add(tape.matmul(h, l.w_self_si),
                                      tape.spmm_sym(&lines.sink.adjacency,
                                                    tape.matmul(h, l.w_msg_si))));
    h = tape.relu(tape.matmul(tape.concat_cols(so, si), l.w_fuse));
  }
  return h;
}

Tape::Ref predict_pd0(Tape& tape, const ModelState& ms, const ModelBinding& bind,
                      Tape::Ref embeddings) {
  BoundRefs refs = unpack(ms, bind);
  return tape.minmax_rows(tape.sigmoid(mlp_forward(tape, refs.pd0, embeddings)));
}

Tape::Ref predict_pd1(Tape& tape, const ModelState& ms, const ModelBinding& bind,
                      Tape::Ref embeddings,
                      const std::vector<std::vector<EdgeId>>* union_adj,
                      std::vector<double> node_weights) {
  BoundRefs refs = unpack(ms, bind);
  Tape::Ref scaled = tape.row_scale(embeddings, std::move(node_weights));
  Tape::Ref agg = tape.spmm_sym(union_adj, scaled);
  return tape.minmax_rows(tape.sigmoid(mlp_forward(tape, refs.pd1, agg)));
}

Tape::Ref predict_label_scores(Tape& tape, const ModelState& ms, const ModelBinding& bind,
                               Tape::Ref embeddings) {
  BoundRefs refs = unpack(ms, bind);
  Tape::Ref pooled =
      ms.config.mean_pool ? tape.row_mean(embeddings) : tape.row_max(embeddings);
  return mlp_forward(tape, refs.label, pooled);
}

std::vector<std::vector<EdgeId>> union_adjacency(const LineGraphPair& lines) {
  std::vector<std::vector<EdgeId>> out(lines.source.adjacency.size());
  for (std::size_t u = 0; u < out.size(); ++u) {
    const auto& a = lines.source.adjacency[u];
    const auto& b = lines.sink.adjacency[u];
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out[u]));
  }
  return out;
}

PersistenceDiagram points_to_diagram(const Tensor& points, int dim) {
  if (points.cols != 2) throw std::invalid_argument("points_to_diagram: need rows x 2");
  PersistenceDiagram d;
  for (int i = 0; i < points.rows; ++i)
    d.points.push_back({points.at(i, 0), points.at(i, 1), static_cast<std::uint8_t>(dim)});
  return d;
}

namespace {

json tensor_json(const Tensor& t) {
  return json{{"rows", t.rows}, {"cols", t.cols}, {"data", t.data}};
}

Tensor tensor_from_json(const json& j, int rows, int cols, const std::string& name) {
  Tensor t;
  t.rows = j.at("rows").get<int>();
  t.cols = j.at("cols").get<int>();
  t.data = j.at("data").get<std::vector<double>>();
  if (t.rows != rows || t.cols != cols ||
      t.data.size() != static_cast<std::size_t>(rows) * cols)
    throw std::runtime_error("load_model: shape mismatch for " + name);
  return t;
}

}  // namespace

void save_model(const ModelState& ms, const std::string& path) {
  json j;
  j["format"] = "dowker-sslgnn";
  j["version"] = kModelVersion;
  j["config"] = {{"hidden", ms.config.hidden},
                 {"layers", ms.config.layers},
                 {"classes", ms.config.classes},
                 {"share_branches", ms.config.share_branches},
                 {"mean_pool", ms.config.mean_pool}};
  j["seed"] = ms.seed;
  j["adam_step"] = ms.adam_step;
  json tensors = json::object();
  const auto names = ms.parameter_names();
  const auto params = ms.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    tensors[names[i]] = tensor_json(*params[i]);
    tensors[names[i] + ".adam_m"] = tensor_json(ms.adam_m[i]);
    tensors[names[i] + ".adam_v"] = tensor_json(ms.adam_v[i]);
  }
  j["tensors"] = std::move(tensors);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

ModelState load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j = json::parse(in);
  if (j.value("format", "") != "dowker-sslgnn")
    throw std::runtime_error("load_model: not a model file: " + path);
  if (j.at("version").get<int>() != kModelVersion)
    throw std::runtime_error("load_model: unsupported version in " + path);
  ModelConfig cfg;
  const json& c = j.at("config");
  cfg.hidden = c.at("hidden").get<int>();
  cfg.layers = c.at("layers").get<int>();
  cfg.classes = c.at("classes").get<int>();
  cfg.share_branches = c.at("share_branches").get<bool>();
  cfg.mean_pool = c.at("mean_pool").get<bool>();

  ModelState ms = init_model(cfg, j.at("seed").get<std::uint64_t>());
  ms.adam_step = j.at("adam_step").get<std::int64_t>();
  const json& tensors = j.at("tensors");
  const auto names = ms.parameter_names();
  auto params = ms.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Tensor& shape = *params[i];
    *params[i] = tensor_from_json(tensors.at(names[i]), shape.rows, shape.cols, names[i]);
    ms.adam_m[i] = tensor_from_json(tensors.at(names[i] + ".adam_m"), shape.rows,
                                    shape.cols, names[i] + ".adam_m");
    ms.adam_v[i] = tensor_from_json(tensors.at(names[i] + ".adam_v"), shape.rows,
                                    shape.cols, names[i] + ".adam_v");
  }
  return ms;
}

}  // namespace dowker
