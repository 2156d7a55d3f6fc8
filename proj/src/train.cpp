#include "dowker/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "dowker/generators.hpp"
#include "dowker/metrics.hpp"

namespace dowker {

namespace {

std::vector<std::pair<double, double>> capped_positive(const PersistenceDiagram& d,
                                                       double cap) {
  std::vector<std::pair<double, double>> out;
  for (const PdPoint& p : d.points) {
    const double death = p.death ? *p.death : cap;
    if (death > p.birth) out.push_back({p.birth, death});
  }
  return out;
}

PersistenceDiagram pairs_to_diagram(const std::vector<std::pair<double, double>>& pts,
                                    int dim) {
  PersistenceDiagram d;
  for (auto [b, dd] : pts) d.points.push_back({b, dd, static_cast<std::uint8_t>(dim)});
  return d;
}

// Optimal matching of predicted rows against gt, frozen for the tape. Both
// sides keep all points (zero-persistence predictions cost and gradient
// nothing against the diagonal), so match indices align with tensor rows.
std::vector<int> frozen_matching(const Tensor& pred,
                                 const std::vector<std::pair<double, double>>& gt) {
  PersistenceDiagram a = points_to_diagram(pred, 0);
  PersistenceDiagram b = pairs_to_diagram(gt, 0);
  WassersteinOptions opts;
  opts.drop_zero = false;
  WassersteinResult r = wasserstein2(a, b, opts);
  return r.match_a;
}

struct SampleLossRefs {
  Tape::Ref loss;
};

SampleLossRefs sample_loss(Tape& tape, const ModelState& ms, const ModelBinding& bind,
                           const TrainSample& s, double lambda) {
  Tape::Ref H = sslgnn_forward(tape, ms, bind, s.lines, s.h0);
  Tape::Ref p0 = predict_pd0(tape, ms, bind, H);
  Tape::Ref p1 = predict_pd1(tape, ms, bind, H, &s.union_adj, s.lines.source.node_weight);

  Tape::Ref wd0 = tape.wd2_fixed_match(p0, s.gt0, frozen_matching(tape.value(p0), s.gt0));
  Tape::Ref wd1 = tape.wd2_fixed_match(p1, s.gt1, frozen_matching(tape.value(p1), s.gt1));
  Tape::Ref loss = tape.add(wd0, wd1);
  if (s.label && lambda > 0.0) {
    Tape::Ref scores = predict_label_scores(tape, ms, bind, H);
    loss = tape.add(loss, tape.scale(tape.softmax_xent(scores, *s.label), lambda));
  }
  return {loss};
}

}  // namespace

TrainSample make_sample(const WeightedDigraph& g, double inf_cap) {
  TrainSample s;
  s.graph = g;
  s.lines = build_line_graphs(g);
  s.union_adj = union_adjacency(s.lines);
  s.h0 = init_features(g);
  PersistenceResult pr = compute_persistence(g, DowkerKind::sink);
  s.gt0 = capped_positive(pr.pd0, inf_cap);
  s.gt1 = capped_positive(pr.pd1, inf_cap);
  s.label = g.label;
  return s;
}

double batch_loss(const ModelState& ms, const std::vector<const TrainSample*>& batch,
                  double lambda, std::vector<Tensor>* grads) {
  if (batch.empty()) throw std::invalid_argument("batch_loss: empty batch");
  Tape tape;
  ModelBinding bind = bind_model(tape, ms);
  Tape::Ref total = -1;
  for (const TrainSample* s : batch) {
    Tape::Ref l = sample_loss(tape, ms, bind, *s, lambda).loss;
    total = total < 0 ? l : tape.add(total, l);
  }
  total = tape.scale(total, 1.0 / static_cast<double>(batch.size()));
  const double value = tape.value(total).at(0, 0);
  if (grads) {
    tape.backward(total);
    grads->clear();
    for (Tape::Ref p : bind.params) grads->push_back(tape.grad(p));
  }
  return value;
}

ModelEval evaluate_sample(const ModelState& ms, const TrainSample& s, double inf_cap) {
  Tape tape;
  ModelBinding bind = bind_model(tape, ms);
  Tape::Ref H = sslgnn_forward(tape, ms, bind, s.lines, s.h0);
  Tape::Ref p0 = predict_pd0(tape, ms, bind, H);
  Tape::Ref p1 = predict_pd1(tape, ms, bind, H, &s.union_adj, s.lines.source.node_weight);

  PersistenceDiagram pred0 = points_to_diagram(tape.value(p0), 0);
  PersistenceDiagram pred1 = points_to_diagram(tape.value(p1), 1);
  PersistenceDiagram gt0 = pairs_to_diagram(s.gt0, 0);
  PersistenceDiagram gt1 = pairs_to_diagram(s.gt1, 1);

  WassersteinOptions opts;
  opts.inf_cap = inf_cap;
  ModelEval ev;
  ev.wd0 = wasserstein2(pred0, gt0, opts).distance;
  ev.wd1 = wasserstein2(pred1, gt1, opts).distance;
  PiConfig pi;
  ev.pie0 = pie_distance(persistence_image(pred0, pi), persistence_image(gt0, pi));
  ev.pie1 = pie_distance(persistence_image(pred1, pi), persistence_image(gt1, pi));

  Tape::Ref scores = predict_label_scores(tape, ms, bind, H);
  const Tensor& sc = tape.value(scores);
  int best = 0;
  for (int j = 1; j < sc.cols; ++j)
    if (sc.at(0, j) > sc.at(0, best)) best = j;
  ev.predicted_label = best;
  return ev;
}

TrainResult train(ModelState& ms, const std::vector<TrainSample>& data,
                  const TrainConfig& cfg) {
  if (data.empty()) throw std::invalid_argument("train: empty dataset");
  if (cfg.epochs < 1 || cfg.batch < 1 || cfg.lr < 0.0 || cfg.lambda < 0.0)
    throw std::invalid_argument("train: bad config");

  SplitRng rng(cfg.seed);
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);

  TrainResult result;
  std::size_t test_count =
      data.size() > 1
          ? std::max<std::size_t>(
                cfg.test_fraction > 0.0 ? 1 : 0,
                static_cast<std::size_t>(std::llround(cfg.test_fraction * data.size())))
          : 0;
  if (test_count >= data.size()) test_count = data.size() - 1;
  result.train_indices.assign(order.begin(), order.end() - test_count);
  result.test_indices.assign(order.end() - test_count, order.end());

  auto params = ms.parameters();
  std::vector<Tensor> grads;
  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.shuffle(result.train_indices);
    double epoch_loss = 0.0;
    std::size_t steps = 0;
    for (std::size_t at = 0; at < result.train_indices.size();
         at += static_cast<std::size_t>(cfg.batch)) {
      std::vector<const TrainSample*> batch;
      for (std::size_t i = at;
           i < std::min(result.train_indices.size(),
                        at + static_cast<std::size_t>(cfg.batch));
           ++i)
        batch.push_back(&data[result.train_indices[i]]);
      epoch_loss += batch_loss(ms, batch, cfg.lambda, &grads);
      ++steps;

      ++ms.adam_step;
      const double c1 = 1.0 - std::pow(beta1, static_cast<double>(ms.adam_step));
      const double c2 = 1.0 - std::pow(beta2, static_cast<double>(ms.adam_step));
      for (std::size_t p = 0; p < params.size(); ++p) {
        Tensor& theta = *params[p];
        Tensor& m = ms.adam_m[p];
        Tensor& v = ms.adam_v[p];
        const Tensor& g = grads[p];
        for (std::size_t i = 0; i < theta.data.size(); ++i) {
          m.data[i] = beta1 * m.data[i] + (1.0 - beta1) * g.data[i];
          v.data[i] = beta2 * v.data[i] + (1.0 - beta2) * g.data[i] * g.data[i];
          const double mhat = m.data[i] / c1;
          const double vhat = v.data[i] / c2;
          theta.data[i] -= cfg.lr * mhat / (std::sqrt(vhat) + eps);
        }
      }
    }

    EpochStats st;
    st.epoch = epoch;
    st.train_loss = steps ? epoch_loss / static_cast<double>(steps) : 0.0;
    double wd0 = 0.0, wd1 = 0.0;
    std::size_t labeled = 0, correct = 0;
    for (std::size_t idx : result.test_indices) {
      ModelEval ev = evaluate_sample(ms, data[idx], cfg.inf_cap);
      wd0 += ev.wd0;
      wd1 += ev.wd1;
      if (data[idx].label) {
        ++labeled;
        correct += ev.predicted_label && *ev.predicted_label == *data[idx].label;
      }
    }
    const double tn = static_cast<double>(result.test_indices.size());
    st.test_wd0 = tn > 0 ? wd0 / tn : 0.0;
    st.test_wd1 = tn > 0 ? wd1 / tn : 0.0;
    st.accuracy = labeled ? static_cast<double>(correct) / static_cast<double>(labeled)
                          : -1.0;
    result.history.push_back(st);
  }
  return result;
}

std::string history_csv(const TrainResult& r) {
  std::string out = "epoch,train_loss,test_wd0,test_wd1,accuracy\n";
  char buf[160];
  for (const EpochStats& s : r.history) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", s.epoch,
                  s.train_loss, s.test_wd0, s.test_wd1, s.accuracy);
    out += buf;
  }
  return out;
}

GradCheckReport gradient_check(ModelState& ms, const std::vector<const TrainSample*>& batch,
                               double lambda, double h, double tolerance) {
  std::vector<Tensor> analytic;
  batch_loss(ms, batch, lambda, &analytic);

  GradCheckReport report;
  auto params = ms.parameters();
  const auto names = ms.parameter_names();
  for (std::size_t p = 0; p < params.size(); ++p) {
    GradCheckEntry entry;
    entry.tensor = names[p];
    for (std::size_t i = 0; i < params[p]->data.size(); ++i) {
      double& theta = params[p]->data[i];
      const double saved = theta;
      theta = saved + h;
      const double up = batch_loss(ms, batch, lambda, nullptr);
      theta = saved - h;
      const double down = batch_loss(ms, batch, lambda, nullptr);
      theta = saved;
      const double fd = (up - down) / (2.0 * h);
      const double an = analytic[p].data[i];
      const double rel = std::abs(an - fd) / std::max({std::abs(an), std::abs(fd), 1e-3});
      entry.max_rel_error = std::max(entry.max_rel_error, rel);
    }
    report.max_rel_error = std::max(report.max_rel_error, entry.max_rel_error);
    report.entries.push_back(std::move(entry));
  }
  report.pass = report.max_rel_error < tolerance;
  return report;
}

}  // namespace dowker
