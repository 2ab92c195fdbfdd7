// Copyright 2026 The twoview Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "twoview/probe.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "line_reader.hpp"
#include "twoview/errors.hpp"
#include "twoview/rng.hpp"

namespace twoview {
namespace {

Matrix augmented_rows(const Matrix& emb, std::span<const NodeId> nodes) {
  Matrix x(static_cast<Eigen::Index>(nodes.size()), emb.cols() + 1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    require(nodes[i] >= 0 && nodes[i] < emb.rows(), "probe: node outside embedding table");
    const auto r = static_cast<Eigen::Index>(i);
    x.row(r).head(emb.cols()) = emb.row(nodes[i]);
    x(r, emb.cols()) = 1.0;
  }
  return x;
}

// Objective and gradient of the convex probe problem at w.
using Objective = double (*)(const Matrix& x, const Matrix& target, const Matrix& w, double reg,
                             Matrix* grad);

double penalty(const Matrix& w, double reg, Matrix* grad) {
  const auto body = w.topRows(w.rows() - 1);
  if (grad) {
    grad->topRows(w.rows() - 1) += reg * body;
  }
  return 0.5 * reg * body.squaredNorm();
}

// Mean softmax cross-entropy; target is one-hot n x K.
double softmax_objective(const Matrix& x, const Matrix& target, const Matrix& w, double reg,
                         Matrix* grad) {
  Matrix logits = x * w;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double top = logits.row(i).maxCoeff();
    auto row = logits.row(i);
    row.array() = (row.array() - top).exp();
    const double z = row.sum();
    row /= z;
    for (Eigen::Index k = 0; k < row.size(); ++k) {
      if (target(i, k) > 0.0) loss -= std::log(std::max(row(k), 1e-300));
    }
  }
  const double inv_n = 1.0 / static_cast<double>(x.rows());
  if (grad) *grad = x.transpose() * (logits - target) * inv_n;
  return loss * inv_n + penalty(w, reg, grad);
}

// Mean binary cross-entropy of a single logistic model; target is n x 1.
double logistic_objective(const Matrix& x, const Matrix& target, const Matrix& w, double reg,
                          Matrix* grad) {
  const Matrix logits = x * w;
  Matrix residual(logits.rows(), 1);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double s = logits(i, 0);
    const double y = target(i, 0);
    // log(1 + exp(-|s|)) + max(s, 0) - y s, stable for either sign.
    loss += std::log1p(std::exp(-std::abs(s))) + std::max(s, 0.0) - y * s;
    residual(i, 0) = 1.0 / (1.0 + std::exp(-s)) - y;
  }
  const double inv_n = 1.0 / static_cast<double>(x.rows());
  if (grad) *grad = x.transpose() * residual * inv_n;
  return loss * inv_n + penalty(w, reg, grad);
}

Matrix minimize(Objective f, const Matrix& x, const Matrix& target, Matrix w, double reg,
                const ProbeOptions& opt, std::vector<double>& trace) {
  Matrix grad(w.rows(), w.cols());
  double value = f(x, target, w, reg, &grad);
  trace.push_back(value);
  double step = 1.0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    const double gnorm2 = grad.squaredNorm();
    if (std::sqrt(gnorm2) < opt.tolerance) break;
    step = std::min(step * 2.0, 1e6);
    Matrix trial;
    double trial_value;
    for (;;) {
      trial = w - step * grad;
      trial_value = f(x, target, trial, reg, nullptr);
      if (trial_value <= value - 0.5 * step * gnorm2) break;
      step *= 0.5;
      if (step < 1e-20) return w;
    }
    w = std::move(trial);
    value = f(x, target, w, reg, &grad);
    trace.push_back(value);
  }
  return w;
}

double sigmoid(double s) { return 1.0 / (1.0 + std::exp(-s)); }

}  // namespace

LinearProbe fit_probe(const Matrix& embeddings, const LabeledDataset& ds, double reg,
                      std::uint64_t seed, const ProbeOptions& options) {
  if (!ds.labeled()) throw ConfigError("dataset has no labels", "labels");
  if (ds.split.train.empty()) throw ConfigError("train split is empty", "split");
  if (!(reg >= 0.0)) throw ConfigError("must be non-negative", "probe_reg");
  require(embeddings.rows() == ds.num_nodes(), "fit_probe: embedding rows do not match dataset");
  const int k = ds.labels.num_classes;
  const auto& nodes = ds.split.train;
  const Matrix x = augmented_rows(embeddings, nodes);

  LinearProbe probe;
  probe.kind = ds.labels.kind;
  probe.reg = reg;
  Rng rng(seed);
  Matrix w0(x.cols(), k);
  for (Eigen::Index i = 0; i < w0.size(); ++i) w0.data()[i] = 0.01 * rng.normal();

  if (probe.kind == LabelKind::multiclass) {
    if (k < 2) throw ConfigError("multiclass probing needs at least two classes", "labels");
    Matrix target = Matrix::Zero(x.rows(), k);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      target(static_cast<Eigen::Index>(i), ds.labels.classes[nodes[i]]) = 1.0;
    }
    probe.objective_trace.emplace_back();
    probe.weights = minimize(softmax_objective, x, target, w0, reg, options,
                             probe.objective_trace.back());
  } else {
    probe.weights.resize(x.cols(), k);
    for (int c = 0; c < k; ++c) {
      Matrix target(x.rows(), 1);
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        target(static_cast<Eigen::Index>(i), 0) = ds.labels.indicators(nodes[i], c);
      }
      probe.objective_trace.emplace_back();
      probe.weights.col(c) = minimize(logistic_objective, x, target, w0.col(c), reg, options,
                                      probe.objective_trace.back());
    }
  }
  return probe;
}

Matrix probe_scores(const LinearProbe& probe, const Matrix& embeddings,
                    std::span<const NodeId> nodes) {
  require(embeddings.cols() + 1 == probe.weights.rows(), "probe: embedding width mismatch");
  return augmented_rows(embeddings, nodes) * probe.weights;
}

std::vector<int> predict_classes(const LinearProbe& probe, const Matrix& embeddings,
                                 std::span<const NodeId> nodes) {
  const Matrix s = probe_scores(probe, embeddings, nodes);
  std::vector<int> out(nodes.size());
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    int best = 0;
    for (Eigen::Index c = 1; c < s.cols(); ++c) {
      if (s(i, c) > s(i, best)) best = static_cast<int>(c);
    }
    out[i] = best;
  }
  return out;
}

double accuracy(const LinearProbe& probe, const Matrix& embeddings, const LabeledDataset& ds,
                SplitPart part) {
  require(ds.labels.kind == LabelKind::multiclass && probe.kind == LabelKind::multiclass,
          "accuracy needs a multiclass dataset");
  const auto& nodes = split_nodes(ds.split, part);
  if (nodes.empty()) return 0.0;
  const auto pred = predict_classes(probe, embeddings, nodes);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) hits += pred[i] == ds.labels.classes[nodes[i]];
  return static_cast<double>(hits) / static_cast<double>(nodes.size());
}

double micro_f1_from_counts(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
  const std::int64_t denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : static_cast<double>(2 * tp) / static_cast<double>(denom);
}

double micro_f1(const LinearProbe& probe, const Matrix& embeddings, const LabeledDataset& ds,
                SplitPart part, double threshold) {
  require(ds.labels.kind == LabelKind::multilabel && probe.kind == LabelKind::multilabel,
          "micro_f1 needs a multilabel dataset");
  const auto& nodes = split_nodes(ds.split, part);
  const Matrix s = probe_scores(probe, embeddings, nodes);
  std::int64_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (Eigen::Index c = 0; c < s.cols(); ++c) {
      const bool predicted = sigmoid(s(static_cast<Eigen::Index>(i), c)) >= threshold;
      const bool actual = ds.labels.indicators(nodes[i], c) != 0;
      tp += predicted && actual;
      fp += predicted && !actual;
      fn += !predicted && actual;
    }
  }
  return micro_f1_from_counts(tp, fp, fn);
}

std::string MetricSummary::line() const {
  char buf[256];
  std::snprintf(buf, sizeof buf, "metric=%s mean=%.6f std=%.6f runs=%d", name.c_str(), mean, std,
                runs);
  return buf;
}

MetricSummary summarize(std::string name, std::span<const double> values) {
  MetricSummary m;
  m.name = std::move(name);
  m.runs = static_cast<int>(values.size());
  if (values.empty()) return m;
  m.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return m;
}

void save_embeddings(const Matrix& embeddings, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << embeddings.rows() << ' ' << embeddings.cols() << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < embeddings.rows(); ++i) {
    out << i;
    for (Eigen::Index j = 0; j < embeddings.cols(); ++j) {
      std::snprintf(buf, sizeof buf, " %.9g", embeddings(i, j));
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw Error("write failed for " + path.string());
}

Matrix load_embeddings(const std::filesystem::path& path) {
  detail::LineReader r(path);
  std::string line;
  if (!r.next(line)) r.fail("missing 'N P' header");
  const auto head = detail::tokenize(line);
  if (head.size() != 2) r.fail("header must be 'N P'");
  const auto n = r.parse_int<Eigen::Index>(head[0]);
  const auto p = r.parse_int<Eigen::Index>(head[1]);
  if (n < 0 || p < 1) r.fail("invalid dimensions");
  Matrix out(n, p);
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  while (r.next(line)) {
    const auto toks = detail::tokenize(line);
    if (static_cast<Eigen::Index>(toks.size()) != p + 1) {
      r.fail("expected a node id and " + std::to_string(p) + " values");
    }
    const NodeId u = r.parse_node(toks[0], n);
    if (seen[u]) r.fail("duplicate row for node " + std::to_string(u));
    seen[u] = true;
    for (Eigen::Index j = 0; j < p; ++j) out(u, j) = r.parse_real(toks[j + 1]);
  }
  for (Eigen::Index u = 0; u < n; ++u) {
    if (!seen[u]) throw FormatError(path.string() + ": no row for node " + std::to_string(u));
  }
  return out;
}

}  // namespace twoview
