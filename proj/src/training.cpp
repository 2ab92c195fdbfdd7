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

#include "twoview/training.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "twoview/errors.hpp"
#include "twoview/parallel.hpp"

namespace twoview {
namespace {

// Stream tags for derive_seed; each random decision reads its own stream.
enum Stream : std::uint64_t {
  kInitStream = 1,
  kFullGraphViews = 2,
  kBatchOrder = 3,
  kNodeViews = 4,
  kInference = 5,
};

constexpr std::size_t kInferenceChunk = 256;

Subgraph neighborhood(const Graph& g, const FeatureMatrix& x, NodeId u, const TrainConfig& cfg,
                      Rng& rng) {
  if (cfg.fanout.fanouts.empty()) return l_hop_subgraph(g, x, u, cfg.subgraph_depth());
  return sample_fanout_subgraph(g, x, u, cfg.fanout, rng);
}

ViewInput pack(std::span<const Subgraph* const> subs) {
  std::vector<const Graph*> graphs;
  Eigen::Index rows = 0;
  for (const Subgraph* s : subs) {
    graphs.push_back(&s->local_graph);
    rows += s->num_nodes();
  }
  ViewInput v;
  v.features.resize(rows, subs.empty() ? 0 : subs.front()->local_features.cols());
  Eigen::Index offset = 0;
  for (const Subgraph* s : subs) {
    v.features.middleRows(offset, s->num_nodes()) = s->local_features;
    v.centers.push_back(offset + s->center_local);
    offset += s->num_nodes();
  }
  v.a_hat = normalize_adjacency(disjoint_union(graphs));
  return v;
}

}  // namespace

std::string_view to_string(Regime r) {
  return r == Regime::transductive ? "transductive" : "inductive";
}

Regime parse_regime(std::string_view name) {
  if (name == "transductive") return Regime::transductive;
  if (name == "inductive") return Regime::inductive;
  throw ConfigError("unknown regime '" + std::string(name) +
                        "' (expected transductive or inductive)",
                    "regime");
}

void TrainConfig::validate() const {
  if (embed_dim < 1) throw ConfigError("must be positive", "embed_dim");
  if (epochs < 0) throw ConfigError("must be non-negative", "epochs");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("must be positive", "lr");
  if (!(weight_decay >= 0.0)) throw ConfigError("must be non-negative", "weight_decay");
  if (hops && *hops < 0) throw ConfigError("must be non-negative", "hops");
  if (threads < 1) throw ConfigError("must be at least 1", "threads");
  perturb.validate();
  loss.validate();
  fanout.validate();
  if (regime == Regime::inductive) {
    if (batch_size < 2) throw ConfigError("must be at least 2", "batch_size");
    if (!fanout.fanouts.empty() &&
        static_cast<int>(fanout.fanouts.size()) != depth(variant)) {
      throw ConfigError("needs one entry per encoder layer (" + std::to_string(depth(variant)) +
                            " for " + std::string(to_string(variant)) + ")",
                        "fanouts");
    }
  }
}

TrainingData training_data(const LabeledDataset& ds) {
  return {&ds.graph, &ds.features, ds.split.train};
}

StepInput full_graph_views(const Graph& g, const FeatureMatrix& x, const PerturbConfig& cfg,
                           Rng& rng) {
  StepInput in;
  for (ViewInput* v : {&in.first, &in.second}) {
    const Graph dropped = drop_edges(g, cfg.p_edge, rng);
    v->features = mask_features(x, cfg.p_feat, cfg.scale_features, rng);
    v->a_hat = normalize_adjacency(dropped);
  }
  return in;
}

StepInput pack_subgraph_views(std::span<const std::pair<Subgraph, Subgraph>> views) {
  require(!views.empty(), "pack_subgraph_views: no views");
  std::vector<const Subgraph*> first, second;
  for (const auto& [a, b] : views) {
    first.push_back(&a);
    second.push_back(&b);
  }
  return {pack(first), pack(second)};
}

double contrastive_objective(const EncoderParams& params, const StepInput& input,
                             const LossConfig& cfg, std::vector<Matrix>* grads) {
  Tape tape;
  std::vector<Var> w;
  for (std::size_t k = 0; k < params.weights.size(); ++k) {
    w.push_back(grads ? tape.parameter(k, params.weights[k]) : tape.constant(params.weights[k]));
  }
  auto branch = [&](const ViewInput& v) {
    Var h = encode(tape, params.variant, w, tape.constant(v.features), v.a_hat.shared());
    return v.centers.empty() ? h : tape.gather_rows(h, v.centers);
  };
  Var loss = tape.contrastive_loss(branch(input.first), branch(input.second), cfg);
  if (grads) {
    Gradients g = tape.backward(loss);
    grads->clear();
    for (std::size_t k = 0; k < params.weights.size(); ++k) {
      auto it = g.find(k);
      grads->push_back(it != g.end() ? std::move(it->second)
                                     : Matrix::Zero(params.weights[k].rows(),
                                                    params.weights[k].cols()));
    }
  }
  return loss.value()(0, 0);
}

TrainResult train(const TrainingData& data, const TrainConfig& cfg, const EpochCallback& on_epoch) {
  require(data.graph && data.features, "train: missing graph or features");
  cfg.validate();
  if (data.features->rows() != data.graph->num_nodes()) {
    throw ContractViolation("train: feature rows do not match node count");
  }
  Rng init_rng(derive_seed(cfg.seed, kInitStream));
  TrainResult result;
  result.params =
      EncoderParams::glorot(cfg.variant, data.features->cols(), cfg.embed_dim, init_rng);
  AdamState adam = AdamState::for_params(result.params.weights, cfg.adam);

  // Inductive training only sees the graph induced by its node set.
  Graph local_graph;
  FeatureMatrix local_features;
  const Graph* g = data.graph;
  const FeatureMatrix* x = data.features;
  std::vector<NodeId> centers;
  if (cfg.regime == Regime::inductive) {
    if (cfg.holdout_unseen && !data.train_nodes.empty()) {
      local_graph = induced_subgraph(*data.graph, data.train_nodes);
      local_features.resize(static_cast<Eigen::Index>(data.train_nodes.size()), x->cols());
      for (std::size_t i = 0; i < data.train_nodes.size(); ++i) {
        local_features.row(static_cast<Eigen::Index>(i)) = x->row(data.train_nodes[i]);
      }
      g = &local_graph;
      x = &local_features;
    }
    centers.resize(static_cast<std::size_t>(g->num_nodes()));
    for (NodeId u = 0; u < g->num_nodes(); ++u) centers[u] = u;
    if (centers.size() < 2) throw ConfigError("inductive training needs at least two nodes", "split");
  } else if (g->num_nodes() < 2) {
    throw ConfigError("training needs at least two nodes", "features");
  }

  std::vector<Matrix> grads;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    double loss_sum = 0.0;
    double bound_sum = 0.0;
    std::size_t steps = 0;
    auto step = [&](const StepInput& input, Eigen::Index batch_rows, std::size_t batch_id) {
      const double loss = contrastive_objective(result.params, input, cfg.loss, &grads);
      if (!std::isfinite(loss)) {
        throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                            std::to_string(batch_id));
      }
      adam_step(result.params.weights, grads, adam, cfg.lr, cfg.weight_decay);
      loss_sum += loss;
      bound_sum += batch_mi_bound(loss, batch_rows);
      ++steps;
    };

    if (cfg.regime == Regime::transductive) {
      Rng rng(derive_seed(cfg.seed, kFullGraphViews, static_cast<std::uint64_t>(epoch)));
      step(full_graph_views(*g, *x, cfg.perturb, rng), g->num_nodes(), 0);
    } else {
      Rng order(derive_seed(cfg.seed, kBatchOrder, static_cast<std::uint64_t>(epoch)));
      const auto batches = minibatches(centers, cfg.batch_size, order);
      for (std::size_t b = 0; b < batches.size(); ++b) {
        const auto& batch = batches[b];
        std::vector<std::pair<Subgraph, Subgraph>> views(batch.size());
        parallel_for(batch.size(), cfg.threads, [&](std::size_t i) {
          Rng rng(derive_seed(cfg.seed, kNodeViews, static_cast<std::uint64_t>(batch[i]),
                              static_cast<std::uint64_t>(epoch)));
          views[i] = make_views(neighborhood(*g, *x, batch[i], cfg, rng), cfg.perturb, rng);
        });
        step(pack_subgraph_views(views), static_cast<Eigen::Index>(batch.size()), b);
      }
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.loss = steps ? loss_sum / static_cast<double>(steps) : 0.0;
    rec.mi_bound = steps ? bound_sum / static_cast<double>(steps) : 0.0;
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.history.records.push_back(rec);
    if (on_epoch) on_epoch(rec);
  }
  return result;
}

TrainResult train(const LabeledDataset& ds, const TrainConfig& cfg, const EpochCallback& on_epoch) {
  return train(training_data(ds), cfg, on_epoch);
}

EmbeddingMatrix embed(const EncoderParams& params, const Graph& g, const FeatureMatrix& x,
                      const TrainConfig& cfg) {
  params.validate();
  require(x.cols() == params.input_dim, "embed: feature dimension does not match encoder");
  require(x.rows() == g.num_nodes(), "embed: feature rows do not match node count");
  if (cfg.regime == Regime::transductive) return encode(params, x, normalize_adjacency(g));

  const auto n = static_cast<std::size_t>(g.num_nodes());
  EmbeddingMatrix out(g.num_nodes(), params.embed_dim);
  std::vector<Subgraph> subs;
  for (std::size_t start = 0; start < n; start += kInferenceChunk) {
    const std::size_t end = std::min(n, start + kInferenceChunk);
    subs.assign(end - start, Subgraph{});
    parallel_for(end - start, cfg.threads, [&](std::size_t i) {
      Rng rng(derive_seed(cfg.inference_seed, kInference, start + i));
      subs[i] = neighborhood(g, x, static_cast<NodeId>(start + i), cfg, rng);
    });
    std::vector<const Subgraph*> chunk;
    for (const Subgraph& s : subs) chunk.push_back(&s);
    const ViewInput v = pack(chunk);
    const Matrix h = encode(params, v.features, v.a_hat);
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      out.row(static_cast<Eigen::Index>(start + i)) = h.row(v.centers[i]);
    }
  }
  return out;
}

EmbeddingMatrix embed(const EncoderParams& params, const LabeledDataset& ds, const TrainConfig& cfg) {
  return embed(params, ds.graph, ds.features, cfg);
}

}  // namespace twoview
