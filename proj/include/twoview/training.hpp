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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "twoview/contrastive.hpp"
#include "twoview/dataset.hpp"
#include "twoview/encoder.hpp"
#include "twoview/optim.hpp"
#include "twoview/perturb.hpp"
#include "twoview/sampling.hpp"

namespace twoview {

enum class Regime { transductive, inductive };

std::string_view to_string(Regime r);
Regime parse_regime(std::string_view name);

struct TrainConfig {
  Regime regime = Regime::transductive;
  EncoderVariant variant = EncoderVariant::two_layer;
  Eigen::Index embed_dim = 512;
  /// Subgraph radius for inductive training without fanouts; defaults to the encoder depth.
  std::optional<int> hops;
  /// Inductive only. Empty means exact L-hop subgraphs.
  FanoutConfig fanout;
  PerturbConfig perturb;
  LossConfig loss;
  double lr = 1e-3;
  double weight_decay = 1e-3;
  AdamConfig adam;
  int epochs = 100;
  std::size_t batch_size = 256;
  /// Inductive only: train on the graph induced by the train split, hiding
  /// val/test nodes until inference.
  bool holdout_unseen = true;
  std::uint64_t seed = 0;
  std::uint64_t inference_seed = 0;
  int threads = 1;

  int subgraph_depth() const { return hops.value_or(depth(variant)); }
  /// Throws ConfigError naming the offending key.
  void validate() const;
};

struct EpochRecord {
  std::int64_t epoch = 0;
  /// Mean contrastive batch loss over the epoch's optimizer steps.
  double loss = 0.0;
  /// Mean per-step bound log(2M - 2) - loss / 2.
  double mi_bound = 0.0;
  /// Wall clock; not persisted in checkpoints.
  double seconds = 0.0;
};

struct TrainHistory {
  std::vector<EpochRecord> records;
};

/// Everything training may read. Labels are deliberately absent.
struct TrainingData {
  const Graph* graph = nullptr;
  const FeatureMatrix* features = nullptr;
  /// Nodes seen by the inductive regime; empty means all nodes.
  std::vector<NodeId> train_nodes;
};

TrainingData training_data(const LabeledDataset& ds);

/// One encoder input: features, propagation matrix and the rows whose
/// embeddings enter the loss (empty means every row).
struct ViewInput {
  FeatureMatrix features;
  NormalizedAdjacency a_hat{SparseMatrix()};
  std::vector<Eigen::Index> centers;
};

/// The two views consumed by one optimizer step.
struct StepInput {
  ViewInput first;
  ViewInput second;
};

/// Two independent perturbations of the whole graph.
StepInput full_graph_views(const Graph& g, const FeatureMatrix& x, const PerturbConfig& cfg,
                           Rng& rng);

/// Packs per-node view pairs into two block-diagonal inputs whose centers
/// are the subgraph centers in order.
StepInput pack_subgraph_views(std::span<const std::pair<Subgraph, Subgraph>> views);

/// Contrastive loss of `params` on `input`. Fills `grads` (one matrix per
/// weight, in order) when non-null.
double contrastive_objective(const EncoderParams& params, const StepInput& input,
                             const LossConfig& cfg, std::vector<Matrix>* grads);

struct TrainResult {
  EncoderParams params;
  TrainHistory history;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Transductive: one step per epoch on two full-graph views.
/// Inductive: one step per minibatch of sampled-subgraph views.
/// Throws ConfigError on invalid settings and TrainingError on a non-finite loss.
TrainResult train(const TrainingData& data, const TrainConfig& cfg, const EpochCallback& on_epoch = {});
TrainResult train(const LabeledDataset& ds, const TrainConfig& cfg, const EpochCallback& on_epoch = {});

/// Embeddings of the unperturbed graph. Inductive configs embed each node
/// through its own sampled subgraph drawn with cfg.inference_seed.
EmbeddingMatrix embed(const EncoderParams& params, const Graph& g, const FeatureMatrix& x,
                      const TrainConfig& cfg);
EmbeddingMatrix embed(const EncoderParams& params, const LabeledDataset& ds, const TrainConfig& cfg);

}  // namespace twoview
