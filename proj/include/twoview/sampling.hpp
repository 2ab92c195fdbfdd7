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

#include <cstddef>
#include <span>
#include <vector>

#include "twoview/dataset.hpp"
#include "twoview/graph.hpp"
#include "twoview/rng.hpp"

namespace twoview {

/// Node-induced neighborhood of `center`. Local id i corresponds to global
/// node id_map[i]; local ids follow discovery order, so center_local is 0.
struct Subgraph {
  NodeId center = 0;
  Graph local_graph;
  FeatureMatrix local_features;
  std::vector<NodeId> id_map;
  NodeId center_local = 0;

  NodeId num_nodes() const { return local_graph.num_nodes(); }
};

/// Per-level neighbor counts for fixed-fanout sampling.
struct FanoutConfig {
  std::vector<int> fanouts;

  /// Throws ConfigError if any fanout is below 1.
  void validate() const;
  /// 1 + f1 + f1*f2 + ... : the largest node count a sample can reach.
  std::size_t max_nodes() const;
};

/// Subgraph induced on `nodes` (discovery order; nodes[0] must be the center).
Subgraph make_subgraph(const Graph& g, const FeatureMatrix& feats, std::span<const NodeId> nodes);

/// Exact BFS ball of radius `depth` around u with all induced edges.
Subgraph l_hop_subgraph(const Graph& g, const FeatureMatrix& feats, NodeId u, int depth);

/// Level-by-level expansion where every frontier node draws
/// min(degree, fanout) distinct neighbors uniformly without replacement.
/// All edges among the sampled nodes are kept.
Subgraph sample_fanout_subgraph(const Graph& g, const FeatureMatrix& feats, NodeId u,
                                const FanoutConfig& cfg, Rng& rng);

/// Random permutation of `nodes` cut into batches of `batch_size`; a trailing
/// batch with fewer than two nodes is dropped. Throws ConfigError if
/// batch_size < 2.
std::vector<std::vector<NodeId>> minibatches(std::span<const NodeId> nodes, std::size_t batch_size,
                                             Rng& rng);

}  // namespace twoview
