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

#include <utility>

#include "twoview/dataset.hpp"
#include "twoview/graph.hpp"
#include "twoview/rng.hpp"
#include "twoview/sampling.hpp"

namespace twoview {

struct PerturbConfig {
  double p_edge = 0.15;
  double p_feat = 0.6;
  /// Inverted-dropout rescaling of surviving feature entries by 1/(1-p_feat).
  bool scale_features = true;

  /// Throws ConfigError on probabilities outside [0, 1] or scaling with p_feat = 1.
  void validate() const;
};

/// Removes each undirected edge independently with probability p_edge.
/// One coin per undirected edge, drawn in edge_list() order.
Graph drop_edges(const Graph& g, double p_edge, Rng& rng);

/// Zeroes each entry independently with probability p_feat, optionally
/// rescaling survivors by 1/(1-p_feat).
FeatureMatrix mask_features(const FeatureMatrix& x, double p_feat, bool scale, Rng& rng);

/// One perturbed copy (edges first, then features).
Subgraph perturb(const Subgraph& sub, const PerturbConfig& cfg, Rng& rng);

/// Two independently perturbed copies of `sub`; ids and center are kept.
std::pair<Subgraph, Subgraph> make_views(const Subgraph& sub, const PerturbConfig& cfg, Rng& rng);

}  // namespace twoview
