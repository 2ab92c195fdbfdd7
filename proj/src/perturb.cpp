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

#include "twoview/perturb.hpp"

#include <string>

#include "twoview/errors.hpp"

namespace twoview {
namespace {

void check_probability(double p, const char* key) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError("probability must lie in [0, 1], got " + std::to_string(p), key);
  }
}

}  // namespace

void PerturbConfig::validate() const {
  check_probability(p_edge, "p_edge");
  check_probability(p_feat, "p_feat");
  if (scale_features && p_feat == 1.0) {
    throw ConfigError("rescaling is undefined when every feature is dropped", "p_feat");
  }
}

Graph drop_edges(const Graph& g, double p_edge, Rng& rng) {
  check_probability(p_edge, "p_edge");
  std::vector<Edge> kept;
  const auto edges = g.edge_list();
  kept.reserve(edges.size());
  for (const Edge& e : edges) {
    if (!rng.bernoulli(p_edge)) kept.push_back(e);
  }
  return Graph::from_edges(g.num_nodes(), kept);
}

FeatureMatrix mask_features(const FeatureMatrix& x, double p_feat, bool scale, Rng& rng) {
  check_probability(p_feat, "p_feat");
  if (scale && p_feat == 1.0) {
    throw ConfigError("rescaling is undefined when every feature is dropped", "p_feat");
  }
  const double keep_scale = scale ? 1.0 / (1.0 - p_feat) : 1.0;
  FeatureMatrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out(i, j) = rng.bernoulli(p_feat) ? 0.0 : x(i, j) * keep_scale;
    }
  }
  return out;
}

Subgraph perturb(const Subgraph& sub, const PerturbConfig& cfg, Rng& rng) {
  Subgraph view;
  view.center = sub.center;
  view.center_local = sub.center_local;
  view.id_map = sub.id_map;
  view.local_graph = drop_edges(sub.local_graph, cfg.p_edge, rng);
  view.local_features = mask_features(sub.local_features, cfg.p_feat, cfg.scale_features, rng);
  return view;
}

std::pair<Subgraph, Subgraph> make_views(const Subgraph& sub, const PerturbConfig& cfg, Rng& rng) {
  cfg.validate();
  Subgraph first = perturb(sub, cfg, rng);
  Subgraph second = perturb(sub, cfg, rng);
  return {std::move(first), std::move(second)};
}

}  // namespace twoview
