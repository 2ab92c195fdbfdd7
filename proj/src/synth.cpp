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

#include "twoview/synth.hpp"

#include <cmath>
#include <string>

#include "twoview/errors.hpp"
#include "twoview/rng.hpp"

namespace twoview {
namespace {

enum Stream : std::uint64_t { kEdges = 1, kMeans = 2, kNoise = 3, kOverlap = 4, kSplit = 5 };

}  // namespace

void SbmSpec::validate() const {
  if (block_sizes.size() < 2) throw ConfigError("need at least two blocks", "synth_blocks");
  for (NodeId b : block_sizes) {
    if (b < 1) throw ConfigError("every block needs at least one node", "synth_blocks");
  }
  if (!(p_in >= 0.0 && p_in <= 1.0)) throw ConfigError("must lie in [0, 1]", "synth_p_in");
  if (!(p_out >= 0.0 && p_out <= p_in)) {
    throw ConfigError("must lie in [0, synth_p_in]", "synth_p_out");
  }
  if (feature_dim < 1) throw ConfigError("must be positive", "synth_dim");
  if (!(separation >= 0.0)) throw ConfigError("must be non-negative", "synth_separation");
  if (!(noise >= 0.0)) throw ConfigError("must be non-negative", "synth_noise");
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw ConfigError("must lie in [0, 1]", "synth_overlap");
}

std::vector<int> block_assignment(const SbmSpec& spec) {
  std::vector<int> block;
  for (std::size_t b = 0; b < spec.block_sizes.size(); ++b) {
    block.insert(block.end(), static_cast<std::size_t>(spec.block_sizes[b]), static_cast<int>(b));
  }
  return block;
}

LabeledDataset generate(const SbmSpec& spec) {
  spec.validate();
  const std::vector<int> block = block_assignment(spec);
  const auto n = static_cast<NodeId>(block.size());
  const int k = static_cast<int>(spec.block_sizes.size());

  Rng edge_rng(derive_seed(spec.seed, kEdges));
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (edge_rng.bernoulli(block[u] == block[v] ? spec.p_in : spec.p_out)) edges.emplace_back(u, v);
    }
  }

  LabeledDataset ds;
  ds.graph = Graph::from_edges(n, edges);

  Rng mean_rng(derive_seed(spec.seed, kMeans));
  Matrix means(k, spec.feature_dim);
  for (Eigen::Index i = 0; i < means.size(); ++i) means.data()[i] = spec.separation * mean_rng.normal();

  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> member =
      decltype(ds.labels.indicators)::Zero(n, k);
  Rng overlap_rng(derive_seed(spec.seed, kOverlap));
  for (NodeId u = 0; u < n; ++u) {
    member(u, block[u]) = 1;
    if (!spec.multilabel) continue;
    for (int c = 0; c < k; ++c) {
      if (c != block[u] && overlap_rng.bernoulli(spec.overlap)) member(u, c) = 1;
    }
  }

  Rng noise_rng(derive_seed(spec.seed, kNoise));
  ds.features.setZero(n, spec.feature_dim);
  for (NodeId u = 0; u < n; ++u) {
    for (int c = 0; c < k; ++c) {
      if (member(u, c)) ds.features.row(u) += means.row(c);
    }
    for (Eigen::Index j = 0; j < spec.feature_dim; ++j) ds.features(u, j) += spec.noise * noise_rng.normal();
  }

  ds.labels.num_classes = k;
  if (spec.multilabel) {
    ds.labels.kind = LabelKind::multilabel;
    ds.labels.indicators = member;
    ds.labels.present.assign(static_cast<std::size_t>(n), 1);
  } else {
    ds.labels.kind = LabelKind::multiclass;
    ds.labels.classes = block;
  }

  Rng split_rng(derive_seed(spec.seed, kSplit));
  NodeId first = 0;
  for (NodeId size : spec.block_sizes) {
    std::vector<NodeId> nodes(static_cast<std::size_t>(size));
    for (NodeId i = 0; i < size; ++i) nodes[i] = first + i;
    split_rng.shuffle(nodes.begin(), nodes.end());
    const auto n_train = static_cast<std::size_t>(std::lround(0.1 * static_cast<double>(size)));
    const auto n_val = static_cast<std::size_t>(std::lround(0.1 * static_cast<double>(size)));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      auto& part = i < n_train ? ds.split.train : i < n_train + n_val ? ds.split.val : ds.split.test;
      part.push_back(nodes[i]);
    }
    first += size;
  }
  validate_dataset(ds);
  return ds;
}

}  // namespace twoview
