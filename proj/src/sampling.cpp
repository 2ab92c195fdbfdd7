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

#include "twoview/sampling.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "twoview/errors.hpp"

namespace twoview {

void FanoutConfig::validate() const {
  for (int f : fanouts) {
    if (f < 1) throw ConfigError("every fanout must be at least 1, got " + std::to_string(f),
                                 "fanouts");
  }
}

std::size_t FanoutConfig::max_nodes() const {
  std::size_t total = 1;
  std::size_t level = 1;
  for (int f : fanouts) {
    level *= static_cast<std::size_t>(f);
    total += level;
  }
  return total;
}

Subgraph make_subgraph(const Graph& g, const FeatureMatrix& feats, std::span<const NodeId> nodes) {
  require(!nodes.empty(), "make_subgraph: empty node set");
  Subgraph s;
  s.center = nodes[0];
  s.center_local = 0;
  s.id_map.assign(nodes.begin(), nodes.end());
  s.local_graph = induced_subgraph(g, nodes);
  s.local_features.resize(static_cast<Eigen::Index>(nodes.size()), feats.cols());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    s.local_features.row(static_cast<Eigen::Index>(i)) = feats.row(nodes[i]);
  }
  return s;
}

Subgraph l_hop_subgraph(const Graph& g, const FeatureMatrix& feats, NodeId u, int depth) {
  g.neighbors(u);  // range check
  require(depth >= 0, "l_hop_subgraph: negative depth");
  std::vector<NodeId> order{u};
  std::unordered_set<NodeId> seen{u};
  std::size_t level_begin = 0;
  for (int d = 0; d < depth; ++d) {
    const std::size_t level_end = order.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (NodeId v : g.neighbors(order[i])) {
        if (seen.insert(v).second) order.push_back(v);
      }
    }
    if (order.size() == level_end) break;
    level_begin = level_end;
  }
  return make_subgraph(g, feats, order);
}

Subgraph sample_fanout_subgraph(const Graph& g, const FeatureMatrix& feats, NodeId u,
                                const FanoutConfig& cfg, Rng& rng) {
  g.neighbors(u);
  cfg.validate();
  std::vector<NodeId> order{u};
  std::unordered_set<NodeId> seen{u};
  std::vector<NodeId> frontier{u};
  std::vector<NodeId> pool;
  for (int fanout : cfg.fanouts) {
    std::vector<NodeId> next;
    for (NodeId w : frontier) {
      const auto nb = g.neighbors(w);
      const auto take = std::min<std::size_t>(nb.size(), static_cast<std::size_t>(fanout));
      pool.assign(nb.begin(), nb.end());
      // Partial Fisher-Yates: the first `take` slots become a uniform sample.
      for (std::size_t i = 0; i < take; ++i) {
        const auto j = i + rng.uniform_index(pool.size() - i);
        std::swap(pool[i], pool[j]);
        if (seen.insert(pool[i]).second) {
          order.push_back(pool[i]);
          next.push_back(pool[i]);
        }
      }
    }
    if (next.empty()) break;
    frontier = std::move(next);
  }
  return make_subgraph(g, feats, order);
}

std::vector<std::vector<NodeId>> minibatches(std::span<const NodeId> nodes, std::size_t batch_size,
                                             Rng& rng) {
  if (batch_size < 2) {
    throw ConfigError("batch size must be at least 2, got " + std::to_string(batch_size),
                      "batch_size");
  }
  std::vector<NodeId> perm(nodes.begin(), nodes.end());
  rng.shuffle(perm.begin(), perm.end());
  std::vector<std::vector<NodeId>> out;
  for (std::size_t i = 0; i < perm.size(); i += batch_size) {
    const auto end = std::min(perm.size(), i + batch_size);
    if (end - i < 2) break;
    out.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(i),
                     perm.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return out;
}

}  // namespace twoview
