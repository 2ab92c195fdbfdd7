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

#include "twoview/graph.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "twoview/errors.hpp"

namespace twoview {

Graph::Graph(NodeId num_nodes) : offsets_(static_cast<std::size_t>(num_nodes) + 1, 0) {
  if (num_nodes < 0) throw RangeError("negative node count");
}

Graph Graph::from_edges(NodeId num_nodes, std::span<const Edge> edges, EdgeBuildStats* stats) {
  Graph g(num_nodes);
  std::vector<Edge> directed;
  directed.reserve(edges.size() * 2);
  EdgeBuildStats local;
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= num_nodes || v < 0 || v >= num_nodes) {
      throw RangeError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                       ") has an endpoint outside [0, " + std::to_string(num_nodes) + ")");
    }
    if (u == v) {
      ++local.self_loops;
      continue;
    }
    directed.emplace_back(u, v);
    directed.emplace_back(v, u);
  }
  std::sort(directed.begin(), directed.end());
  const auto before = directed.size();
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());
  local.duplicates = (before - directed.size()) / 2;

  g.indices_.reserve(directed.size());
  for (const auto& [u, v] : directed) {
    ++g.offsets_[static_cast<std::size_t>(u) + 1];
    g.indices_.push_back(v);
  }
  for (std::size_t i = 1; i < g.offsets_.size(); ++i) g.offsets_[i] += g.offsets_[i - 1];
  if (stats) *stats = local;
  return g;
}

void Graph::check_node(NodeId u) const {
  if (u < 0 || u >= num_nodes()) {
    throw RangeError("node " + std::to_string(u) + " outside [0, " + std::to_string(num_nodes()) +
                     ")");
  }
}

std::span<const NodeId> Graph::neighbors(NodeId u) const {
  check_node(u);
  const auto b = static_cast<std::size_t>(offsets_[u]);
  const auto e = static_cast<std::size_t>(offsets_[u + 1]);
  return {indices_.data() + b, e - b};
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  const auto nb = neighbors(u);
  check_node(v);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edge_list() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (NodeId u = 0; u < num_nodes(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

NormalizedAdjacency normalize_adjacency(const Graph& g) {
  const NodeId n = g.num_nodes();
  SparseMatrix m(n, n);
  m.reserve(Eigen::VectorX<std::int64_t>::NullaryExpr(
      n, [&](Eigen::Index u) { return static_cast<std::int64_t>(g.degree(u) + 1); }));
  for (NodeId u = 0; u < n; ++u) {
    const auto nb = g.neighbors(u);
    const double w = 1.0 / static_cast<double>(nb.size() + 1);
    // Insert in column order so the self-loop lands between smaller and larger neighbors.
    bool self_done = false;
    for (NodeId v : nb) {
      if (!self_done && v > u) {
        m.insert(u, u) = w;
        self_done = true;
      }
      m.insert(u, v) = w;
    }
    if (!self_done) m.insert(u, u) = w;
  }
  m.makeCompressed();
  return NormalizedAdjacency(std::move(m));
}

Graph disjoint_union(std::span<const Graph* const> parts) {
  NodeId total = 0;
  std::size_t edge_count = 0;
  for (const Graph* p : parts) {
    total += p->num_nodes();
    edge_count += p->num_edges();
  }
  std::vector<Edge> edges;
  edges.reserve(edge_count);
  NodeId shift = 0;
  for (const Graph* p : parts) {
    for (const auto& [u, v] : p->edge_list()) edges.emplace_back(u + shift, v + shift);
    shift += p->num_nodes();
  }
  return Graph::from_edges(total, edges);
}

Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
  std::unordered_map<NodeId, NodeId> local;
  local.reserve(nodes.size() * 2);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!local.emplace(nodes[i], static_cast<NodeId>(i)).second) {
      throw ContractViolation("induced_subgraph: repeated node id");
    }
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (NodeId v : g.neighbors(nodes[i])) {
      auto it = local.find(v);
      if (it != local.end() && static_cast<NodeId>(i) < it->second) {
        edges.emplace_back(static_cast<NodeId>(i), it->second);
      }
    }
  }
  return Graph::from_edges(static_cast<NodeId>(nodes.size()), edges);
}

}  // namespace twoview
