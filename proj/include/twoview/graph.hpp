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
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "twoview/types.hpp"

namespace twoview {

using Edge = std::pair<NodeId, NodeId>;

/// Counts of input edges discarded while building a Graph.
struct EdgeBuildStats {
  std::size_t duplicates = 0;
  std::size_t self_loops = 0;
};

/// Immutable undirected, unweighted graph in CSR form.
///
/// Every undirected edge is stored in both directions, neighbor lists are
/// sorted ascending and duplicate-free, and self-loops are never stored.
class Graph {
 public:
  Graph() = default;
  explicit Graph(NodeId num_nodes);

  /// Builds a graph from an arbitrary edge list. Each pair is treated as
  /// undirected; repeated pairs (in either orientation) and self-loops are
  /// dropped and counted in `stats`. Throws RangeError on ids outside [0, N).
  static Graph from_edges(NodeId num_nodes, std::span<const Edge> edges,
                          EdgeBuildStats* stats = nullptr);

  NodeId num_nodes() const noexcept { return static_cast<NodeId>(offsets_.size()) - 1; }
  /// Number of undirected edges.
  std::size_t num_edges() const noexcept { return indices_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId u) const;
  NodeId degree(NodeId u) const { return static_cast<NodeId>(neighbors(u).size()); }
  bool has_edge(NodeId u, NodeId v) const;

  /// Undirected edges as (u, v) with u < v in lexicographic order.
  std::vector<Edge> edge_list() const;

  const std::vector<NodeId>& offsets() const noexcept { return offsets_; }
  const std::vector<NodeId>& indices() const noexcept { return indices_; }

  bool operator==(const Graph&) const = default;

 private:
  void check_node(NodeId u) const;

  std::vector<NodeId> offsets_{0};
  std::vector<NodeId> indices_;
};

/// Row-stochastic propagation matrix D^-1 (A + I).
class NormalizedAdjacency {
 public:
  explicit NormalizedAdjacency(SparseMatrix m)
      : matrix_(std::make_shared<const SparseMatrix>(std::move(m))) {}
  const SparseMatrix& matrix() const noexcept { return *matrix_; }
  const std::shared_ptr<const SparseMatrix>& shared() const noexcept { return matrix_; }
  Eigen::Index size() const noexcept { return matrix_->rows(); }

 private:
  std::shared_ptr<const SparseMatrix> matrix_;
};

NormalizedAdjacency normalize_adjacency(const Graph& g);

/// Sorted neighbors of u, excluding u. Throws RangeError for invalid u.
inline std::span<const NodeId> neighbors(const Graph& g, NodeId u) { return g.neighbors(u); }

/// Disjoint union; node ids of graph k are shifted by the sizes of graphs 0..k-1.
Graph disjoint_union(std::span<const Graph* const> parts);

/// Graph induced on `nodes` (in the given order, which defines local ids).
Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes);

}  // namespace twoview
