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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "test_util.hpp"
#include "twoview/errors.hpp"
#include "twoview/perturb.hpp"

namespace twoview {
namespace {

Graph thousand_edge_graph() {
  // 1000 disjoint edges keep the count exact.
  std::vector<Edge> edges;
  for (NodeId k = 0; k < 1000; ++k) edges.emplace_back(2 * k, 2 * k + 1);
  return Graph::from_edges(2000, edges);
}

TEST(DropEdges, ZeroAndOne) {
  Graph g = testing::random_graph(50, 0.2, 1);
  Rng rng(0);
  EXPECT_EQ(drop_edges(g, 0.0, rng), g);
  Graph empty = drop_edges(g, 1.0, rng);
  EXPECT_EQ(empty.num_edges(), 0u);
  EXPECT_EQ(empty.num_nodes(), g.num_nodes());
}

TEST(DropEdges, HalfKeepRateMonteCarlo) {
  Graph g = thousand_edge_graph();
  Rng rng(123);
  double kept = 0.0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) kept += static_cast<double>(drop_edges(g, 0.5, rng).num_edges());
  const double n = 1000.0 * trials;
  const double rate = kept / n;
  const double se = std::sqrt(0.25 / n);
  EXPECT_NEAR(rate, 0.5, 3 * se);
}

TEST(DropEdges, OutputIsAlwaysSymmetric) {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    Graph g = drop_edges(testing::random_graph(40, 0.3, t), 0.4, rng);
    for (NodeId u = 0; u < g.num_nodes(); ++u) {
      for (NodeId v : g.neighbors(u)) EXPECT_TRUE(g.has_edge(v, u));
    }
  }
}

TEST(MaskFeatures, IdentityAndZero) {
  Matrix x = testing::random_matrix(20, 5, 2);
  Rng rng(0);
  EXPECT_EQ(mask_features(x, 0.0, true, rng), x);
  EXPECT_EQ(mask_features(x, 0.0, false, rng), x);
  EXPECT_TRUE(mask_features(x, 1.0, false, rng).isZero(0.0));
  EXPECT_THROW(mask_features(x, 1.0, true, rng), ConfigError);
  EXPECT_THROW(mask_features(x, 1.5, false, rng), ConfigError);
}

TEST(MaskFeatures, InvertedDropoutPreservesMean) {
  Matrix ones = Matrix::Ones(1000, 100);
  Rng rng(99);
  Matrix y = mask_features(ones, 0.5, true, rng);
  // Each entry is 0 or 2 with equal probability: variance 1.
  const double se = 1.0 / std::sqrt(static_cast<double>(ones.size()));
  EXPECT_NEAR(y.mean(), 1.0, 3 * se);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    EXPECT_TRUE(y.data()[i] == 0.0 || y.data()[i] == 2.0);
  }
}

Subgraph test_subgraph(NodeId n, double p, std::uint32_t seed) {
  Graph g = testing::random_graph(n, p, seed);
  return l_hop_subgraph(g, testing::random_matrix(n, 4, seed), 0, n);
}

TEST(MakeViews, ZeroProbabilitiesAreIdentity) {
  Subgraph s = test_subgraph(30, 0.2, 5);
  Rng rng(1);
  auto [a, b] = make_views(s, PerturbConfig{0.0, 0.0, true}, rng);
  for (const Subgraph* v : {&a, &b}) {
    EXPECT_EQ(v->local_graph, s.local_graph);
    EXPECT_EQ(v->local_features, s.local_features);
    EXPECT_EQ(v->id_map, s.id_map);
    EXPECT_EQ(v->center, s.center);
  }
}

TEST(MakeViews, Deterministic) {
  Subgraph s = test_subgraph(30, 0.2, 6);
  Rng r1(10), r2(10);
  auto p = make_views(s, PerturbConfig{}, r1);
  auto q = make_views(s, PerturbConfig{}, r2);
  EXPECT_EQ(p.first.local_graph, q.first.local_graph);
  EXPECT_EQ(p.second.local_graph, q.second.local_graph);
  EXPECT_EQ(p.first.local_features, q.first.local_features);
  EXPECT_EQ(p.second.local_features, q.second.local_features);
}

TEST(MakeViews, ViewsDiffer) {
  // 100 disjoint edges; P(identical edge masks) = 0.745^100 < 1e-12.
  std::vector<Edge> edges;
  for (NodeId k = 0; k < 100; ++k) edges.emplace_back(2 * k, 2 * k + 1);
  Graph g = Graph::from_edges(200, edges);
  std::vector<NodeId> all(200);
  std::iota(all.begin(), all.end(), 0);
  Subgraph s = make_subgraph(g, testing::random_matrix(200, 3, 1), all);
  ASSERT_EQ(s.local_graph.num_edges(), 100u);
  Rng rng(2024);
  for (int t = 0; t < 20; ++t) {
    auto [a, b] = make_views(s, PerturbConfig{0.15, 0.6, true}, rng);
    EXPECT_NE(a.local_graph.edge_list(), b.local_graph.edge_list());
    EXPECT_EQ(a.num_nodes(), s.num_nodes());
    EXPECT_EQ(a.local_features.cols(), s.local_features.cols());
    EXPECT_EQ(b.id_map, s.id_map);
  }
}

}  // namespace
}  // namespace twoview
