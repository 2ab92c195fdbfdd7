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

#include "test_util.hpp"
#include "twoview/errors.hpp"
#include "twoview/synth.hpp"

namespace twoview {
namespace {

TEST(Synth, NoCrossBlockEdgesWhenPoutIsZero) {
  SbmSpec spec;
  spec.p_out = 0.0;
  const LabeledDataset ds = generate(spec);
  const auto block = block_assignment(spec);
  EXPECT_GT(ds.graph.num_edges(), 0);
  for (const auto& [u, v] : ds.graph.edge_list()) EXPECT_EQ(block[u], block[v]);
}

TEST(Synth, EqualProbabilitiesGiveErdosRenyiEdgeCount) {
  // With p_in = p_out every pair is an independent coin: mean C(n,2) p.
  SbmSpec spec;
  spec.p_in = 0.05;
  spec.p_out = 0.05;
  const double pairs = 300.0 * 299.0 / 2.0;
  const double mean = pairs * 0.05;
  const double sd = std::sqrt(pairs * 0.05 * 0.95);
  double total = 0.0;
  const int seeds = 50;
  for (int s = 0; s < seeds; ++s) {
    spec.seed = static_cast<std::uint64_t>(s);
    total += static_cast<double>(generate(spec).graph.num_edges());
  }
  EXPECT_NEAR(total / seeds, mean, 3.0 * sd / std::sqrt(static_cast<double>(seeds)));
}

TEST(Synth, ZeroNoisePutsBlocksOnTheirMeans) {
  SbmSpec spec;
  spec.noise = 0.0;
  const LabeledDataset ds = generate(spec);
  const auto block = block_assignment(spec);
  for (NodeId u = 1; u < ds.num_nodes(); ++u) {
    if (block[u] == block[u - 1]) {
      EXPECT_TRUE(ds.features.row(u) == ds.features.row(u - 1));
    }
  }
  EXPECT_FALSE(ds.features.row(0) == ds.features.row(150));
}

TEST(Synth, SplitIsStratifiedAndDisjoint) {
  SbmSpec spec;
  spec.block_sizes = {55, 101, 37};
  const LabeledDataset ds = generate(spec);
  const auto block = block_assignment(spec);
  std::vector<int> seen(static_cast<std::size_t>(ds.num_nodes()), 0);
  for (const auto* part : {&ds.split.train, &ds.split.val, &ds.split.test}) {
    for (NodeId u : *part) ++seen[u];
  }
  for (int c : seen) EXPECT_EQ(c, 1);
  for (int b = 0; b < 3; ++b) {
    const double size = static_cast<double>(spec.block_sizes[b]);
    int train = 0, val = 0;
    for (NodeId u : ds.split.train) train += block[u] == b;
    for (NodeId u : ds.split.val) val += block[u] == b;
    EXPECT_LE(std::abs(train - 0.1 * size), 1.0);
    EXPECT_LE(std::abs(val - 0.1 * size), 1.0);
  }
}

TEST(Synth, SameSeedSameDataset) {
  SbmSpec spec;
  spec.seed = 42;
  const LabeledDataset a = generate(spec);
  const LabeledDataset b = generate(spec);
  EXPECT_TRUE(a.graph == b.graph);
  EXPECT_TRUE(a.features == b.features);
  EXPECT_EQ(a.labels.classes, b.labels.classes);
  EXPECT_EQ(a.split.train, b.split.train);
  spec.seed = 43;
  EXPECT_FALSE(generate(spec).features == a.features);
}

TEST(Synth, MultilabelKeepsPrimaryMembership) {
  SbmSpec spec;
  spec.multilabel = true;
  spec.overlap = 0.3;
  const LabeledDataset ds = generate(spec);
  ASSERT_EQ(ds.labels.kind, LabelKind::multilabel);
  const auto block = block_assignment(spec);
  int extra = 0;
  for (NodeId u = 0; u < ds.num_nodes(); ++u) {
    EXPECT_EQ(ds.labels.indicators(u, block[u]), 1);
    for (int c = 0; c < 3; ++c) extra += c != block[u] && ds.labels.indicators(u, c);
  }
  // 300 nodes x 2 other blocks x 0.3.
  EXPECT_NEAR(extra, 180.0, 3.0 * std::sqrt(600 * 0.3 * 0.7));
}

TEST(Synth, InvalidSpecNamesKey) {
  SbmSpec spec;
  spec.p_out = 0.5;
  try {
    generate(spec);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "synth_p_out");
  }
  spec = SbmSpec{};
  spec.block_sizes = {10};
  EXPECT_THROW(generate(spec), ConfigError);
}

}  // namespace
}  // namespace twoview
