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
#include <filesystem>
#include <vector>

#include "twoview/graph.hpp"
#include "twoview/types.hpp"

namespace twoview {

/// Dense N x P node features.
using FeatureMatrix = Matrix;

enum class LabelKind { none, multiclass, multilabel };

struct Labels {
  LabelKind kind = LabelKind::none;
  int num_classes = 0;
  /// Multiclass: class id per node, -1 where the label file is silent.
  std::vector<int> classes;
  /// Multilabel: N x K indicator matrix.
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> indicators;
  /// Multilabel: whether the node appears in the label file.
  std::vector<std::uint8_t> present;

  bool has_label(NodeId u) const;
};

struct Split {
  std::vector<NodeId> train;
  std::vector<NodeId> val;
  std::vector<NodeId> test;

  bool empty() const { return train.empty() && val.empty() && test.empty(); }
};

enum class SplitPart { train, val, test };
const std::vector<NodeId>& split_nodes(const Split& s, SplitPart part);

struct LabeledDataset {
  Graph graph;
  FeatureMatrix features;
  Labels labels;
  Split split;
  /// Edges dropped during loading.
  EdgeBuildStats edge_stats;

  NodeId num_nodes() const { return graph.num_nodes(); }
  bool labeled() const { return labels.kind != LabelKind::none; }
};

/// Locations of the four dataset files. `labels` and `split` may be empty.
struct DatasetPaths {
  std::filesystem::path edges;
  std::filesystem::path features;
  std::filesystem::path labels;
  std::filesystem::path split;

  /// edges.tsv, features.txt, labels.txt, split.txt under `dir`.
  static DatasetPaths in_directory(const std::filesystem::path& dir);
};

/// Reads and validates a dataset. Duplicate and self-loop edge lines are
/// dropped and counted in `edge_stats`. An empty labels path yields an
/// unlabeled dataset; an empty split path yields an empty split.
LabeledDataset load_dataset(const DatasetPaths& paths);

/// Writes the dataset in the same text formats `load_dataset` reads.
/// Files whose path is empty are skipped.
void save_dataset(const LabeledDataset& ds, const DatasetPaths& paths);

/// Checks the cross-field invariants; throws ValidationError or RangeError.
void validate_dataset(const LabeledDataset& ds);

}  // namespace twoview
