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
#include <vector>

#include "twoview/dataset.hpp"

namespace twoview {

/// Stochastic block model with Gaussian features around per-block means.
struct SbmSpec {
  std::vector<NodeId> block_sizes{100, 100, 100};
  double p_in = 0.10;
  double p_out = 0.01;
  Eigen::Index feature_dim = 16;
  /// Block means are `separation` times a standard normal vector.
  double separation = 0.5;
  /// Standard deviation of the isotropic feature noise.
  double noise = 1.0;
  /// Multilabel mode: every node also joins each other block as a
  /// secondary member with probability `overlap`; labels are membership
  /// indicators and features sum the means of all memberships.
  bool multilabel = false;
  double overlap = 0.2;
  std::uint64_t seed = 0;

  /// Throws ConfigError.
  void validate() const;
};

/// Stratified 10% / 10% / 80% train/val/test split by (primary) block.
LabeledDataset generate(const SbmSpec& spec);

/// Primary block of each node, in generation order.
std::vector<int> block_assignment(const SbmSpec& spec);

}  // namespace twoview
