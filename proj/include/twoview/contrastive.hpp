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

#include <span>
#include <vector>

#include "twoview/types.hpp"

namespace twoview {

struct LossConfig {
  double temperature = 0.5;
  /// Lower bound on norms inside the cosine similarity.
  double epsilon = 1e-12;

  void validate() const;
};

/// Two views of the same M nodes; row i of each view belongs to node_ids[i].
struct BatchEmbeddings {
  Matrix view1;
  Matrix view2;
  std::vector<NodeId> node_ids;

  Eigen::Index size() const { return view1.rows(); }
};

/// a.b / (max(|a|, eps) * max(|b|, eps)).
double cosine_similarity(std::span<const double> a, std::span<const double> b,
                         double epsilon = 1e-12);

/// Contrastive loss of anchor view `i` of batch row `u` against its partner
/// in view `j` (views are numbered 1 and 2). The denominator holds the
/// same-view terms for every other row plus the cross-view terms for every
/// row, the positive included: 2M - 1 terms.
double pair_loss(const BatchEmbeddings& batch, Eigen::Index u, int i, int j, const LossConfig& cfg);

/// Mean over rows of pair_loss(u, 1, 2) + pair_loss(u, 2, 1).
double batch_loss(const BatchEmbeddings& batch, const LossConfig& cfg);

struct LossAndGradient {
  double loss = 0.0;
  Matrix grad_view1;
  Matrix grad_view2;
};

/// batch_loss together with its gradient with respect to both views.
/// Similarities are processed in row blocks, so memory stays O(block * M).
LossAndGradient batch_loss_and_gradient(const Matrix& view1, const Matrix& view2,
                                        const LossConfig& cfg, bool with_gradient = true);

/// log(k) - loss_one_direction.
double mi_lower_bound(double loss_one_direction, long long k);

/// Bound reported for one batch of M nodes: k = 2M - 2 negatives and the
/// single-direction loss batch_loss / 2.
double batch_mi_bound(double batch_loss_value, Eigen::Index batch_size);

}  // namespace twoview
