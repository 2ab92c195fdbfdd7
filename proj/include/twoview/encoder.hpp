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

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "twoview/autodiff.hpp"
#include "twoview/dataset.hpp"
#include "twoview/graph.hpp"
#include "twoview/rng.hpp"
#include "twoview/types.hpp"

namespace twoview {

enum class EncoderVariant : std::uint32_t {
  one_layer = 1,
  two_layer = 2,
  three_layer_residual = 3,
};

std::string_view to_string(EncoderVariant v);
/// Throws ConfigError for unknown names.
EncoderVariant parse_variant(std::string_view name);
/// Number of propagation layers (the receptive-field depth).
int depth(EncoderVariant v);

/// Dense N x P' encoder output.
using EmbeddingMatrix = Matrix;

/// Layer weights of one encoder.
///
/// Layouts:
///   one_layer             [W0 (P x P')]
///   two_layer             [W0 (P x P'), W1 (P' x P')]
///   three_layer_residual  [W0a, W0b (P x P'), W1a, W1b, W2a, W2b (P' x P')]
/// where the "a" weight of each pair acts on the propagated input and the
/// "b" weight on the residual path.
struct EncoderParams {
  EncoderVariant variant = EncoderVariant::two_layer;
  Eigen::Index input_dim = 0;
  Eigen::Index embed_dim = 0;
  std::vector<Matrix> weights;

  /// Throws ContractViolation on wrong count, shapes or non-finite entries.
  void validate() const;

  static EncoderParams glorot(EncoderVariant variant, Eigen::Index input_dim,
                              Eigen::Index embed_dim, Rng& rng);
};

/// Weight count for a variant.
std::size_t weight_count(EncoderVariant v);

/// x for x > 0, exp(x) - 1 otherwise.
double elu(double x);

/// Uniform on [-a, a] with a = sqrt(6 / (rows + cols)).
Matrix glorot_init(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// A_hat * h * w: row u is w applied to the mean of h over u and its neighbors.
Matrix mean_pool_layer(const Matrix& h, const NormalizedAdjacency& a_hat, const Matrix& w);

/// Records the forward pass on `tape`. `weights` must follow the layout above.
Var encode(Tape& tape, EncoderVariant variant, std::span<const Var> weights, Var x,
           const std::shared_ptr<const SparseMatrix>& a_hat);

EmbeddingMatrix encode(const EncoderParams& params, const FeatureMatrix& x,
                       const NormalizedAdjacency& a_hat);

}  // namespace twoview
