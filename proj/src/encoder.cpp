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

#include "twoview/encoder.hpp"

#include <cmath>
#include <string>

#include "twoview/errors.hpp"

namespace twoview {

std::string_view to_string(EncoderVariant v) {
  switch (v) {
    case EncoderVariant::one_layer:
      return "one_layer";
    case EncoderVariant::two_layer:
      return "two_layer";
    case EncoderVariant::three_layer_residual:
      return "three_layer_residual";
  }
  return "unknown";
}

EncoderVariant parse_variant(std::string_view name) {
  if (name == "one_layer") return EncoderVariant::one_layer;
  if (name == "two_layer") return EncoderVariant::two_layer;
  if (name == "three_layer_residual") return EncoderVariant::three_layer_residual;
  throw ConfigError("unknown encoder variant '" + std::string(name) +
                        "' (expected one_layer, two_layer or three_layer_residual)",
                    "variant");
}

int depth(EncoderVariant v) { return static_cast<int>(v); }

std::size_t weight_count(EncoderVariant v) {
  return v == EncoderVariant::three_layer_residual ? 6 : static_cast<std::size_t>(depth(v));
}

void EncoderParams::validate() const {
  require(weights.size() == weight_count(variant), "encoder: wrong number of weight matrices");
  const std::size_t first_layer = variant == EncoderVariant::three_layer_residual ? 2 : 1;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const Eigen::Index rows = k < first_layer ? input_dim : embed_dim;
    require(weights[k].rows() == rows && weights[k].cols() == embed_dim,
            "encoder: weight shapes do not chain");
    require(weights[k].allFinite(), "encoder: non-finite weight");
  }
}

EncoderParams EncoderParams::glorot(EncoderVariant variant, Eigen::Index input_dim,
                                    Eigen::Index embed_dim, Rng& rng) {
  require(input_dim > 0 && embed_dim > 0, "encoder: dimensions must be positive");
  EncoderParams p;
  p.variant = variant;
  p.input_dim = input_dim;
  p.embed_dim = embed_dim;
  const std::size_t first_layer = variant == EncoderVariant::three_layer_residual ? 2 : 1;
  for (std::size_t k = 0; k < weight_count(variant); ++k) {
    p.weights.push_back(glorot_init(k < first_layer ? input_dim : embed_dim, embed_dim, rng));
  }
  return p;
}

double elu(double x) { return x > 0.0 ? x : std::expm1(x); }

Matrix glorot_init(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  require(rows > 0 && cols > 0, "glorot_init: dimensions must be positive");
  const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix w(rows, cols);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-a, a);
  return w;
}

Matrix mean_pool_layer(const Matrix& h, const NormalizedAdjacency& a_hat, const Matrix& w) {
  require(a_hat.size() == h.rows() && h.cols() == w.rows(), "mean_pool_layer: shape mismatch");
  Matrix hw = h * w;
  return a_hat.matrix() * hw;
}

Var encode(Tape& tape, EncoderVariant variant, std::span<const Var> weights, Var x,
           const std::shared_ptr<const SparseMatrix>& a_hat) {
  require(weights.size() == weight_count(variant), "encode: wrong number of weights");
  require(a_hat && a_hat->rows() == x.rows(), "encode: adjacency and features differ in size");
  auto propagate = [&](Var h, Var w) { return tape.spmm(a_hat, tape.matmul(h, w)); };
  switch (variant) {
    case EncoderVariant::one_layer:
      return tape.elu(propagate(x, weights[0]));
    case EncoderVariant::two_layer:
      return propagate(tape.elu(propagate(x, weights[0])), weights[1]);
    case EncoderVariant::three_layer_residual: {
      auto residual = [&](Var h, Var wa, Var wb) {
        return tape.add(propagate(h, wa), tape.matmul(h, wb));
      };
      Var h1 = tape.elu(residual(x, weights[0], weights[1]));
      Var h2 = tape.elu(residual(h1, weights[2], weights[3]));
      return residual(h2, weights[4], weights[5]);
    }
  }
  throw ContractViolation("encode: unknown variant");
}

EmbeddingMatrix encode(const EncoderParams& params, const FeatureMatrix& x,
                       const NormalizedAdjacency& a_hat) {
  params.validate();
  require(x.cols() == params.input_dim, "encode: feature dimension does not match encoder");
  Tape tape;
  std::vector<Var> w;
  w.reserve(params.weights.size());
  for (const Matrix& m : params.weights) w.push_back(tape.constant(m));
  Var out = encode(tape, params.variant, w, tape.constant(x), a_hat.shared());
  return out.value();
}

}  // namespace twoview
