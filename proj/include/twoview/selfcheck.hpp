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
#include <iosfwd>
#include <string>
#include <vector>

#include "twoview/encoder.hpp"
#include "twoview/training.hpp"

namespace twoview {

/// A small randomized contrastive step: 12-node graph, 5 input features,
/// 7-wide embeddings, 4 batch nodes, each with perturbed L-hop views.
struct PipelineInstance {
  EncoderParams params;
  StepInput input;
  LossConfig loss;
};

PipelineInstance make_pipeline_instance(EncoderVariant variant, std::uint64_t seed);

/// Largest relative error between tape gradients and central differences
/// (step 1e-5) over every weight of the instance.
double pipeline_gradient_error(EncoderVariant variant, std::uint64_t seed);

/// Dense scalar-loop reference for the batch contrastive loss, used by the
/// selfcheck command to cross-check the blocked kernel.
double reference_batch_loss(const Matrix& view1, const Matrix& view2, double temperature);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Gradient checks for every encoder variant plus the loss and subgraph
/// oracles. Writes one line per check to `log`.
std::vector<CheckResult> run_selfcheck(std::ostream& log, int instances_per_variant = 20);

}  // namespace twoview
