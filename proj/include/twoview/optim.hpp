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
#include <span>
#include <vector>

#include "twoview/types.hpp"

namespace twoview {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::int64_t step = 0;
  std::vector<Matrix> first_moment;
  std::vector<Matrix> second_moment;
  AdamConfig cfg;

  /// Zero moments shaped like `params`.
  static AdamState for_params(std::span<const Matrix> params, AdamConfig cfg = {});
};

/// One Adam update with bias correction. Weight decay is coupled L2: it is
/// added to the gradient before the moment updates.
void adam_step(std::span<Matrix> params, std::span<const Matrix> grads, AdamState& state,
               double lr, double weight_decay);

}  // namespace twoview
