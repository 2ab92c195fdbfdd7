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

#include "twoview/optim.hpp"

#include <cmath>

#include "twoview/errors.hpp"

namespace twoview {

AdamState AdamState::for_params(std::span<const Matrix> params, AdamConfig cfg) {
  AdamState s;
  s.cfg = cfg;
  for (const Matrix& p : params) {
    s.first_moment.push_back(Matrix::Zero(p.rows(), p.cols()));
    s.second_moment.push_back(Matrix::Zero(p.rows(), p.cols()));
  }
  return s;
}

void adam_step(std::span<Matrix> params, std::span<const Matrix> grads, AdamState& state,
               double lr, double weight_decay) {
  require(params.size() == grads.size(), "adam_step: parameter/gradient count mismatch");
  if (state.first_moment.empty()) state = AdamState::for_params(params, state.cfg);
  require(state.first_moment.size() == params.size(), "adam_step: state does not match params");
  ++state.step;
  const auto& c = state.cfg;
  const double t = static_cast<double>(state.step);
  const double bias1 = 1.0 - std::pow(c.beta1, t);
  const double bias2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    Matrix& p = params[k];
    require(grads[k].rows() == p.rows() && grads[k].cols() == p.cols() &&
                state.first_moment[k].rows() == p.rows() &&
                state.first_moment[k].cols() == p.cols(),
            "adam_step: shape mismatch");
    Matrix& m = state.first_moment[k];
    Matrix& v = state.second_moment[k];
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      const double g = grads[k].data()[i] + weight_decay * p.data()[i];
      m.data()[i] = c.beta1 * m.data()[i] + (1.0 - c.beta1) * g;
      v.data()[i] = c.beta2 * v.data()[i] + (1.0 - c.beta2) * g * g;
      const double m_hat = m.data()[i] / bias1;
      const double v_hat = v.data()[i] / bias2;
      p.data()[i] -= lr * m_hat / (std::sqrt(v_hat) + c.eps);
    }
  }
}

}  // namespace twoview
