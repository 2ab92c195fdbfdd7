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

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "twoview/contrastive.hpp"
#include "twoview/types.hpp"

namespace twoview {

class Tape;

/// Handle to a value recorded on a Tape.
class Var {
 public:
  Var() = default;
  const Matrix& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  std::size_t id() const noexcept { return id_; }

 private:
  friend class Tape;
  Var(const Tape* tape, std::size_t id) : tape_(tape), id_(id) {}
  const Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Gradients of a scalar root, keyed by the key given to Tape::parameter.
using Gradients = std::map<std::size_t, Matrix>;

/// Record of the forward pass over the pipeline's operation set.
///
/// Nodes are appended in evaluation order, so the record is topologically
/// sorted by construction. Only nodes downstream of a parameter carry
/// gradients during backward().
class Tape {
 public:
  Var constant(Matrix value);
  Var parameter(std::size_t key, Matrix value);

  Var matmul(Var a, Var b);
  /// Constant sparse matrix times a dense value.
  Var spmm(std::shared_ptr<const SparseMatrix> a, Var b);
  Var add(Var a, Var b);
  Var elu(Var a);
  Var gather_rows(Var a, std::vector<Eigen::Index> rows);
  /// Sum of all entries, as a 1x1 value.
  Var sum(Var a);
  /// Contrastive batch loss of two M x P' views, as a 1x1 value.
  Var contrastive_loss(Var view1, Var view2, const LossConfig& cfg);

  /// Reverse sweep from a 1x1 root. Throws ContractViolation otherwise.
  Gradients backward(Var root) const;

  std::size_t size() const noexcept { return nodes_.size(); }
  const Matrix& value(Var v) const;

 private:
  enum class Op { leaf, matmul, spmm, add, elu, gather, sum, loss };

  struct Node {
    Op op = Op::leaf;
    std::size_t lhs = 0;
    std::size_t rhs = 0;
    Matrix value;
    bool needs_grad = false;
    std::optional<std::size_t> param_key;
    std::shared_ptr<const SparseMatrix> sparse;
    std::vector<Eigen::Index> rows;
    // Gradient of the loss node with respect to each input, for unit upstream.
    Matrix saved_lhs;
    Matrix saved_rhs;
  };

  Var push(Node node);
  const Node& node(Var v) const;

  std::vector<Node> nodes_;
};

/// Scalar function of a parameter list. When `grads` is non-null it is
/// filled with the analytic gradient, one matrix per parameter.
using ScalarFunction = std::function<double(std::span<const Matrix>, std::vector<Matrix>* grads)>;

/// Largest |analytic - numeric| / max(|analytic|, |numeric|, 1e-8) over all
/// coordinates, numeric gradients from central differences with step h.
double fd_gradient_check(const ScalarFunction& f, std::span<const Matrix> params, double h = 1e-5);

}  // namespace twoview
