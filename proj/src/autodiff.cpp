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

#include "twoview/autodiff.hpp"

#include <algorithm>
#include <cmath>

#include "twoview/errors.hpp"

namespace twoview {

const Matrix& Var::value() const {
  require(tape_ != nullptr, "Var is not bound to a tape");
  return tape_->value(*this);
}

const Tape::Node& Tape::node(Var v) const {
  require(v.tape_ == this && v.id_ < nodes_.size(), "Var belongs to another tape");
  return nodes_[v.id_];
}

const Matrix& Tape::value(Var v) const { return node(v).value; }

Var Tape::push(Node n) {
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

Var Tape::constant(Matrix value) {
  Node n;
  n.value = std::move(value);
  return push(std::move(n));
}

Var Tape::parameter(std::size_t key, Matrix value) {
  Node n;
  n.value = std::move(value);
  n.needs_grad = true;
  n.param_key = key;
  return push(std::move(n));
}

Var Tape::matmul(Var a, Var b) {
  const Node& x = node(a);
  const Node& y = node(b);
  require(x.value.cols() == y.value.rows(), "matmul: inner dimensions differ");
  Node n;
  n.op = Op::matmul;
  n.lhs = a.id();
  n.rhs = b.id();
  n.value.noalias() = x.value * y.value;
  n.needs_grad = x.needs_grad || y.needs_grad;
  return push(std::move(n));
}

Var Tape::spmm(std::shared_ptr<const SparseMatrix> a, Var b) {
  const Node& y = node(b);
  require(a && a->cols() == y.value.rows(), "spmm: inner dimensions differ");
  Node n;
  n.op = Op::spmm;
  n.rhs = b.id();
  n.value = (*a) * y.value;
  n.needs_grad = y.needs_grad;
  n.sparse = std::move(a);
  return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
  const Node& x = node(a);
  const Node& y = node(b);
  require(x.value.rows() == y.value.rows() && x.value.cols() == y.value.cols(),
          "add: shape mismatch");
  Node n;
  n.op = Op::add;
  n.lhs = a.id();
  n.rhs = b.id();
  n.value = x.value + y.value;
  n.needs_grad = x.needs_grad || y.needs_grad;
  return push(std::move(n));
}

Var Tape::elu(Var a) {
  const Node& x = node(a);
  Node n;
  n.op = Op::elu;
  n.lhs = a.id();
  n.value = x.value.unaryExpr([](double v) { return v > 0.0 ? v : std::expm1(v); });
  n.needs_grad = x.needs_grad;
  return push(std::move(n));
}

Var Tape::gather_rows(Var a, std::vector<Eigen::Index> rows) {
  const Node& x = node(a);
  Node n;
  n.op = Op::gather;
  n.lhs = a.id();
  n.value.resize(static_cast<Eigen::Index>(rows.size()), x.value.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i] >= 0 && rows[i] < x.value.rows(), "gather_rows: row out of range");
    n.value.row(static_cast<Eigen::Index>(i)) = x.value.row(rows[i]);
  }
  n.rows = std::move(rows);
  n.needs_grad = x.needs_grad;
  return push(std::move(n));
}

Var Tape::sum(Var a) {
  const Node& x = node(a);
  Node n;
  n.op = Op::sum;
  n.lhs = a.id();
  n.value = Matrix::Constant(1, 1, x.value.sum());
  n.needs_grad = x.needs_grad;
  return push(std::move(n));
}

Var Tape::contrastive_loss(Var view1, Var view2, const LossConfig& cfg) {
  const Node& x = node(view1);
  const Node& y = node(view2);
  Node n;
  n.op = Op::loss;
  n.lhs = view1.id();
  n.rhs = view2.id();
  n.needs_grad = x.needs_grad || y.needs_grad;
  auto res = batch_loss_and_gradient(x.value, y.value, cfg, n.needs_grad);
  n.value = Matrix::Constant(1, 1, res.loss);
  n.saved_lhs = std::move(res.grad_view1);
  n.saved_rhs = std::move(res.grad_view2);
  return push(std::move(n));
}

Gradients Tape::backward(Var root) const {
  const Node& r = node(root);
  require(r.value.rows() == 1 && r.value.cols() == 1, "backward: root must be a scalar");
  Gradients out;
  if (!r.needs_grad) return out;

  std::vector<Matrix> grad(nodes_.size());
  auto accumulate = [&](std::size_t id, auto&& g) {
    if (!nodes_[id].needs_grad) return;
    if (grad[id].size() == 0) {
      grad[id] = g;
    } else {
      grad[id] += g;
    }
  };
  grad[root.id()] = Matrix::Ones(1, 1);

  for (std::size_t k = root.id() + 1; k-- > 0;) {
    const Node& n = nodes_[k];
    if (!n.needs_grad || grad[k].size() == 0) continue;
    const Matrix& g = grad[k];
    switch (n.op) {
      case Op::leaf:
        if (n.param_key) {
          auto [it, fresh] = out.try_emplace(*n.param_key, g);
          if (!fresh) it->second += g;
        }
        break;
      case Op::matmul:
        accumulate(n.lhs, g * nodes_[n.rhs].value.transpose());
        accumulate(n.rhs, nodes_[n.lhs].value.transpose() * g);
        break;
      case Op::spmm:
        accumulate(n.rhs, Matrix(n.sparse->transpose() * g));
        break;
      case Op::add:
        accumulate(n.lhs, g);
        accumulate(n.rhs, g);
        break;
      case Op::elu: {
        const Matrix& x = nodes_[n.lhs].value;
        // Derivative taken as 1 at exactly 0, the common limit for alpha = 1.
        accumulate(n.lhs, g.binaryExpr(x, [](double gv, double xv) {
          return xv >= 0.0 ? gv : gv * std::exp(xv);
        }));
        break;
      }
      case Op::gather: {
        const Matrix& x = nodes_[n.lhs].value;
        Matrix scattered = Matrix::Zero(x.rows(), x.cols());
        for (std::size_t i = 0; i < n.rows.size(); ++i) {
          scattered.row(n.rows[i]) += g.row(static_cast<Eigen::Index>(i));
        }
        accumulate(n.lhs, scattered);
        break;
      }
      case Op::sum: {
        const Matrix& x = nodes_[n.lhs].value;
        accumulate(n.lhs, Matrix::Constant(x.rows(), x.cols(), g(0, 0)));
        break;
      }
      case Op::loss:
        accumulate(n.lhs, n.saved_lhs * g(0, 0));
        accumulate(n.rhs, n.saved_rhs * g(0, 0));
        break;
    }
    // Intermediate gradients are no longer needed once propagated.
    if (n.op != Op::leaf) grad[k].resize(0, 0);
  }
  return out;
}

double fd_gradient_check(const ScalarFunction& f, std::span<const Matrix> params, double h) {
  require(h > 0.0, "fd_gradient_check: step must be positive");
  std::vector<Matrix> analytic;
  f(params, &analytic);
  require(analytic.size() == params.size(), "fd_gradient_check: gradient count mismatch");
  std::vector<Matrix> probe(params.begin(), params.end());
  double worst = 0.0;
  for (std::size_t p = 0; p < probe.size(); ++p) {
    for (Eigen::Index i = 0; i < probe[p].rows(); ++i) {
      for (Eigen::Index j = 0; j < probe[p].cols(); ++j) {
        const double orig = probe[p](i, j);
        probe[p](i, j) = orig + h;
        const double up = f(probe, nullptr);
        probe[p](i, j) = orig - h;
        const double down = f(probe, nullptr);
        probe[p](i, j) = orig;
        const double numeric = (up - down) / (2.0 * h);
        const double a = analytic[p](i, j);
        const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
        worst = std::max(worst, std::abs(a - numeric) / denom);
      }
    }
  }
  return worst;
}

}  // namespace twoview
