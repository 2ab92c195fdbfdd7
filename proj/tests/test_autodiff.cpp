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

#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"
#include "twoview/autodiff.hpp"
#include "twoview/errors.hpp"
#include "twoview/optim.hpp"
#include "twoview/selfcheck.hpp"

namespace twoview {
namespace {

TEST(Tape, SumOfMatmulGradientIsTransposedOnes) {
  const Matrix x = testing::random_matrix(4, 3, 1);
  const Matrix w = testing::random_matrix(3, 2, 2);
  Tape tape;
  Var xv = tape.constant(x);
  Var wv = tape.parameter(0, w);
  const Gradients g = tape.backward(tape.sum(tape.matmul(xv, wv)));
  ASSERT_EQ(g.size(), 1u);
  const Matrix expected = x.transpose() * Matrix::Ones(4, 2);
  EXPECT_LT((g.at(0) - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Tape, EluGradientAtMinusOne) {
  Tape tape;
  Var a = tape.parameter(7, Matrix::Constant(1, 1, -1.0));
  const Gradients g = tape.backward(tape.sum(tape.elu(a)));
  EXPECT_NEAR(g.at(7)(0, 0), std::exp(-1.0), 1e-15);
}

TEST(Tape, EluGradientAtZeroIsOne) {
  Tape tape;
  Var a = tape.parameter(0, Matrix::Zero(1, 1));
  EXPECT_DOUBLE_EQ(tape.backward(tape.sum(tape.elu(a))).at(0)(0, 0), 1.0);
}

TEST(Tape, ConstantsReceiveNoGradient) {
  Tape tape;
  Var c = tape.constant(Matrix::Ones(2, 2));
  const Gradients g = tape.backward(tape.sum(c));
  EXPECT_TRUE(g.empty());
}

TEST(Tape, SharedParameterAccumulates) {
  Tape tape;
  Var p = tape.parameter(0, Matrix::Constant(1, 1, 3.0));
  const Gradients g = tape.backward(tape.sum(tape.add(p, p)));
  EXPECT_DOUBLE_EQ(g.at(0)(0, 0), 2.0);
}

TEST(Tape, GatherRowsScattersGradient) {
  Tape tape;
  Var p = tape.parameter(0, Matrix::Ones(3, 2));
  const Gradients g = tape.backward(tape.sum(tape.gather_rows(p, {2, 0, 2})));
  EXPECT_DOUBLE_EQ(g.at(0)(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(g.at(0)(1, 1), 0.0);
  EXPECT_DOUBLE_EQ(g.at(0)(2, 0), 2.0);
}

TEST(Tape, SpmmMatchesDenseProduct) {
  const Graph g = testing::random_graph(6, 0.5, 3);
  const NormalizedAdjacency a = normalize_adjacency(g);
  const Matrix h = testing::random_matrix(6, 3, 4);
  Tape tape;
  Var out = tape.spmm(a.shared(), tape.parameter(0, h));
  const Matrix dense = Matrix(a.matrix());
  EXPECT_LT((out.value() - dense * h).cwiseAbs().maxCoeff(), 1e-14);
  const Gradients grad = tape.backward(tape.sum(out));
  EXPECT_LT((grad.at(0) - dense.transpose() * Matrix::Ones(6, 3)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Tape, NonScalarRootThrows) {
  Tape tape;
  Var p = tape.parameter(0, Matrix::Ones(2, 2));
  EXPECT_THROW(tape.backward(p), ContractViolation);
}

TEST(Tape, ShapeMismatchThrows) {
  Tape tape;
  Var a = tape.constant(Matrix::Ones(2, 3));
  Var b = tape.constant(Matrix::Ones(2, 3));
  EXPECT_THROW(tape.matmul(a, b), ContractViolation);
  EXPECT_THROW(tape.add(a, tape.constant(Matrix::Ones(3, 2))), ContractViolation);
}

TEST(FdCheck, QuadraticIsExact) {
  ScalarFunction f = [](std::span<const Matrix> p, std::vector<Matrix>* g) {
    if (g) *g = {2.0 * p[0]};
    return p[0].squaredNorm();
  };
  const Matrix w = testing::random_matrix(3, 4, 5);
  EXPECT_LT(fd_gradient_check(f, std::span<const Matrix>(&w, 1)), 1e-8);
}

TEST(FdCheck, DetectsWrongGradient) {
  ScalarFunction f = [](std::span<const Matrix> p, std::vector<Matrix>* g) {
    if (g) *g = {3.0 * p[0]};
    return p[0].squaredNorm();
  };
  const Matrix w = testing::random_matrix(2, 2, 6);
  EXPECT_GT(fd_gradient_check(f, std::span<const Matrix>(&w, 1)), 0.1);
}

TEST(FdCheck, EluAwayFromKink) {
  Matrix w = testing::random_matrix(3, 3, 7);
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (std::abs(w.data()[i]) < 0.1) w.data()[i] = 0.5;
  }
  ScalarFunction f = [](std::span<const Matrix> p, std::vector<Matrix>* g) {
    Tape tape;
    Var root = tape.sum(tape.elu(tape.parameter(0, p[0])));
    if (g) *g = {tape.backward(root).at(0)};
    return root.value()(0, 0);
  };
  EXPECT_LT(fd_gradient_check(f, std::span<const Matrix>(&w, 1)), 1e-7);
}

class PipelineGradient : public ::testing::TestWithParam<EncoderVariant> {};

TEST_P(PipelineGradient, MatchesCentralDifferences) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    EXPECT_LT(pipeline_gradient_error(GetParam(), seed), 1e-5) << "seed " << seed;
  }
}

TEST_P(PipelineGradient, BackwardIsBitIdentical) {
  const PipelineInstance inst = make_pipeline_instance(GetParam(), 11);
  std::vector<Matrix> a, b;
  const double la = contrastive_objective(inst.params, inst.input, inst.loss, &a);
  const double lb = contrastive_objective(inst.params, inst.input, inst.loss, &b);
  EXPECT_EQ(la, lb);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_TRUE(a[k] == b[k]);
}

TEST_P(PipelineGradient, ObjectiveMatchesLossOfEncodedViews) {
  const PipelineInstance inst = make_pipeline_instance(GetParam(), 4);
  auto center_rows = [&](const ViewInput& v) {
    const Matrix h = encode(inst.params, v.features, v.a_hat);
    Matrix out(static_cast<Eigen::Index>(v.centers.size()), h.cols());
    for (std::size_t i = 0; i < v.centers.size(); ++i) out.row(i) = h.row(v.centers[i]);
    return out;
  };
  const Matrix h1 = center_rows(inst.input.first);
  const Matrix h2 = center_rows(inst.input.second);
  EXPECT_NEAR(contrastive_objective(inst.params, inst.input, inst.loss, nullptr),
              testing::oracle_batch_loss(h1, h2, inst.loss.temperature), 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Variants, PipelineGradient,
                         ::testing::Values(EncoderVariant::one_layer, EncoderVariant::two_layer,
                                           EncoderVariant::three_layer_residual),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Adam, FirstStepMovesByLearningRate) {
  std::vector<Matrix> p{testing::random_matrix(3, 3, 8)};
  const Matrix before = p[0];
  const std::vector<Matrix> g{testing::random_matrix(3, 3, 9)};
  AdamState state = AdamState::for_params(p);
  adam_step(p, g, state, 1e-3, 0.0);
  for (Eigen::Index i = 0; i < p[0].size(); ++i) {
    const double delta = std::abs(p[0].data()[i] - before.data()[i]);
    EXPECT_GE(delta, 0.00099);
    EXPECT_LE(delta, 0.001);
    EXPECT_EQ(std::signbit(p[0].data()[i] - before.data()[i]), !std::signbit(g[0].data()[i]));
  }
  EXPECT_EQ(state.step, 1);
}

TEST(Adam, ZeroGradientLeavesParams) {
  std::vector<Matrix> p{testing::random_matrix(2, 2, 10)};
  const Matrix before = p[0];
  const std::vector<Matrix> g{Matrix::Zero(2, 2)};
  AdamState state = AdamState::for_params(p);
  for (int i = 0; i < 3; ++i) adam_step(p, g, state, 1e-2, 0.0);
  EXPECT_TRUE(p[0] == before);
}

TEST(Adam, ZeroLearningRateIsIdentity) {
  std::vector<Matrix> p{testing::random_matrix(2, 3, 11)};
  const Matrix before = p[0];
  AdamState state = AdamState::for_params(p);
  adam_step(p, std::vector<Matrix>{testing::random_matrix(2, 3, 12)}, state, 0.0, 0.1);
  EXPECT_TRUE(p[0] == before);
}

TEST(Adam, DescendsQuadratic) {
  std::vector<Matrix> p{Matrix::Constant(1, 1, 1.0)};
  AdamState state = AdamState::for_params(p);
  double prev = 1.0;
  for (int i = 0; i < 10; ++i) {
    adam_step(p, std::vector<Matrix>{2.0 * p[0]}, state, 0.1, 0.0);
    EXPECT_LT(std::abs(p[0](0, 0)), prev);
    prev = std::abs(p[0](0, 0));
  }
}

TEST(Adam, WeightDecayIsAddedToGradient) {
  std::vector<Matrix> p{Matrix::Constant(1, 1, 2.0)};
  AdamState state = AdamState::for_params(p);
  adam_step(p, std::vector<Matrix>{Matrix::Zero(1, 1)}, state, 0.01, 0.5);
  // g = 0.5 * 2 = 1, so the bias-corrected first step is lr * 1 / (1 + eps).
  EXPECT_NEAR(p[0](0, 0), 2.0 - 0.01 / (1.0 + 1e-8), 1e-15);
}

TEST(Adam, MismatchedShapesThrow) {
  std::vector<Matrix> p{Matrix::Zero(2, 2)};
  AdamState state = AdamState::for_params(p);
  EXPECT_THROW(adam_step(p, std::vector<Matrix>{Matrix::Zero(3, 2)}, state, 0.1, 0.0),
               ContractViolation);
}

}  // namespace
}  // namespace twoview
