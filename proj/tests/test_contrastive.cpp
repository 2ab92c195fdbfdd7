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
#include <numeric>

#include "test_util.hpp"
#include "twoview/contrastive.hpp"
#include "twoview/errors.hpp"

namespace twoview {
namespace {

BatchEmbeddings random_batch(Eigen::Index m, Eigen::Index d, std::uint32_t seed) {
  return {testing::random_matrix(m, d, seed), testing::random_matrix(m, d, seed + 1000), {}};
}

BatchEmbeddings identical_batch(Eigen::Index m) {
  Matrix row = Matrix::Constant(m, 3, 0.7);
  return {row, row, {}};
}

TEST(CosineSimilarity, Examples) {
  const double e1[] = {1, 0}, e2[] = {0, 1}, d[] = {1, 1};
  EXPECT_DOUBLE_EQ(cosine_similarity(e1, e1), 1.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(e1, e2), 0.0);
  EXPECT_NEAR(cosine_similarity(d, e1), 1.0 / std::sqrt(2.0), 1e-15);
  const double z[] = {0, 0};
  EXPECT_DOUBLE_EQ(cosine_similarity(z, e1), 0.0);
  const double three[] = {1, 2, 3};
  EXPECT_THROW(cosine_similarity(e1, three), ContractViolation);
}

TEST(PairLoss, IdenticalEmbeddings) {
  LossConfig cfg;
  for (double tau : {0.1, 0.5, 1.0}) {
    cfg.temperature = tau;
    EXPECT_NEAR(pair_loss(identical_batch(2), 0, 1, 2, cfg), std::log(3.0), 1e-12);
    EXPECT_NEAR(pair_loss(identical_batch(4), 3, 2, 1, cfg), std::log(7.0), 1e-12);
  }
}

TEST(PairLoss, MatchesBruteForceOracle) {
  LossConfig cfg{0.5, 1e-12};
  auto b = random_batch(3, 4, 42);
  for (Eigen::Index u = 0; u < 3; ++u) {
    EXPECT_NEAR(pair_loss(b, u, 1, 2, cfg), testing::oracle_pair_loss(b.view1, b.view2, u, 0.5), 1e-12);
    EXPECT_NEAR(pair_loss(b, u, 2, 1, cfg), testing::oracle_pair_loss(b.view2, b.view1, u, 0.5), 1e-12);
  }
}

TEST(PairLoss, Contracts) {
  LossConfig cfg;
  EXPECT_THROW(pair_loss(identical_batch(1), 0, 1, 2, cfg), ContractViolation);
  EXPECT_THROW(pair_loss(identical_batch(3), 0, 1, 1, cfg), ContractViolation);
}

TEST(BatchLoss, IdenticalEmbeddings) {
  LossConfig cfg;
  EXPECT_NEAR(batch_loss(identical_batch(2), cfg), 2 * std::log(3.0), 1e-12);
  EXPECT_NEAR(batch_loss(identical_batch(4), cfg), 2 * std::log(7.0), 1e-12);
  EXPECT_NEAR(batch_loss(identical_batch(4), cfg), 3.89182, 1e-5);
}

TEST(BatchLoss, MatchesBruteForceOracle) {
  LossConfig cfg{0.5, 1e-12};
  auto b = random_batch(3, 4, 7);
  EXPECT_NEAR(batch_loss(b, cfg), testing::oracle_batch_loss(b.view1, b.view2, 0.5), 1e-12);
}

TEST(BatchLoss, LargeBatchCrossesBlockBoundary) {
  // 2M = 600 rows spans several similarity blocks.
  LossConfig cfg{0.8, 1e-12};
  auto b = random_batch(300, 5, 3);
  EXPECT_NEAR(batch_loss(b, cfg), testing::oracle_batch_loss(b.view1, b.view2, 0.8), 1e-10);
}

TEST(BatchLoss, ScaleInvariance) {
  LossConfig cfg;
  auto b = random_batch(5, 6, 11);
  auto scaled = b;
  scaled.view1.row(2) *= 37.5;
  scaled.view2.row(4) *= 0.01;
  for (Eigen::Index u = 0; u < 5; ++u) {
    EXPECT_NEAR(pair_loss(b, u, 1, 2, cfg), pair_loss(scaled, u, 1, 2, cfg), 1e-10);
    EXPECT_NEAR(pair_loss(b, u, 2, 1, cfg), pair_loss(scaled, u, 2, 1, cfg), 1e-10);
  }
}

TEST(BatchLoss, PairLossNonNegativeOnRandomBatches) {
  for (std::uint32_t seed = 0; seed < 50; ++seed) {
    LossConfig cfg{0.1 + 0.02 * seed, 1e-12};
    auto b = random_batch(2 + seed % 6, 3, seed);
    for (Eigen::Index u = 0; u < b.size(); ++u) {
      EXPECT_GE(pair_loss(b, u, 1, 2, cfg), 0.0);
      EXPECT_GE(pair_loss(b, u, 2, 1, cfg), 0.0);
    }
    EXPECT_GT(batch_loss(b, cfg), 0.0);
  }
}

TEST(BatchLoss, RowPermutationInvariance) {
  LossConfig cfg{0.5, 1e-12};
  auto b = random_batch(7, 4, 5);
  std::vector<Eigen::Index> perm(7);
  std::iota(perm.begin(), perm.end(), 0);
  Rng(1).shuffle(perm.begin(), perm.end());
  BatchEmbeddings p{Matrix(7, 4), Matrix(7, 4), {}};
  for (Eigen::Index i = 0; i < 7; ++i) {
    p.view1.row(i) = b.view1.row(perm[i]);
    p.view2.row(i) = b.view2.row(perm[i]);
  }
  EXPECT_NEAR(batch_loss(b, cfg), batch_loss(p, cfg), 1e-12);
}

TEST(BatchLoss, GradientMatchesCentralDifferences) {
  LossConfig cfg{0.5, 1e-12};
  auto b = random_batch(4, 3, 19);
  auto res = batch_loss_and_gradient(b.view1, b.view2, cfg);
  const double h = 1e-6;
  for (int which = 0; which < 2; ++which) {
    for (Eigen::Index i = 0; i < 4; ++i) {
      for (Eigen::Index j = 0; j < 3; ++j) {
        auto up = b, down = b;
        (which ? up.view2 : up.view1)(i, j) += h;
        (which ? down.view2 : down.view1)(i, j) -= h;
        const double numeric = (batch_loss(up, cfg) - batch_loss(down, cfg)) / (2 * h);
        const double analytic = (which ? res.grad_view2 : res.grad_view1)(i, j);
        EXPECT_NEAR(analytic, numeric, 1e-7);
      }
    }
  }
}

TEST(BatchLoss, ZeroRowsStayFinite) {
  LossConfig cfg;
  auto b = random_batch(3, 2, 1);
  b.view1.row(1).setZero();
  auto res = batch_loss_and_gradient(b.view1, b.view2, cfg);
  EXPECT_TRUE(std::isfinite(res.loss));
  EXPECT_TRUE(res.grad_view1.allFinite());
}

TEST(MiLowerBound, Arithmetic) {
  EXPECT_NEAR(mi_lower_bound(0.0, 6), std::log(6.0), 1e-15);
  EXPECT_NEAR(mi_lower_bound(std::log(6.0), 6), 0.0, 1e-15);
  EXPECT_NEAR(mi_lower_bound(2.0, 2 * 4 - 2), -0.20824, 1e-5);
  EXPECT_THROW(mi_lower_bound(1.0, 0), ContractViolation);
  EXPECT_NEAR(batch_mi_bound(3.0, 4), std::log(6.0) - 1.5, 1e-15);
}

}  // namespace
}  // namespace twoview
