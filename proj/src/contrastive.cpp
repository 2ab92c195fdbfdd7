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

#include "twoview/contrastive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "twoview/errors.hpp"

namespace twoview {
namespace {

constexpr Eigen::Index kBlockRows = 256;

Matrix normalize_rows(const Matrix& h, double eps, Vector& norms) {
  norms.resize(h.rows());
  Matrix z(h.rows(), h.cols());
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    norms[r] = std::max(h.row(r).norm(), eps);
    z.row(r) = h.row(r) / norms[r];
  }
  return z;
}

const Matrix& view(const BatchEmbeddings& b, int i) {
  require(i == 1 || i == 2, "view index must be 1 or 2");
  return i == 1 ? b.view1 : b.view2;
}

void check_batch(const BatchEmbeddings& b) {
  require(b.view1.rows() == b.view2.rows() && b.view1.cols() == b.view2.cols(),
          "both views must have the same shape");
  require(b.view1.rows() >= 2, "contrastive loss needs at least two batch rows");
}

}  // namespace

void LossConfig::validate() const {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ConfigError("temperature must be positive, got " + std::to_string(temperature),
                      "temperature");
  }
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive", "epsilon");
}

double cosine_similarity(std::span<const double> a, std::span<const double> b, double epsilon) {
  require(a.size() == b.size(), "cosine_similarity: length mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  return dot / (std::max(std::sqrt(na), epsilon) * std::max(std::sqrt(nb), epsilon));
}

double pair_loss(const BatchEmbeddings& batch, Eigen::Index u, int i, int j, const LossConfig& cfg) {
  check_batch(batch);
  require(i != j, "pair_loss: views must differ");
  require(u >= 0 && u < batch.size(), "pair_loss: row out of range");
  const Matrix& hi = view(batch, i);
  const Matrix& hj = view(batch, j);
  const auto m = batch.size();
  const auto d = static_cast<std::size_t>(hi.cols());
  auto row = [d](const Matrix& h, Eigen::Index r) { return std::span<const double>(&h(r, 0), d); };

  // Scaled similarities in denominator order: same view (v != u), then cross view.
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(2 * m - 1));
  for (Eigen::Index v = 0; v < m; ++v) {
    if (v != u) terms.push_back(cosine_similarity(row(hi, u), row(hi, v), cfg.epsilon) / cfg.temperature);
  }
  for (Eigen::Index v = 0; v < m; ++v) {
    terms.push_back(cosine_similarity(row(hi, u), row(hj, v), cfg.epsilon) / cfg.temperature);
  }
  const double positive = cosine_similarity(row(hi, u), row(hj, u), cfg.epsilon) / cfg.temperature;
  const double top = *std::max_element(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - top);
  return top + std::log(sum) - positive;
}

double batch_loss(const BatchEmbeddings& batch, const LossConfig& cfg) {
  check_batch(batch);
  return batch_loss_and_gradient(batch.view1, batch.view2, cfg, false).loss;
}

LossAndGradient batch_loss_and_gradient(const Matrix& view1, const Matrix& view2,
                                        const LossConfig& cfg, bool with_gradient) {
  require(view1.rows() == view2.rows() && view1.cols() == view2.cols(),
          "both views must have the same shape");
  const Eigen::Index m = view1.rows();
  require(m >= 2, "contrastive loss needs at least two batch rows");
  const Eigen::Index two_m = 2 * m;

  Matrix h(two_m, view1.cols());
  h.topRows(m) = view1;
  h.bottomRows(m) = view2;
  Vector norms;
  const Matrix z = normalize_rows(h, cfg.epsilon, norms);
  const double inv_tau = 1.0 / cfg.temperature;
  const double inv_m = 1.0 / static_cast<double>(m);

  LossAndGradient out;
  Matrix grad_z;
  if (with_gradient) grad_z.setZero(two_m, z.cols());

  double total = 0.0;
  for (Eigen::Index start = 0; start < two_m; start += kBlockRows) {
    const Eigen::Index rows = std::min(kBlockRows, two_m - start);
    Matrix s = (z.middleRows(start, rows) * z.transpose()) * inv_tau;
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Eigen::Index a = start + r;
      const Eigen::Index partner = a < m ? a + m : a - m;
      double top = -std::numeric_limits<double>::infinity();
      for (Eigen::Index b = 0; b < two_m; ++b) {
        if (b != a) top = std::max(top, s(r, b));
      }
      double sum = 0.0;
      for (Eigen::Index b = 0; b < two_m; ++b) {
        if (b != a) sum += std::exp(s(r, b) - top);
      }
      const double lse = top + std::log(sum);
      total += lse - s(r, partner);
      if (with_gradient) {
        // d loss / d s(a, b), already scaled by 1/M and 1/tau.
        for (Eigen::Index b = 0; b < two_m; ++b) {
          s(r, b) = b == a ? 0.0 : std::exp(s(r, b) - lse) * inv_m * inv_tau;
        }
        s(r, partner) -= inv_m * inv_tau;
      }
    }
    if (with_gradient) {
      grad_z.middleRows(start, rows).noalias() += s * z;
      grad_z.noalias() += s.transpose() * z.middleRows(start, rows);
    }
  }
  out.loss = total * inv_m;

  if (with_gradient) {
    Matrix grad_h(two_m, z.cols());
    for (Eigen::Index a = 0; a < two_m; ++a) {
      if (norms[a] > cfg.epsilon) {
        const double proj = z.row(a).dot(grad_z.row(a));
        grad_h.row(a) = (grad_z.row(a) - proj * z.row(a)) / norms[a];
      } else {
        grad_h.row(a) = grad_z.row(a) / cfg.epsilon;
      }
    }
    out.grad_view1 = grad_h.topRows(m);
    out.grad_view2 = grad_h.bottomRows(m);
  }
  return out;
}

double mi_lower_bound(double loss_one_direction, long long k) {
  require(k >= 1, "mi_lower_bound: k must be at least 1");
  return std::log(static_cast<double>(k)) - loss_one_direction;
}

double batch_mi_bound(double batch_loss_value, Eigen::Index batch_size) {
  require(batch_size >= 2, "batch_mi_bound: batch size must be at least 2");
  return mi_lower_bound(0.5 * batch_loss_value, 2 * static_cast<long long>(batch_size) - 2);
}

}  // namespace twoview
