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

#include "twoview/selfcheck.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>

#include "twoview/contrastive.hpp"
#include "twoview/sampling.hpp"

namespace twoview {
namespace {

constexpr NodeId kNodes = 12;
constexpr Eigen::Index kInputDim = 5;
constexpr Eigen::Index kEmbedDim = 7;
constexpr std::size_t kBatch = 4;
constexpr double kGradTolerance = 1e-5;
constexpr double kLossTolerance = 1e-12;

Graph random_graph(NodeId n, double p, Rng& rng) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (rng.bernoulli(p)) edges.emplace_back(u, v);
    }
  }
  return Graph::from_edges(n, edges);
}

Matrix random_normal(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

double reference_cosine(const Matrix& a, Eigen::Index i, const Matrix& b, Eigen::Index j) {
  double dot = 0, na = 0, nb = 0;
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    dot += a(i, k) * b(j, k);
    na += a(i, k) * a(i, k);
    nb += b(j, k) * b(j, k);
  }
  return dot / (std::max(std::sqrt(na), 1e-12) * std::max(std::sqrt(nb), 1e-12));
}

double reference_direction(const Matrix& hi, const Matrix& hj, Eigen::Index u, double tau) {
  double denom = 0.0;
  for (Eigen::Index v = 0; v < hi.rows(); ++v) {
    if (v != u) denom += std::exp(reference_cosine(hi, u, hi, v) / tau);
    denom += std::exp(reference_cosine(hi, u, hj, v) / tau);
  }
  return -std::log(std::exp(reference_cosine(hi, u, hj, u) / tau) / denom);
}

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

PipelineInstance make_pipeline_instance(EncoderVariant variant, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x5e1fc4ecULL, static_cast<std::uint64_t>(variant)));
  const Graph g = random_graph(kNodes, 0.3, rng);
  const FeatureMatrix x = random_normal(kNodes, kInputDim, rng);

  std::vector<NodeId> nodes(kNodes);
  for (NodeId u = 0; u < kNodes; ++u) nodes[u] = u;
  rng.shuffle(nodes.begin(), nodes.end());

  PerturbConfig perturb;  // defaults: p_edge 0.15, p_feat 0.6, rescaled
  std::vector<std::pair<Subgraph, Subgraph>> views;
  for (std::size_t i = 0; i < kBatch; ++i) {
    views.push_back(make_views(l_hop_subgraph(g, x, nodes[i], depth(variant)), perturb, rng));
  }
  PipelineInstance inst;
  inst.params = EncoderParams::glorot(variant, kInputDim, kEmbedDim, rng);
  inst.input = pack_subgraph_views(views);
  inst.loss = LossConfig{0.5, 1e-12};
  return inst;
}

double pipeline_gradient_error(EncoderVariant variant, std::uint64_t seed) {
  const PipelineInstance inst = make_pipeline_instance(variant, seed);
  ScalarFunction f = [&](std::span<const Matrix> weights, std::vector<Matrix>* grads) {
    EncoderParams p = inst.params;
    p.weights.assign(weights.begin(), weights.end());
    return contrastive_objective(p, inst.input, inst.loss, grads);
  };
  return fd_gradient_check(f, inst.params.weights, 1e-5);
}

double reference_batch_loss(const Matrix& view1, const Matrix& view2, double temperature) {
  double total = 0.0;
  for (Eigen::Index u = 0; u < view1.rows(); ++u) {
    total += reference_direction(view1, view2, u, temperature) +
             reference_direction(view2, view1, u, temperature);
  }
  return total / static_cast<double>(view1.rows());
}

std::vector<CheckResult> run_selfcheck(std::ostream& log, int instances_per_variant) {
  std::vector<CheckResult> results;
  auto report = [&](CheckResult r) {
    log << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << '\n';
    results.push_back(std::move(r));
  };

  for (auto v : {EncoderVariant::one_layer, EncoderVariant::two_layer,
                 EncoderVariant::three_layer_residual}) {
    double worst = 0.0;
    for (int s = 0; s < instances_per_variant; ++s) {
      worst = std::max(worst, pipeline_gradient_error(v, static_cast<std::uint64_t>(s)));
    }
    report({"gradient_check/" + std::string(to_string(v)), worst < kGradTolerance,
            format("max_rel_err=%.3e", worst)});
  }

  {
    Rng rng(2);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      const Eigen::Index m = 2 + t % 4;
      const double tau = t % 3 == 0 ? 0.1 : t % 3 == 1 ? 0.5 : 1.0;
      BatchEmbeddings b{random_normal(m, 6, rng), random_normal(m, 6, rng), {}};
      LossConfig cfg{tau, 1e-12};
      worst = std::max(worst, std::abs(batch_loss(b, cfg) - reference_batch_loss(b.view1, b.view2, tau)));
      double pair_sum = 0.0, ref_sum = 0.0;
      for (Eigen::Index u = 0; u < m; ++u) {
        pair_sum += pair_loss(b, u, 1, 2, cfg) + pair_loss(b, u, 2, 1, cfg);
        ref_sum += reference_direction(b.view1, b.view2, u, tau) +
                   reference_direction(b.view2, b.view1, u, tau);
      }
      worst = std::max(worst, std::abs(pair_sum - ref_sum) / static_cast<double>(m));
    }
    report({"loss_oracle/random", worst < kLossTolerance, format("max_abs_err=%.3e", worst)});
  }

  {
    double worst = 0.0;
    for (Eigen::Index m : {2, 3, 5}) {
      Matrix same = Matrix::Constant(m, 4, 0.3);
      const double expected = 2.0 * std::log(static_cast<double>(2 * m - 1));
      worst = std::max(worst, std::abs(batch_loss({same, same, {}}, LossConfig{}) - expected));
    }
    report({"loss_oracle/identical", worst < 1e-9, format("max_abs_err=%.3e", worst)});
  }

  {
    Rng rng(3);
    bool ok = true;
    for (int t = 0; t < 100 && ok; ++t) {
      const NodeId n = 10 + static_cast<NodeId>(rng.uniform_index(40));
      const Graph g = random_graph(n, 0.03 + 0.1 * rng.uniform(), rng);
      const FeatureMatrix x = Matrix::Zero(n, 1);
      const auto u = static_cast<NodeId>(rng.uniform_index(static_cast<std::uint64_t>(n)));
      const int d = static_cast<int>(rng.uniform_index(4));
      // Brute force: repeated relaxation over the edge list.
      std::vector<int> dist(static_cast<std::size_t>(n), -1);
      dist[u] = 0;
      const auto edges = g.edge_list();
      for (int step = 0; step < d; ++step) {
        for (const auto& [a, b] : edges) {
          if (dist[a] == step && dist[b] < 0) dist[b] = step + 1;
          if (dist[b] == step && dist[a] < 0) dist[a] = step + 1;
        }
      }
      std::set<NodeId> expected;
      for (NodeId w = 0; w < n; ++w) {
        if (dist[w] >= 0) expected.insert(w);
      }
      const Subgraph s = l_hop_subgraph(g, x, u, d);
      ok = std::set<NodeId>(s.id_map.begin(), s.id_map.end()) == expected;
    }
    report({"subgraph_oracle/bfs", ok, "100 instances"});
  }
  return results;
}

}  // namespace twoview
