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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "twoview/dataset.hpp"
#include "twoview/types.hpp"

namespace twoview {

struct ProbeOptions {
  double tolerance = 1e-6;
  int max_iterations = 10000;
};

/// Logistic-regression probe on frozen embeddings.
///
/// `weights` is (P'+1) x K with the bias in the last row. For multiclass
/// data the K columns form one softmax model; for multilabel data each
/// column is an independent binary model.
struct LinearProbe {
  LabelKind kind = LabelKind::none;
  Matrix weights;
  double reg = 0.0;
  /// Objective value per iteration, one trace per fitted model.
  std::vector<std::vector<double>> objective_trace;
};

/// Fits on the train split by full-batch gradient descent with Armijo
/// backtracking until the gradient norm drops below the tolerance or the
/// iteration budget runs out. The L2 penalty (reg / 2) |W|^2 skips the bias.
/// `seed` draws the small random starting point.
LinearProbe fit_probe(const Matrix& embeddings, const LabeledDataset& ds, double reg,
                      std::uint64_t seed, const ProbeOptions& options = {});

/// Raw scores (logits) for the given nodes.
Matrix probe_scores(const LinearProbe& probe, const Matrix& embeddings,
                    std::span<const NodeId> nodes);

/// Argmax class per node; ties go to the lowest class id.
std::vector<int> predict_classes(const LinearProbe& probe, const Matrix& embeddings,
                                 std::span<const NodeId> nodes);

double accuracy(const LinearProbe& probe, const Matrix& embeddings, const LabeledDataset& ds,
                SplitPart part);

/// 2TP / (2TP + FP + FN), 0 when the denominator is 0.
double micro_f1_from_counts(std::int64_t tp, std::int64_t fp, std::int64_t fn);

/// Pooled over every (node, label) pair of the split; a label is predicted
/// when its sigmoid score reaches `threshold`.
double micro_f1(const LinearProbe& probe, const Matrix& embeddings, const LabeledDataset& ds,
                SplitPart part, double threshold = 0.5);

struct MetricSummary {
  std::string name;
  double mean = 0.0;
  /// Sample standard deviation; 0 for a single run.
  double std = 0.0;
  int runs = 0;

  /// "metric=<name> mean=<v> std=<v> runs=<n>".
  std::string line() const;
};

MetricSummary summarize(std::string name, std::span<const double> values);

/// Text export: header "N P'", then one line per node, "id v1 ... vP'" with
/// 9 significant digits.
void save_embeddings(const Matrix& embeddings, const std::filesystem::path& path);
/// Throws ParseError on malformed lines and FormatError on missing rows.
Matrix load_embeddings(const std::filesystem::path& path);

}  // namespace twoview
