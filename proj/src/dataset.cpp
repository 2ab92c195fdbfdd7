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

#include "twoview/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "line_reader.hpp"
#include "twoview/errors.hpp"

namespace twoview {
namespace {

using detail::LineReader;
using detail::tokenize;

FeatureMatrix read_features(const std::filesystem::path& path) {
  LineReader r(path);
  std::string line;
  if (!r.next(line)) r.fail("missing 'N P' header");
  auto head = tokenize(line);
  if (head.size() != 2) r.fail("header must be 'N P'");
  const auto n = r.parse_int<Eigen::Index>(head[0]);
  const auto p = r.parse_int<Eigen::Index>(head[1]);
  if (n < 0 || p <= 0) r.fail("invalid feature header");
  FeatureMatrix x(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!r.next(line)) r.fail("expected " + std::to_string(n) + " feature rows");
    auto toks = tokenize(line);
    if (static_cast<Eigen::Index>(toks.size()) != p) {
      r.fail("expected " + std::to_string(p) + " values, got " + std::to_string(toks.size()));
    }
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = r.parse_real(toks[j]);
  }
  if (r.next(line)) r.fail("trailing data after " + std::to_string(n) + " feature rows");
  return x;
}

Graph read_edges(const std::filesystem::path& path, NodeId n, EdgeBuildStats& stats) {
  LineReader r(path);
  std::string line;
  std::vector<Edge> edges;
  while (r.next(line)) {
    auto toks = tokenize(line);
    if (toks.size() == 3) r.fail("weighted edges are not supported");
    if (toks.size() != 2) r.fail("expected 'src<TAB>dst'");
    edges.emplace_back(r.parse_node(toks[0], n), r.parse_node(toks[1], n));
  }
  return Graph::from_edges(n, edges, &stats);
}

Labels read_labels(const std::filesystem::path& path, NodeId n) {
  LineReader r(path);
  std::string line;
  if (!r.next(line)) r.fail("missing 'multiclass K' or 'multilabel K' header");
  auto head = tokenize(line);
  if (head.size() != 2) r.fail("header must be 'multiclass K' or 'multilabel K'");
  Labels labels;
  if (head[0] == "multiclass") {
    labels.kind = LabelKind::multiclass;
  } else if (head[0] == "multilabel") {
    labels.kind = LabelKind::multilabel;
  } else {
    r.fail("unknown label kind '" + std::string(head[0]) + "'");
  }
  labels.num_classes = r.parse_int<int>(head[1]);
  if (labels.num_classes < 1) r.fail("label count must be positive");
  const int k = labels.num_classes;
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(n), 0);
  if (labels.kind == LabelKind::multiclass) {
    labels.classes.assign(static_cast<std::size_t>(n), -1);
  } else {
    labels.indicators.setZero(n, k);
    labels.present.assign(static_cast<std::size_t>(n), 0);
  }
  while (r.next(line)) {
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const NodeId u = r.parse_node(toks[0], n);
    if (seen[u]) r.fail("node " + std::to_string(u) + " labeled twice");
    seen[u] = 1;
    if (labels.kind == LabelKind::multiclass) {
      if (toks.size() != 2) r.fail("expected 'node_id<TAB>class_id'");
      const int c = r.parse_int<int>(toks[1]);
      if (c < 0 || c >= k) {
        throw RangeError(path.string() + ": class id " + std::to_string(c) + " outside [0, " +
                         std::to_string(k) + ")");
      }
      labels.classes[u] = c;
    } else {
      if (static_cast<int>(toks.size()) != k + 1) {
        r.fail("expected " + std::to_string(k) + " binary labels");
      }
      for (int j = 0; j < k; ++j) {
        const int b = r.parse_int<int>(toks[j + 1]);
        if (b != 0 && b != 1) r.fail("multilabel entries must be 0 or 1");
        labels.indicators(u, j) = static_cast<std::uint8_t>(b);
      }
      labels.present[u] = 1;
    }
  }
  return labels;
}

Split read_split(const std::filesystem::path& path, NodeId n) {
  LineReader r(path);
  std::string line;
  Split split;
  std::vector<NodeId>* current = nullptr;
  bool seen[3] = {false, false, false};
  while (r.next(line)) {
    auto toks = tokenize(line);
    std::size_t start = 0;
    const std::string_view head = toks[0];
    int section = -1;
    if (head == "train:") section = 0;
    if (head == "val:") section = 1;
    if (head == "test:") section = 2;
    if (section >= 0) {
      if (seen[section]) r.fail("section '" + std::string(head) + "' repeated");
      seen[section] = true;
      current = section == 0 ? &split.train : section == 1 ? &split.val : &split.test;
      start = 1;
    } else if (!current) {
      r.fail("expected 'train:', 'val:' or 'test:'");
    }
    for (std::size_t i = start; i < toks.size(); ++i) current->push_back(r.parse_node(toks[i], n));
  }
  return split;
}

void write_or_throw(const std::filesystem::path& path, const std::string& text) {
  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write " + path.string());
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void append_ids(std::string& s, const std::vector<NodeId>& ids) {
  for (NodeId u : ids) {
    s += ' ';
    s += std::to_string(u);
  }
}

}  // namespace

bool Labels::has_label(NodeId u) const {
  switch (kind) {
    case LabelKind::multiclass:
      return classes[u] >= 0;
    case LabelKind::multilabel:
      return present[u] != 0;
    case LabelKind::none:
      break;
  }
  return false;
}

const std::vector<NodeId>& split_nodes(const Split& s, SplitPart part) {
  switch (part) {
    case SplitPart::train:
      return s.train;
    case SplitPart::val:
      return s.val;
    case SplitPart::test:
      break;
  }
  return s.test;
}

DatasetPaths DatasetPaths::in_directory(const std::filesystem::path& dir) {
  return {dir / "edges.tsv", dir / "features.txt", dir / "labels.txt", dir / "split.txt"};
}

void validate_dataset(const LabeledDataset& ds) {
  const NodeId n = ds.graph.num_nodes();
  if (ds.features.rows() != n) throw ValidationError("feature rows do not match node count");
  if (!ds.features.allFinite()) throw ValidationError("features contain non-finite values");
  std::vector<std::uint8_t> owner(static_cast<std::size_t>(n), 0);
  const char* names[3] = {"train", "val", "test"};
  const std::vector<NodeId>* parts[3] = {&ds.split.train, &ds.split.val, &ds.split.test};
  for (int k = 0; k < 3; ++k) {
    for (NodeId u : *parts[k]) {
      if (u < 0 || u >= n) throw RangeError("split node " + std::to_string(u) + " out of range");
      if (owner[u]) {
        throw ValidationError("node " + std::to_string(u) + " appears in both '" +
                              names[owner[u] - 1] + "' and '" + names[k] + "' splits");
      }
      owner[u] = static_cast<std::uint8_t>(k + 1);
    }
  }
  if (ds.labeled()) {
    for (int k = 0; k < 3; ++k) {
      for (NodeId u : *parts[k]) {
        if (!ds.labels.has_label(u)) {
          throw ValidationError(std::string(names[k]) + " node " + std::to_string(u) +
                                " has no label");
        }
      }
    }
  }
}

LabeledDataset load_dataset(const DatasetPaths& paths) {
  LabeledDataset ds;
  ds.features = read_features(paths.features);
  const auto n = static_cast<NodeId>(ds.features.rows());
  ds.graph = read_edges(paths.edges, n, ds.edge_stats);
  if (!paths.labels.empty()) ds.labels = read_labels(paths.labels, n);
  if (!paths.split.empty()) ds.split = read_split(paths.split, n);
  validate_dataset(ds);
  return ds;
}

void save_dataset(const LabeledDataset& ds, const DatasetPaths& paths) {
  if (!paths.edges.empty()) {
    std::string s;
    for (const auto& [u, v] : ds.graph.edge_list()) {
      s += std::to_string(u);
      s += '\t';
      s += std::to_string(v);
      s += '\n';
    }
    write_or_throw(paths.edges, s);
  }
  if (!paths.features.empty()) {
    const auto& x = ds.features;
    std::string s = std::to_string(x.rows()) + " " + std::to_string(x.cols()) + "\n";
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      for (Eigen::Index j = 0; j < x.cols(); ++j) {
        if (j) s += ' ';
        s += format_real(x(i, j));
      }
      s += '\n';
    }
    write_or_throw(paths.features, s);
  }
  if (!paths.labels.empty() && ds.labeled()) {
    const auto& l = ds.labels;
    const bool multi = l.kind == LabelKind::multilabel;
    std::string s = std::string(multi ? "multilabel " : "multiclass ") +
                    std::to_string(l.num_classes) + "\n";
    for (NodeId u = 0; u < ds.num_nodes(); ++u) {
      if (!l.has_label(u)) continue;
      s += std::to_string(u);
      s += '\t';
      if (multi) {
        for (int j = 0; j < l.num_classes; ++j) {
          if (j) s += ' ';
          s += l.indicators(u, j) ? '1' : '0';
        }
      } else {
        s += std::to_string(l.classes[u]);
      }
      s += '\n';
    }
    write_or_throw(paths.labels, s);
  }
  if (!paths.split.empty()) {
    std::string s = "train:";
    append_ids(s, ds.split.train);
    s += "\nval:";
    append_ids(s, ds.split.val);
    s += "\ntest:";
    append_ids(s, ds.split.test);
    s += '\n';
    write_or_throw(paths.split, s);
  }
}

}  // namespace twoview
