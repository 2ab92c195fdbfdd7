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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "twoview/checkpoint.hpp"
#include "twoview/cli.hpp"
#include "twoview/contrastive.hpp"
#include "twoview/errors.hpp"
#include "twoview/probe.hpp"
#include "twoview/sampling.hpp"
#include "twoview/selfcheck.hpp"
#include "twoview/synth.hpp"
#include "twoview/training.hpp"

namespace py = pybind11;
using namespace twoview;

namespace {

std::vector<std::pair<NodeId, NodeId>> edges_of(const LabeledDataset& ds) {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (const auto& [u, v] : ds.graph.edge_list()) out.emplace_back(u, v);
  return out;
}

py::object labels_of(const LabeledDataset& ds) {
  switch (ds.labels.kind) {
    case LabelKind::multiclass:
      return py::cast(ds.labels.classes);
    case LabelKind::multilabel: {
      Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> m =
          ds.labels.indicators.cast<std::int32_t>();
      return py::cast(m);
    }
    case LabelKind::none:
      break;
  }
  return py::none();
}

py::list history_of(const TrainHistory& h) {
  py::list out;
  for (const auto& r : h.records) {
    py::dict d;
    d["epoch"] = r.epoch;
    d["loss"] = r.loss;
    d["mi_bound"] = r.mi_bound;
    d["seconds"] = r.seconds;
    out.append(d);
  }
  return out;
}

TrainHistory history_from(const py::list& records) {
  TrainHistory h;
  for (const auto& item : records) {
    const auto d = item.cast<py::dict>();
    EpochRecord r;
    r.epoch = d["epoch"].cast<std::int64_t>();
    r.loss = d["loss"].cast<double>();
    r.mi_bound = d["mi_bound"].cast<double>();
    h.records.push_back(r);
  }
  return h;
}

double probe_metric(const Matrix& emb, const LabeledDataset& ds, double reg, std::uint64_t seed,
                    const std::string& split, double threshold) {
  const SplitPart part = split == "train" ? SplitPart::train
                         : split == "val" ? SplitPart::val
                                          : SplitPart::test;
  const LinearProbe p = fit_probe(emb, ds, reg, seed);
  return ds.labels.kind == LabelKind::multilabel ? micro_f1(p, emb, ds, part, threshold)
                                                 : accuracy(p, emb, ds, part);
}

}  // namespace

PYBIND11_MODULE(_twoview, m) {
  m.doc() = "Contrastive self-supervised node embeddings";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<FormatError>(m, "FormatError", base.ptr());
  py::register_exception<TrainingError>(m, "TrainingError", base.ptr());
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);

  py::enum_<EncoderVariant>(m, "Variant")
      .value("one_layer", EncoderVariant::one_layer)
      .value("two_layer", EncoderVariant::two_layer)
      .value("three_layer_residual", EncoderVariant::three_layer_residual);
  py::enum_<Regime>(m, "Regime")
      .value("transductive", Regime::transductive)
      .value("inductive", Regime::inductive);

  py::class_<LabeledDataset>(m, "Dataset")
      .def_property_readonly("num_nodes", &LabeledDataset::num_nodes)
      .def_property_readonly("num_edges", [](const LabeledDataset& d) { return d.graph.num_edges(); })
      .def_property_readonly("edges", &edges_of)
      .def_property_readonly("features", [](const LabeledDataset& d) { return d.features; })
      .def_property_readonly("labels", &labels_of)
      .def_property_readonly("num_classes", [](const LabeledDataset& d) { return d.labels.num_classes; })
      .def_property_readonly("train_nodes", [](const LabeledDataset& d) { return d.split.train; })
      .def_property_readonly("val_nodes", [](const LabeledDataset& d) { return d.split.val; })
      .def_property_readonly("test_nodes", [](const LabeledDataset& d) { return d.split.test; })
      .def("neighbors", [](const LabeledDataset& d, NodeId u) {
        const auto nb = d.graph.neighbors(u);
        return std::vector<NodeId>(nb.begin(), nb.end());
      });

  m.def("load_dataset",
        [](const std::filesystem::path& dir) { return load_dataset(DatasetPaths::in_directory(dir)); },
        py::arg("directory"), "Loads edges.tsv, features.txt and the optional labels.txt, split.txt.");
  m.def("save_dataset",
        [](const LabeledDataset& ds, const std::filesystem::path& dir) {
          std::filesystem::create_directories(dir);
          save_dataset(ds, DatasetPaths::in_directory(dir));
        },
        py::arg("dataset"), py::arg("directory"));

  m.def("generate_sbm",
        [](std::vector<NodeId> blocks, double p_in, double p_out, Eigen::Index dim, double separation,
           double noise, bool multilabel, double overlap, std::uint64_t seed) {
          SbmSpec s;
          s.block_sizes = std::move(blocks);
          s.p_in = p_in;
          s.p_out = p_out;
          s.feature_dim = dim;
          s.separation = separation;
          s.noise = noise;
          s.multilabel = multilabel;
          s.overlap = overlap;
          s.seed = seed;
          return generate(s);
        },
        py::arg("blocks") = SbmSpec{}.block_sizes, py::arg("p_in") = SbmSpec{}.p_in,
        py::arg("p_out") = SbmSpec{}.p_out, py::arg("dim") = SbmSpec{}.feature_dim,
        py::arg("separation") = SbmSpec{}.separation, py::arg("noise") = SbmSpec{}.noise,
        py::arg("multilabel") = false, py::arg("overlap") = SbmSpec{}.overlap, py::arg("seed") = 0);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("regime", &TrainConfig::regime)
      .def_readwrite("variant", &TrainConfig::variant)
      .def_readwrite("embed_dim", &TrainConfig::embed_dim)
      .def_readwrite("hops", &TrainConfig::hops)
      .def_property(
          "fanouts", [](const TrainConfig& c) { return c.fanout.fanouts; },
          [](TrainConfig& c, std::vector<int> f) { c.fanout.fanouts = std::move(f); })
      .def_property(
          "p_edge", [](const TrainConfig& c) { return c.perturb.p_edge; },
          [](TrainConfig& c, double v) { c.perturb.p_edge = v; })
      .def_property(
          "p_feat", [](const TrainConfig& c) { return c.perturb.p_feat; },
          [](TrainConfig& c, double v) { c.perturb.p_feat = v; })
      .def_property(
          "temperature", [](const TrainConfig& c) { return c.loss.temperature; },
          [](TrainConfig& c, double v) { c.loss.temperature = v; })
      .def_readwrite("lr", &TrainConfig::lr)
      .def_readwrite("weight_decay", &TrainConfig::weight_decay)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("holdout_unseen", &TrainConfig::holdout_unseen)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("inference_seed", &TrainConfig::inference_seed)
      .def_readwrite("threads", &TrainConfig::threads)
      .def("validate", &TrainConfig::validate);

  py::class_<EncoderParams>(m, "EncoderParams")
      .def_readonly("variant", &EncoderParams::variant)
      .def_readonly("input_dim", &EncoderParams::input_dim)
      .def_readonly("embed_dim", &EncoderParams::embed_dim)
      .def_property_readonly("weights", [](const EncoderParams& p) { return p.weights; });

  m.def("train",
        [](const LabeledDataset& ds, const TrainConfig& cfg) {
          TrainResult r;
          {
            py::gil_scoped_release release;
            r = train(ds, cfg);
          }
          return py::make_tuple(r.params, history_of(r.history));
        },
        py::arg("dataset"), py::arg("config"),
        "Returns (params, history); history is a list of per-epoch dicts.");
  m.def("embed",
        [](const EncoderParams& p, const LabeledDataset& ds, const TrainConfig& cfg) {
          py::gil_scoped_release release;
          return embed(p, ds, cfg);
        },
        py::arg("params"), py::arg("dataset"), py::arg("config"));

  m.def("save_checkpoint",
        [](const EncoderParams& p, const py::list& history, const std::filesystem::path& path) {
          save_checkpoint(p, history_from(history), path);
        },
        py::arg("params"), py::arg("history"), py::arg("path"));
  m.def("load_checkpoint",
        [](const std::filesystem::path& path) {
          const Checkpoint c = load_checkpoint(path);
          return py::make_tuple(c.params, history_of(c.history));
        },
        py::arg("path"));

  m.def("batch_loss",
        [](const Matrix& v1, const Matrix& v2, double temperature) {
          return batch_loss({v1, v2, {}}, LossConfig{temperature, 1e-12});
        },
        py::arg("view1"), py::arg("view2"), py::arg("temperature") = 0.5);
  m.def("batch_loss_and_gradient",
        [](const Matrix& v1, const Matrix& v2, double temperature) {
          const auto r = batch_loss_and_gradient(v1, v2, LossConfig{temperature, 1e-12}, true);
          return py::make_tuple(r.loss, r.grad_view1, r.grad_view2);
        },
        py::arg("view1"), py::arg("view2"), py::arg("temperature") = 0.5);
  m.def("batch_mi_bound", &batch_mi_bound, py::arg("loss"), py::arg("batch_size"));

  m.def("l_hop_nodes",
        [](const LabeledDataset& ds, NodeId u, int depth) {
          return l_hop_subgraph(ds.graph, ds.features, u, depth).id_map;
        },
        py::arg("dataset"), py::arg("node"), py::arg("depth"),
        "Global ids of the depth-hop ball around node, center first.");
  m.def("fanout_nodes",
        [](const LabeledDataset& ds, NodeId u, std::vector<int> fanouts, std::uint64_t seed) {
          Rng rng(seed);
          return sample_fanout_subgraph(ds.graph, ds.features, u, FanoutConfig{std::move(fanouts)}, rng)
              .id_map;
        },
        py::arg("dataset"), py::arg("node"), py::arg("fanouts"), py::arg("seed") = 0);

  m.def("probe",
        [](const Matrix& emb, const LabeledDataset& ds, double reg, std::uint64_t seed,
           const std::string& split, double threshold) {
          return probe_metric(emb, ds, reg, seed, split, threshold);
        },
        py::arg("embeddings"), py::arg("dataset"), py::arg("reg") = 1e-4, py::arg("seed") = 0,
        py::arg("split") = "test", py::arg("threshold") = 0.5,
        "Fits a linear probe on the train split; returns accuracy or micro-F1 on `split`.");

  m.def("selfcheck", [] {
    std::ostringstream log;
    py::list out;
    for (const auto& r : run_selfcheck(log)) out.append(py::make_tuple(r.name, r.passed, r.detail));
    return out;
  });

  m.def("run_cli",
        [](std::vector<std::string> args) {
          args.insert(args.begin(), "twoview");
          std::vector<const char*> argv;
          for (const auto& a : args) argv.push_back(a.c_str());
          std::ostringstream out, err;
          const int status = twoview::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
          return py::make_tuple(status, out.str(), err.str());
        },
        py::arg("args"), "Runs a CLI command in-process; returns (status, stdout, stderr).");
}
