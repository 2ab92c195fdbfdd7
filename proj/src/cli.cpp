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

#include "twoview/cli.hpp"

#include <CLI11.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

#include "twoview/checkpoint.hpp"
#include "twoview/errors.hpp"
#include "twoview/parallel.hpp"
#include "twoview/probe.hpp"
#include "twoview/selfcheck.hpp"
#include "twoview/synth.hpp"
#include "twoview/training.hpp"

namespace twoview::cli {
namespace fs = std::filesystem;
namespace {

constexpr const char* kCommands[] = {"gen-synth", "train",     "embed",
                                     "probe",     "selfcheck", "config-reference"};

struct Artifact {
  std::string role;
  std::string name;
  fs::path path;
};

class Manifest {
 public:
  void input(std::string name, const fs::path& p) { items_.push_back({"input", std::move(name), p}); }
  void output(std::string name, const fs::path& p) { items_.push_back({"output", std::move(name), p}); }

  void write(std::string_view command, const RunConfig& cfg) const {
    fs::create_directories(cfg.output_dir);
    const fs::path path = cfg.output_dir / (std::string(command) + ".manifest");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << "# twoview run manifest; usable as a config file to repeat the run\n";
    out << "# command " << command << '\n';
    char hash[32];
    for (const auto& a : items_) {
      std::snprintf(hash, sizeof hash, "%016" PRIx64, fnv1a_file(a.path));
      out << "# " << a.role << ' ' << a.name << ' ' << a.path.string() << " fnv1a64=" << hash << '\n';
    }
    out << render_config(cfg);
  }

 private:
  std::vector<Artifact> items_;
};

void require_file(const fs::path& p, const char* key) {
  if (p.empty()) throw ConfigError("no file configured (set " + std::string(key) + " or dataset_dir)", key);
  if (!fs::is_regular_file(p)) throw ConfigError("file not found: " + p.string(), key);
}

EncoderVariant require_variant(const RunConfig& cfg) {
  if (!cfg.variant) {
    throw ConfigError("required (one_layer, two_layer or three_layer_residual)", "variant");
  }
  return *cfg.variant;
}

DatasetPaths checked_paths(const RunConfig& cfg, bool need_labels) {
  const DatasetPaths p = cfg.dataset_paths();
  require_file(p.edges, "edges");
  require_file(p.features, "features");
  if (!cfg.data.labels.empty() || need_labels) {
    if (p.labels.empty()) {
      const fs::path expected = cfg.dataset_dir.empty() ? fs::path()
                                                        : DatasetPaths::in_directory(cfg.dataset_dir).labels;
      if (expected.empty()) throw ConfigError("no labels file configured (set labels or dataset_dir)", "labels");
      throw ConfigError("labels file not found: " + expected.string(), "labels");
    }
    require_file(p.labels, "labels");
  }
  if (!cfg.data.split.empty()) require_file(p.split, "split");
  return p;
}

void record_inputs(Manifest& m, const DatasetPaths& p) {
  m.input("edges", p.edges);
  m.input("features", p.features);
  if (!p.labels.empty()) m.input("labels", p.labels);
  if (!p.split.empty()) m.input("split", p.split);
}

std::string format_epoch(const EpochRecord& r) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%lld\t%.6f\t%.6f\t%.6f", static_cast<long long>(r.epoch), r.loss,
                r.mi_bound, r.seconds);
  return buf;
}

int gen_synth(const RunConfig& cfg, std::ostream& out) {
  if (cfg.dataset_dir.empty()) throw ConfigError("required: directory to write the dataset to", "dataset_dir");
  const LabeledDataset ds = generate(cfg.synth);
  fs::create_directories(cfg.dataset_dir);
  const DatasetPaths p = DatasetPaths::in_directory(cfg.dataset_dir);
  save_dataset(ds, p);
  out << "nodes=" << ds.num_nodes() << " edges=" << ds.graph.num_edges()
      << " features=" << ds.features.cols() << " classes=" << ds.labels.num_classes << '\n';
  Manifest m;
  for (const auto& [name, file] : {std::pair{"edges", p.edges}, std::pair{"features", p.features},
                                   std::pair{"labels", p.labels}, std::pair{"split", p.split}}) {
    m.output(name, file);
  }
  m.write("gen-synth", cfg);
  return 0;
}

int train_cmd(const RunConfig& cfg, std::ostream& out) {
  require_variant(cfg);
  const DatasetPaths paths = checked_paths(cfg, false);
  const LabeledDataset ds = load_dataset(paths);
  fs::create_directories(cfg.output_dir);
  const fs::path log_path = cfg.output_dir / "train_log.tsv";
  std::ofstream log(log_path, std::ios::binary | std::ios::trunc);
  if (!log) throw Error("cannot write " + log_path.string());
  const TrainResult r = train(ds, cfg.train, [&](const EpochRecord& rec) {
    const std::string line = format_epoch(rec);
    out << line << '\n' << std::flush;
    log << line << '\n';
  });
  const fs::path ckpt = cfg.checkpoint_path();
  if (ckpt.has_parent_path()) fs::create_directories(ckpt.parent_path());
  save_checkpoint(r.params, r.history, ckpt);
  Manifest m;
  record_inputs(m, paths);
  m.output("checkpoint", ckpt);
  m.write("train", cfg);
  return 0;
}

int embed_cmd(const RunConfig& cfg, std::ostream& out) {
  const EncoderVariant variant = require_variant(cfg);
  const DatasetPaths paths = checked_paths(cfg, false);
  const fs::path ckpt = cfg.checkpoint_path();
  require_file(ckpt, "checkpoint");
  const Checkpoint c = load_checkpoint(ckpt, variant);
  const LabeledDataset ds = load_dataset(paths);
  if (c.params.input_dim != ds.features.cols()) {
    throw Error("checkpoint expects " + std::to_string(c.params.input_dim) +
                " input features but the dataset has " + std::to_string(ds.features.cols()));
  }
  const Matrix e = embed(c.params, ds, cfg.train);
  const fs::path dest = cfg.embeddings_path();
  if (dest.has_parent_path()) fs::create_directories(dest.parent_path());
  save_embeddings(e, dest);
  out << "wrote " << e.rows() << " x " << e.cols() << " embeddings to " << dest.string() << '\n';
  Manifest m;
  record_inputs(m, paths);
  m.input("checkpoint", ckpt);
  m.output("embeddings", dest);
  m.write("embed", cfg);
  return 0;
}

int probe_cmd(const RunConfig& cfg, std::ostream& out) {
  const DatasetPaths paths = checked_paths(cfg, true);
  Manifest m;
  record_inputs(m, paths);
  Matrix emb;
  if (cfg.probe_input == "raw") {
    emb = load_dataset(paths).features;
  } else {
    require_file(cfg.embeddings_path(), "embeddings");
    m.input("embeddings", cfg.embeddings_path());
    emb = load_embeddings(cfg.embeddings_path());
  }
  const LabeledDataset ds = load_dataset(paths);
  if (emb.rows() != ds.num_nodes()) {
    throw Error("embedding table has " + std::to_string(emb.rows()) + " rows but the dataset has " +
                std::to_string(ds.num_nodes()) + " nodes");
  }
  if (ds.split.train.empty()) throw ConfigError("train split is empty", "split");
  if (ds.split.test.empty()) throw ConfigError("test split is empty", "split");

  const bool multilabel = ds.labels.kind == LabelKind::multilabel;
  const std::string metric = multilabel ? "micro_f1" : "accuracy";
  std::vector<double> scores(static_cast<std::size_t>(cfg.probe_runs));
  parallel_for(scores.size(), cfg.train.threads, [&](std::size_t r) {
    const LinearProbe p = fit_probe(emb, ds, cfg.probe_reg, derive_seed(cfg.probe_seed, r));
    scores[r] = multilabel ? micro_f1(p, emb, ds, SplitPart::test, cfg.probe_threshold)
                           : accuracy(p, emb, ds, SplitPart::test);
  });
  const MetricSummary summary = summarize(metric, scores);

  std::ostringstream report;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g", cfg.probe_reg);
  report << "# input=" << cfg.probe_input << " reg=" << buf << " split=test\n";
  for (std::size_t r = 0; r < scores.size(); ++r) {
    std::snprintf(buf, sizeof buf, "run=%zu %s=%.6f\n", r, metric.c_str(), scores[r]);
    report << buf;
  }
  report << summary.line() << '\n';
  const fs::path dest = cfg.metrics_path();
  if (dest.has_parent_path()) fs::create_directories(dest.parent_path());
  {
    std::ofstream f(dest, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + dest.string());
    f << report.str();
  }
  out << summary.line() << '\n';
  m.output("metrics", dest);
  m.write("probe", cfg);
  return 0;
}

int selfcheck_cmd(const RunConfig& cfg, std::ostream& out) {
  const auto results = run_selfcheck(out);
  std::size_t failed = 0;
  for (const auto& r : results) failed += !r.passed;
  out << (failed ? "selfcheck FAILED: " : "selfcheck passed: ") << results.size() - failed << "/"
      << results.size() << " checks\n";
  Manifest().write("selfcheck", cfg);
  return failed ? 1 : 0;
}

}  // namespace

std::uint64_t fnv1a_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

int run(std::string_view command, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  for (const auto& w : cfg.warnings) err << "warning: " << w << '\n';
  if (command == "gen-synth") return gen_synth(cfg, out);
  if (command == "train") return train_cmd(cfg, out);
  if (command == "embed") return embed_cmd(cfg, out);
  if (command == "probe") return probe_cmd(cfg, out);
  if (command == "selfcheck") return selfcheck_cmd(cfg, out);
  if (command == "config-reference") {
    out << config_reference_markdown();
    return 0;
  }
  throw ConfigError("unknown command '" + std::string(command) + "'", "command");
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Self-supervised contrastive node embeddings"};
  app.require_subcommand(1);
  std::string config_path;
  std::vector<std::string> overrides;
  for (const char* name : kCommands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config,-c", config_path, "key = value configuration file");
    sub->add_option("--set,-s", overrides, "key=value override, applied after the file")
        ->allow_extra_args(false);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  try {
    ConfigMap map;
    if (!config_path.empty()) map = load_config_file(config_path);
    for (const auto& o : overrides) apply_override(map, o, fs::current_path());
    cfg = resolve_config(map);
  } catch (const ConfigError& e) {
    err << "error: config key '" << e.key() << "': " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    return run(command, cfg, out, err);
  } catch (const ConfigError& e) {
    err << "error: config key '" << e.key() << "': " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace twoview::cli
