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

#include "twoview/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "twoview/errors.hpp"
#include "twoview/parallel.hpp"

namespace twoview {
namespace fs = std::filesystem;
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError("expected a real number, got '" + std::string(v) + "'", key);
  }
  return out;
}

template <typename Int>
Int to_int(const std::string& key, std::string_view v) {
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("expected an integer, got '" + std::string(v) + "'", key);
  }
  return out;
}

bool to_bool(const std::string& key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("expected true or false, got '" + std::string(v) + "'", key);
}

template <typename Int>
std::vector<Int> to_list(const std::string& key, std::string_view v) {
  std::vector<Int> out;
  while (!v.empty()) {
    const auto comma = v.find(',');
    out.push_back(to_int<Int>(key, trim(v.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename Int>
std::string fmt_list(const std::vector<Int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

struct KeyDef {
  const char* name;
  const char* description;
  bool is_path;
  std::function<void(RunConfig&, const std::string&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define TV_PATH(field, desc)                                                              \
  KeyDef{#field, desc, true,                                                              \
         [](RunConfig& c, const std::string&, std::string_view v) { c.field = fs::path(v); }, \
         [](const RunConfig& c) { return c.field.string(); }}
#define TV_DATA(field, desc)                                                                   \
  KeyDef{#field, desc, true,                                                                   \
         [](RunConfig& c, const std::string&, std::string_view v) { c.data.field = fs::path(v); }, \
         [](const RunConfig& c) { return c.data.field.string(); }}
#define TV_REAL(name, expr, desc)                                                           \
  KeyDef{name, desc, false,                                                                 \
         [](RunConfig& c, const std::string& k, std::string_view v) { c.expr = to_double(k, v); }, \
         [](const RunConfig& c) { return fmt_double(c.expr); }}
#define TV_INT(name, type, expr, desc)                                                      \
  KeyDef{name, desc, false,                                                                 \
         [](RunConfig& c, const std::string& k, std::string_view v) { c.expr = to_int<type>(k, v); }, \
         [](const RunConfig& c) { return std::to_string(c.expr); }}
#define TV_BOOL(name, expr, desc)                                                           \
  KeyDef{name, desc, false,                                                                 \
         [](RunConfig& c, const std::string& k, std::string_view v) { c.expr = to_bool(k, v); }, \
         [](const RunConfig& c) { return std::string(c.expr ? "true" : "false"); }}

const std::vector<KeyDef>& key_defs() {
  static const std::vector<KeyDef> defs = {
      TV_PATH(dataset_dir, "Directory holding edges.tsv, features.txt, labels.txt, split.txt."),
      TV_DATA(edges, "Edge list file; overrides dataset_dir/edges.tsv."),
      TV_DATA(features, "Feature matrix file; overrides dataset_dir/features.txt."),
      TV_DATA(labels, "Label file; overrides dataset_dir/labels.txt. Optional except for probe."),
      TV_DATA(split, "Split file; overrides dataset_dir/split.txt. Optional."),
      TV_PATH(output_dir, "Directory for checkpoints, logs, exports, reports and manifests."),
      TV_PATH(checkpoint, "Checkpoint path; defaults to output_dir/model.ckpt."),
      TV_PATH(embeddings, "Embedding export path; defaults to output_dir/embeddings.txt."),
      TV_PATH(metrics, "Metrics report path; defaults to output_dir/metrics.txt."),
      KeyDef{"regime", "transductive (full-graph views) or inductive (subgraph minibatches).", false,
             [](RunConfig& c, const std::string&, std::string_view v) {
               c.train.regime = parse_regime(v);
             },
             [](const RunConfig& c) { return std::string(to_string(c.train.regime)); }},
      KeyDef{"variant", "Encoder: one_layer, two_layer or three_layer_residual. Required for train and embed.",
             false,
             [](RunConfig& c, const std::string&, std::string_view v) {
               if (v.empty()) {
                 c.variant.reset();
               } else {
                 c.variant = parse_variant(v);
                 c.train.variant = *c.variant;
               }
             },
             [](const RunConfig& c) {
               return c.variant ? std::string(to_string(*c.variant)) : std::string();
             }},
      TV_INT("embed_dim", Eigen::Index, train.embed_dim, "Embedding width."),
      KeyDef{"hops", "Subgraph radius for exact inductive subgraphs; empty means the encoder depth.",
             false,
             [](RunConfig& c, const std::string& k, std::string_view v) {
               if (v.empty()) {
                 c.train.hops.reset();
               } else {
                 c.train.hops = to_int<int>(k, v);
               }
             },
             [](const RunConfig& c) {
               return c.train.hops ? std::to_string(*c.train.hops) : std::string();
             }},
      KeyDef{"fanouts", "Comma-separated neighbor fanout per layer (inductive); empty means exact hops.",
             false,
             [](RunConfig& c, const std::string& k, std::string_view v) {
               c.train.fanout.fanouts = to_list<int>(k, v);
             },
             [](const RunConfig& c) { return fmt_list(c.train.fanout.fanouts); }},
      TV_REAL("p_edge", train.perturb.p_edge, "Edge drop probability per view."),
      TV_REAL("p_feat", train.perturb.p_feat, "Feature entry drop probability per view."),
      TV_BOOL("scale_features", train.perturb.scale_features,
              "Rescale kept feature entries by 1/(1-p_feat)."),
      TV_REAL("temperature", train.loss.temperature, "Contrastive loss temperature."),
      TV_REAL("lr", train.lr, "Adam learning rate."),
      TV_REAL("weight_decay", train.weight_decay, "L2 penalty added to the gradient."),
      TV_REAL("adam_beta1", train.adam.beta1, "Adam first-moment decay."),
      TV_REAL("adam_beta2", train.adam.beta2, "Adam second-moment decay."),
      TV_REAL("adam_eps", train.adam.eps, "Adam denominator offset."),
      TV_INT("epochs", int, train.epochs, "Training epochs."),
      TV_INT("batch_size", std::size_t, train.batch_size, "Inductive minibatch size M."),
      TV_BOOL("holdout_unseen", train.holdout_unseen,
              "Inductive: train on the graph induced by the train split only."),
      TV_INT("seed", std::uint64_t, train.seed, "Training seed."),
      TV_INT("inference_seed", std::uint64_t, train.inference_seed,
             "Seed for inductive inference subgraphs."),
      TV_INT("threads", int, train.threads, "Worker threads; results do not depend on it."),
      TV_REAL("probe_reg", probe_reg, "Probe L2 strength."),
      TV_INT("probe_runs", int, probe_runs, "Probe repetitions with distinct seeds."),
      TV_INT("probe_seed", std::uint64_t, probe_seed, "Base seed of the probe runs."),
      KeyDef{"probe_input", "embeddings (the export file) or raw (input features).", false,
             [](RunConfig& c, const std::string& k, std::string_view v) {
               if (v != "embeddings" && v != "raw") {
                 throw ConfigError("expected embeddings or raw, got '" + std::string(v) + "'", k);
               }
               c.probe_input = std::string(v);
             },
             [](const RunConfig& c) { return c.probe_input; }},
      TV_REAL("probe_threshold", probe_threshold, "Multilabel sigmoid threshold."),
      KeyDef{"synth_blocks", "Comma-separated block sizes of the synthetic graph.", false,
             [](RunConfig& c, const std::string& k, std::string_view v) {
               c.synth.block_sizes = to_list<NodeId>(k, v);
             },
             [](const RunConfig& c) { return fmt_list(c.synth.block_sizes); }},
      TV_REAL("synth_p_in", synth.p_in, "Within-block edge probability."),
      TV_REAL("synth_p_out", synth.p_out, "Cross-block edge probability."),
      TV_INT("synth_dim", Eigen::Index, synth.feature_dim, "Synthetic feature width."),
      TV_REAL("synth_separation", synth.separation, "Scale of the block feature means."),
      TV_REAL("synth_noise", synth.noise, "Feature noise standard deviation."),
      TV_BOOL("synth_multilabel", synth.multilabel, "Generate overlapping multilabel blocks."),
      TV_REAL("synth_overlap", synth.overlap, "Secondary membership probability (multilabel)."),
      TV_INT("synth_seed", std::uint64_t, synth.seed, "Generator seed."),
  };
  return defs;
}

#undef TV_PATH
#undef TV_DATA
#undef TV_REAL
#undef TV_INT
#undef TV_BOOL

const KeyDef* find_key(std::string_view name) {
  for (const auto& d : key_defs()) {
    if (name == d.name) return &d;
  }
  return nullptr;
}

void assign(ConfigMap& map, std::string key, std::string value, const fs::path& base_dir) {
  const KeyDef* def = find_key(key);
  if (def && def->is_path && !value.empty()) {
    value = fs::absolute(base_dir / fs::path(value)).lexically_normal().string();
  }
  map[std::move(key)] = std::move(value);
}

void warn_range(RunConfig& c, const char* key, double v, double lo, double hi) {
  if (v < lo || v > hi) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s = %g lies outside the tuned range [%g, %g]", key, v, lo, hi);
    c.warnings.emplace_back(buf);
  }
}

fs::path or_default(const fs::path& p, const fs::path& dir, const char* name) {
  return p.empty() ? dir / name : p;
}

}  // namespace

DatasetPaths RunConfig::dataset_paths() const {
  DatasetPaths p = data;
  const DatasetPaths d = DatasetPaths::in_directory(dataset_dir);
  if (!dataset_dir.empty()) {
    if (p.edges.empty()) p.edges = d.edges;
    if (p.features.empty()) p.features = d.features;
    if (p.labels.empty() && fs::exists(d.labels)) p.labels = d.labels;
    if (p.split.empty() && fs::exists(d.split)) p.split = d.split;
  }
  return p;
}

fs::path RunConfig::checkpoint_path() const { return or_default(checkpoint, output_dir, "model.ckpt"); }
fs::path RunConfig::embeddings_path() const {
  return or_default(embeddings, output_dir, "embeddings.txt");
}
fs::path RunConfig::metrics_path() const { return or_default(metrics, output_dir, "metrics.txt"); }

ConfigMap parse_config(std::string_view text, const fs::path& base_dir, const std::string& source) {
  ConfigMap map;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ParseError(source, line_no, "missing key before '='");
    assign(map, key, std::string(trim(line.substr(eq + 1))), base_dir);
  }
  return map;
}

ConfigMap load_config_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string(), "config");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), fs::absolute(path).parent_path(), path.string());
}

void apply_override(ConfigMap& map, std::string_view assignment, const fs::path& base_dir) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override must look like key=value: '" + std::string(assignment) + "'", "set");
  }
  const std::string key(trim(assignment.substr(0, eq)));
  if (key.empty()) throw ConfigError("override has an empty key", "set");
  assign(map, key, std::string(trim(assignment.substr(eq + 1))), base_dir);
}

RunConfig resolve_config(const ConfigMap& map) {
  RunConfig cfg;
  cfg.train.threads = default_threads();
  cfg.output_dir = fs::absolute(cfg.output_dir).lexically_normal();
  for (const auto& [key, value] : map) {
    const KeyDef* def = find_key(key);
    if (!def) throw ConfigError("unknown configuration key", key);
    if (!value.empty()) def->set(cfg, key, value);
  }

  if (cfg.variant) {
    cfg.train.validate();
  } else {
    TrainConfig relaxed = cfg.train;
    relaxed.fanout.fanouts.clear();
    relaxed.validate();
    cfg.train.fanout.validate();
  }
  cfg.synth.validate();
  if (!(cfg.probe_reg >= 0.0)) throw ConfigError("must be non-negative", "probe_reg");
  if (cfg.probe_runs < 1) throw ConfigError("must be at least 1", "probe_runs");
  if (!(cfg.probe_threshold > 0.0 && cfg.probe_threshold < 1.0)) {
    throw ConfigError("must lie in (0, 1)", "probe_threshold");
  }
  warn_range(cfg, "p_edge", cfg.train.perturb.p_edge, 0.05, 0.75);
  warn_range(cfg, "p_feat", cfg.train.perturb.p_feat, 0.2, 0.8);
  return cfg;
}

std::string render_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& d : key_defs()) {
    const std::string v = d.get(cfg);
    out += d.name;
    out += v.empty() ? " =\n" : " = " + v + "\n";
  }
  return out;
}

const std::vector<ConfigKeyInfo>& config_keys() {
  static const std::vector<ConfigKeyInfo> keys = [] {
    RunConfig defaults;
    defaults.output_dir = "out";
    std::vector<ConfigKeyInfo> out;
    for (const auto& d : key_defs()) {
      std::string def = d.get(defaults);
      if (std::string_view(d.name) == "threads") def = "number of cores";
      out.push_back({d.name, def, d.description});
    }
    return out;
  }();
  return keys;
}

std::string config_reference_markdown() {
  std::string out =
      "# Configuration keys\n\n"
      "Config files hold one `key = value` per line; `#` starts a comment. Command-line\n"
      "`--set key=value` overrides are applied after the file. Relative paths in a file\n"
      "resolve against the file's directory, relative paths in overrides against the\n"
      "working directory. An empty value restores the default.\n\n"
      "| key | default | meaning |\n"
      "|---|---|---|\n";
  for (const auto& k : config_keys()) {
    out += "| `" + k.name + "` | " + (k.default_value.empty() ? "" : "`" + k.default_value + "`") +
           " | " + k.description + " |\n";
  }
  return out;
}

}  // namespace twoview
