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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twoview/dataset.hpp"
#include "twoview/synth.hpp"
#include "twoview/training.hpp"

namespace twoview {

/// Everything one CLI invocation needs, with every path absolute.
struct RunConfig {
  std::filesystem::path dataset_dir;
  /// Explicit file paths; empty entries fall back to dataset_dir.
  DatasetPaths data;
  std::filesystem::path output_dir = "out";
  std::filesystem::path checkpoint;
  std::filesystem::path embeddings;
  std::filesystem::path metrics;

  TrainConfig train;
  /// Set only when the config names a variant; train and embed require it.
  std::optional<EncoderVariant> variant;

  double probe_reg = 1e-4;
  int probe_runs = 10;
  std::uint64_t probe_seed = 0;
  /// "embeddings" probes the exported embedding file, "raw" the input features.
  std::string probe_input = "embeddings";
  double probe_threshold = 0.5;

  SbmSpec synth;

  /// Non-fatal notes produced while resolving, e.g. out-of-range probabilities.
  std::vector<std::string> warnings;

  /// Dataset file locations after applying dataset_dir defaults.
  DatasetPaths dataset_paths() const;
  std::filesystem::path checkpoint_path() const;
  std::filesystem::path embeddings_path() const;
  std::filesystem::path metrics_path() const;
};

/// Raw key/value assignments in file order; later assignments win.
using ConfigMap = std::map<std::string, std::string>;

/// Parses "key = value" lines with '#' comments. Relative path values are
/// made absolute against `base_dir`. Throws ParseError with the line number.
ConfigMap parse_config(std::string_view text, const std::filesystem::path& base_dir,
                       const std::string& source = "config");
ConfigMap load_config_file(const std::filesystem::path& path);

/// Applies one "key=value" override; relative paths resolve against `base_dir`.
void apply_override(ConfigMap& map, std::string_view assignment,
                    const std::filesystem::path& base_dir);

/// Converts and validates every value. Unknown keys and bad values throw
/// ConfigError naming the key.
RunConfig resolve_config(const ConfigMap& map);

/// Canonical "key = value" listing of every key, which parses back to the
/// same RunConfig.
std::string render_config(const RunConfig& cfg);

struct ConfigKeyInfo {
  std::string name;
  std::string default_value;
  std::string description;
};

const std::vector<ConfigKeyInfo>& config_keys();

/// Markdown table of every key with its default and meaning.
std::string config_reference_markdown();

}  // namespace twoview
