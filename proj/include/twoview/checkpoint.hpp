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

#include <filesystem>
#include <optional>

#include "twoview/encoder.hpp"
#include "twoview/training.hpp"

namespace twoview {

/// Binary checkpoint layout (little-endian):
///
///   char[8]  "TWOVIEWC"
///   u32      format version (1)
///   u32      variant tag (1 one_layer, 2 two_layer, 3 three_layer_residual)
///   u64      input dim, u64 embed dim, u64 weight count
///   per weight: u64 rows, u64 cols, rows*cols f64 in row-major order
///   char[4]  "HIST", u64 record count
///   per record: i64 epoch, f64 loss, f64 mi_bound
///
/// Wall-clock seconds are not stored, so identical runs write identical
/// files.
struct Checkpoint {
  EncoderParams params;
  TrainHistory history;
};

/// Writes to a temporary sibling and renames into place.
void save_checkpoint(const EncoderParams& params, const TrainHistory& history,
                     const std::filesystem::path& path);

/// Throws FormatError on a bad magic, version, truncation or trailing
/// bytes. With `expected` set, a checkpoint of another variant is rejected.
Checkpoint load_checkpoint(const std::filesystem::path& path,
                           std::optional<EncoderVariant> expected = std::nullopt);

}  // namespace twoview
