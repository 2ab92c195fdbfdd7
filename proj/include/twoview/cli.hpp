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
#include <iosfwd>
#include <string_view>

#include "twoview/config.hpp"

namespace twoview::cli {

/// Parses `<command> [--config path] [--set key=value ...]` and runs the
/// command. Returns 0 on success, 2 on configuration errors and 1 on runtime
/// failures, after writing a one-line reason to `err`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs one command on a resolved config. Throws on failure.
/// Commands: gen-synth, train, embed, probe, selfcheck, config-reference.
int run(std::string_view command, const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// FNV-1a (64-bit) of a file's bytes.
std::uint64_t fnv1a_file(const std::filesystem::path& path);

}  // namespace twoview::cli
