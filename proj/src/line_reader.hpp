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

// Shared tokenizer for the whitespace-separated text formats.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "twoview/errors.hpp"
#include "twoview/types.hpp"

namespace twoview::detail {

inline std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path) : path_(path.string()), in_(path) {
    if (!in_) throw Error("cannot open " + path_);
  }

  /// Next non-blank line that does not start with '#'.
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(path_, line_no_, what); }

  template <typename T>
  T parse_int(std::string_view tok) const {
    T v{};
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size()) {
      fail("expected an integer, got '" + std::string(tok) + "'");
    }
    return v;
  }

  double parse_real(std::string_view tok) const {
    double v{};
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size()) {
      fail("expected a real number, got '" + std::string(tok) + "'");
    }
    if (!std::isfinite(v)) fail("non-finite value '" + std::string(tok) + "'");
    return v;
  }

  NodeId parse_node(std::string_view tok, NodeId n) const {
    const auto v = parse_int<NodeId>(tok);
    if (v < 0 || v >= n) {
      throw RangeError(path_ + ":" + std::to_string(line_no_) + ": node id " + std::to_string(v) +
                       " outside [0, " + std::to_string(n) + ")");
    }
    return v;
  }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
};

}  // namespace twoview::detail
