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

#include "twoview/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "twoview/errors.hpp"

namespace twoview {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little-endian");

constexpr char kMagic[8] = {'T', 'W', 'O', 'V', 'I', 'E', 'W', 'C'};
constexpr char kHistoryMagic[4] = {'H', 'I', 'S', 'T'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  template <typename T>
  void put(const T& v) {
    const auto* p = reinterpret_cast<const char*>(&v);
    buf_.insert(buf_.end(), p, p + sizeof(T));
  }
  void put_bytes(const char* p, std::size_t n) { buf_.insert(buf_.end(), p, p + n); }
  const std::vector<char>& bytes() const { return buf_; }

 private:
  std::vector<char> buf_;
};

class Reader {
 public:
  Reader(std::vector<char> buf, std::string path) : buf_(std::move(buf)), path_(std::move(path)) {}

  template <typename T>
  T get() {
    T v;
    need(sizeof(T));
    std::memcpy(&v, buf_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  void expect(const char* magic, std::size_t n, const char* what) {
    need(n);
    if (std::memcmp(buf_.data() + pos_, magic, n) != 0) fail(std::string("bad ") + what);
    pos_ += n;
  }
  void need(std::size_t n) const {
    if (buf_.size() - pos_ < n) fail("truncated file");
  }
  bool at_end() const { return pos_ == buf_.size(); }
  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError(path_ + ": " + what);
  }

 private:
  std::vector<char> buf_;
  std::string path_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_checkpoint(const EncoderParams& params, const TrainHistory& history,
                     const std::filesystem::path& path) {
  params.validate();
  Writer w;
  w.put_bytes(kMagic, sizeof kMagic);
  w.put(kVersion);
  w.put(static_cast<std::uint32_t>(params.variant));
  w.put(static_cast<std::uint64_t>(params.input_dim));
  w.put(static_cast<std::uint64_t>(params.embed_dim));
  w.put(static_cast<std::uint64_t>(params.weights.size()));
  for (const Matrix& m : params.weights) {
    w.put(static_cast<std::uint64_t>(m.rows()));
    w.put(static_cast<std::uint64_t>(m.cols()));
    w.put_bytes(reinterpret_cast<const char*>(m.data()),
                static_cast<std::size_t>(m.size()) * sizeof(double));
  }
  w.put_bytes(kHistoryMagic, sizeof kHistoryMagic);
  w.put(static_cast<std::uint64_t>(history.records.size()));
  for (const EpochRecord& r : history.records) {
    w.put(static_cast<std::int64_t>(r.epoch));
    w.put(r.loss);
    w.put(r.mi_bound);
  }

  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
    if (!out) throw Error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path,
                           std::optional<EncoderVariant> expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader r(std::move(buf), path.string());

  r.expect(kMagic, sizeof kMagic, "magic (not a checkpoint)");
  const auto version = r.get<std::uint32_t>();
  if (version != kVersion) r.fail("unsupported format version " + std::to_string(version));
  const auto tag = r.get<std::uint32_t>();
  if (tag < 1 || tag > 3) r.fail("unknown variant tag " + std::to_string(tag));

  Checkpoint ck;
  ck.params.variant = static_cast<EncoderVariant>(tag);
  if (expected && *expected != ck.params.variant) {
    throw FormatError(path.string() + ": variant mismatch: checkpoint holds " +
                      std::string(to_string(ck.params.variant)) + ", config expects " +
                      std::string(to_string(*expected)));
  }
  ck.params.input_dim = static_cast<Eigen::Index>(r.get<std::uint64_t>());
  ck.params.embed_dim = static_cast<Eigen::Index>(r.get<std::uint64_t>());
  const auto count = r.get<std::uint64_t>();
  if (count != weight_count(ck.params.variant)) r.fail("weight count does not match variant");
  for (std::uint64_t k = 0; k < count; ++k) {
    const auto rows = r.get<std::uint64_t>();
    const auto cols = r.get<std::uint64_t>();
    if (rows > (1u << 30) || cols > (1u << 30)) r.fail("implausible matrix shape");
    r.need(rows * cols * sizeof(double));
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = r.get<double>();
    ck.params.weights.push_back(std::move(m));
  }
  try {
    ck.params.validate();
  } catch (const ContractViolation& e) {
    r.fail(e.what());
  }
  r.expect(kHistoryMagic, sizeof kHistoryMagic, "history block");
  const auto records = r.get<std::uint64_t>();
  r.need(records * (sizeof(std::int64_t) + 2 * sizeof(double)));
  for (std::uint64_t k = 0; k < records; ++k) {
    EpochRecord rec;
    rec.epoch = r.get<std::int64_t>();
    rec.loss = r.get<double>();
    rec.mi_bound = r.get<double>();
    ck.history.records.push_back(rec);
  }
  if (!r.at_end()) r.fail("trailing bytes after history block");
  return ck;
}

}  // namespace twoview
