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

#include <gtest/gtest.h>

#include <regex>
#include <sstream>

#include "test_util.hpp"
#include "twoview/checkpoint.hpp"
#include "twoview/cli.hpp"
#include "twoview/config.hpp"
#include "twoview/errors.hpp"

#ifndef TWOVIEW_SOURCE_DIR
#define TWOVIEW_SOURCE_DIR "."
#endif

namespace twoview {
namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "twoview");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string base_config(const testing::TempDir& dir) {
  return "dataset_dir = " + (dir / "data").string() + "\noutput_dir = " + (dir / "out").string() +
         "\nvariant = two_layer\nembed_dim = 8\nepochs = 3\nthreads = 1\nprobe_runs = 2\n"
         "synth_blocks = 20,20,20\n";
}

TEST(Config, ParsesCommentsAndLaterValuesWin) {
  const ConfigMap m = parse_config("# header\nlr = 0.01  # inline\n\n  epochs=7\nlr = 0.02\n", "/base");
  EXPECT_EQ(m.at("lr"), "0.02");
  EXPECT_EQ(m.at("epochs"), "7");
  const RunConfig c = resolve_config(m);
  EXPECT_DOUBLE_EQ(c.train.lr, 0.02);
  EXPECT_EQ(c.train.epochs, 7);
}

TEST(Config, DefaultsMatchDocumentedValues) {
  const RunConfig c = resolve_config({});
  EXPECT_DOUBLE_EQ(c.train.lr, 0.001);
  EXPECT_DOUBLE_EQ(c.train.loss.temperature, 0.5);
  EXPECT_DOUBLE_EQ(c.train.perturb.p_feat, 0.6);
  EXPECT_DOUBLE_EQ(c.train.perturb.p_edge, 0.15);
  EXPECT_EQ(c.train.embed_dim, 512);
  EXPECT_EQ(c.probe_runs, 10);
  EXPECT_DOUBLE_EQ(c.probe_reg, 1e-4);
  EXPECT_FALSE(c.variant.has_value());
  EXPECT_TRUE(c.warnings.empty());
}

TEST(Config, MalformedLineReportsLineNumber) {
  try {
    parse_config("lr = 1\nnot an assignment\n", "/", "run.cfg");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Config, UnknownKeyIsRejected) {
  try {
    resolve_config({{"learning_rate", "0.1"}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "learning_rate");
  }
}

TEST(Config, BadValuesNameTheKey) {
  for (const auto& [key, value] : std::vector<std::pair<std::string, std::string>>{
           {"lr", "fast"}, {"epochs", "-1"}, {"temperature", "0"}, {"p_edge", "1.5"},
           {"variant", "four_layer"}, {"fanouts", "10,x"}, {"scale_features", "maybe"},
           {"probe_runs", "0"}, {"probe_input", "both"}, {"synth_p_out", "0.9"}}) {
    try {
      resolve_config({{key, value}});
      ADD_FAILURE() << key;
    } catch (const ConfigError& e) {
      EXPECT_EQ(e.key(), key);
    }
  }
}

TEST(Config, OutOfRangePerturbationWarns) {
  const RunConfig c = resolve_config({{"p_edge", "0.9"}, {"p_feat", "0.1"}});
  ASSERT_EQ(c.warnings.size(), 2u);
  EXPECT_NE(c.warnings[0].find("p_edge"), std::string::npos);
  EXPECT_NE(c.warnings[1].find("p_feat"), std::string::npos);
}

TEST(Config, RelativePathsResolveAgainstBase) {
  ConfigMap m = parse_config("dataset_dir = data\n", "/srv/run");
  EXPECT_EQ(m.at("dataset_dir"), "/srv/run/data");
  apply_override(m, "output_dir=o", "/tmp/cwd");
  EXPECT_EQ(m.at("output_dir"), "/tmp/cwd/o");
  const RunConfig c = resolve_config(m);
  EXPECT_EQ(c.dataset_paths().edges, "/srv/run/data/edges.tsv");
  EXPECT_EQ(c.checkpoint_path(), "/tmp/cwd/o/model.ckpt");
}

TEST(Config, RenderParsesBackToSameConfig) {
  const ConfigMap m = parse_config(
      "variant = three_layer_residual\nregime = inductive\nfanouts = 5,4,3\nlr = 0.0123\n"
      "synth_blocks = 7,8\nsynth_multilabel = true\nhops = 2\n",
      "/");
  const RunConfig a = resolve_config(m);
  const std::string text = render_config(a);
  const RunConfig b = resolve_config(parse_config(text, "/"));
  EXPECT_EQ(render_config(b), text);
  EXPECT_EQ(b.train.fanout.fanouts, (std::vector<int>{5, 4, 3}));
  EXPECT_EQ(b.synth.block_sizes, (std::vector<NodeId>{7, 8}));
  EXPECT_EQ(b.train.lr, 0.0123);
}

TEST(Config, FanoutCountMustMatchDepth) {
  EXPECT_THROW(resolve_config({{"variant", "one_layer"}, {"regime", "inductive"}, {"fanouts", "3,3"}}),
               ConfigError);
}

TEST(Config, ReferencePageIsCurrent) {
  const std::string committed =
      testing::read_file(std::filesystem::path(TWOVIEW_SOURCE_DIR) / "docs" / "config_reference.md");
  EXPECT_EQ(committed, config_reference_markdown());
  for (const auto& k : config_keys()) {
    EXPECT_NE(committed.find("`" + k.name + "`"), std::string::npos) << k.name;
  }
}

TEST(Fnv, KnownVectors) {
  testing::TempDir dir;
  testing::write_file(dir / "empty", "");
  testing::write_file(dir / "a", "a");
  testing::write_file(dir / "foobar", "foobar");
  EXPECT_EQ(cli::fnv1a_file(dir / "empty"), 0xcbf29ce484222325ULL);
  EXPECT_EQ(cli::fnv1a_file(dir / "a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(cli::fnv1a_file(dir / "foobar"), 0x85944171f73967e8ULL);
}

TEST(Cli, UnknownKeyExitsTwo) {
  testing::TempDir dir;
  testing::write_file(dir / "c.cfg", "bogus = 1\n");
  const Outcome o = invoke({"train", "--config", (dir / "c.cfg").string()});
  EXPECT_EQ(o.status, 2);
  EXPECT_NE(o.err.find("bogus"), std::string::npos);
}

TEST(Cli, UnknownCommandExitsTwo) { EXPECT_EQ(invoke({"fly"}).status, 2); }

TEST(Cli, MissingVariantExitsTwo) {
  testing::TempDir dir;
  testing::write_file(dir / "c.cfg", base_config(dir) + "variant =\n");
  ASSERT_EQ(invoke({"gen-synth", "-c", (dir / "c.cfg").string()}).status, 0);
  const Outcome o = invoke({"train", "-c", (dir / "c.cfg").string()});
  EXPECT_EQ(o.status, 2);
  EXPECT_NE(o.err.find("variant"), std::string::npos);
}

TEST(Cli, MissingDatasetExitsTwo) {
  testing::TempDir dir;
  testing::write_file(dir / "c.cfg", base_config(dir));
  const Outcome o = invoke({"train", "-c", (dir / "c.cfg").string()});
  EXPECT_EQ(o.status, 2);
  EXPECT_NE(o.err.find("edges"), std::string::npos);
}

TEST(Cli, CorruptDataIsRuntimeFailure) {
  testing::TempDir dir;
  testing::write_file(dir / "c.cfg", base_config(dir));
  ASSERT_EQ(invoke({"gen-synth", "-c", (dir / "c.cfg").string()}).status, 0);
  testing::write_file(dir / "data" / "edges.tsv", "0\t1\n0\tzz\n");
  const Outcome o = invoke({"train", "-c", (dir / "c.cfg").string()});
  EXPECT_EQ(o.status, 1);
  EXPECT_NE(o.err.find("edges.tsv:2"), std::string::npos);
}

TEST(Cli, ZeroEpochTrainWritesInitialization) {
  testing::TempDir dir;
  testing::write_file(dir / "c.cfg", base_config(dir) + "epochs = 0\nseed = 5\n");
  ASSERT_EQ(invoke({"gen-synth", "-c", (dir / "c.cfg").string()}).status, 0);
  const Outcome o = invoke({"train", "-c", (dir / "c.cfg").string()});
  ASSERT_EQ(o.status, 0) << o.err;
  EXPECT_TRUE(o.out.empty());
  const Checkpoint c = load_checkpoint(dir / "out" / "model.ckpt");
  EXPECT_TRUE(c.history.records.empty());
  Rng rng(derive_seed(5, 1));
  const EncoderParams init = EncoderParams::glorot(EncoderVariant::two_layer, 16, 8, rng);
  for (std::size_t k = 0; k < init.weights.size(); ++k) {
    EXPECT_TRUE(c.params.weights[k] == init.weights[k]);
  }
}

TEST(Cli, ProbeOnUnlabeledDatasetNamesLabelsFile) {
  testing::TempDir dir;
  testing::write_file(dir / "c.cfg", base_config(dir));
  ASSERT_EQ(invoke({"gen-synth", "-c", (dir / "c.cfg").string()}).status, 0);
  std::filesystem::remove(dir / "data" / "labels.txt");
  ASSERT_EQ(invoke({"train", "-c", (dir / "c.cfg").string()}).status, 0);
  ASSERT_EQ(invoke({"embed", "-c", (dir / "c.cfg").string()}).status, 0);
  const Outcome o = invoke({"probe", "-c", (dir / "c.cfg").string()});
  EXPECT_EQ(o.status, 2);
  EXPECT_NE(o.err.find((dir / "data" / "labels.txt").string()), std::string::npos) << o.err;
}

TEST(Cli, EmbedRejectsVariantMismatch) {
  testing::TempDir dir;
  testing::write_file(dir / "c.cfg", base_config(dir));
  ASSERT_EQ(invoke({"gen-synth", "-c", (dir / "c.cfg").string()}).status, 0);
  ASSERT_EQ(invoke({"train", "-c", (dir / "c.cfg").string()}).status, 0);
  const Outcome o = invoke({"embed", "-c", (dir / "c.cfg").string(), "--set", "variant=one_layer"});
  EXPECT_EQ(o.status, 1);
  EXPECT_NE(o.err.find("variant"), std::string::npos);
}

TEST(Cli, PipelineLogsAndReports) {
  testing::TempDir dir;
  const std::string cfg = (dir / "c.cfg").string();
  testing::write_file(dir / "c.cfg", base_config(dir) + "p_edge = 0.9\n");
  ASSERT_EQ(invoke({"gen-synth", "-c", cfg}).status, 0);
  const Outcome t = invoke({"train", "-c", cfg});
  ASSERT_EQ(t.status, 0) << t.err;
  EXPECT_NE(t.err.find("warning: p_edge"), std::string::npos);
  std::istringstream lines(t.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    static const std::regex kLine(R"(^(\d+)\t\d+\.\d{6}\t-?\d+\.\d{6}\t\d+\.\d{6}$)");
    std::smatch m;
    ASSERT_TRUE(std::regex_match(line, m, kLine)) << line;
    EXPECT_EQ(std::stoi(m[1]), count++);
  }
  EXPECT_EQ(count, 3);
  ASSERT_EQ(invoke({"embed", "-c", cfg}).status, 0);
  const std::string header = testing::read_file(dir / "out" / "embeddings.txt").substr(0, 5);
  EXPECT_EQ(header, "60 8\n");
  const Outcome p = invoke({"probe", "-c", cfg});
  ASSERT_EQ(p.status, 0) << p.err;
  EXPECT_EQ(p.out.rfind("metric=accuracy mean=", 0), 0u);
  EXPECT_NE(p.out.find("runs=2"), std::string::npos);
  const std::string manifest = testing::read_file(dir / "out" / "probe.manifest");
  EXPECT_NE(manifest.find("fnv1a64="), std::string::npos);
  EXPECT_NE(manifest.find("probe_runs = 2"), std::string::npos);
}

TEST(Cli, ManifestRepeatsRunBitExactly) {
  testing::TempDir dir;
  const std::string cfg = (dir / "c.cfg").string();
  testing::write_file(dir / "c.cfg", base_config(dir));
  ASSERT_EQ(invoke({"gen-synth", "-c", cfg}).status, 0);
  ASSERT_EQ(invoke({"train", "-c", cfg}).status, 0);
  const std::string first = testing::read_file(dir / "out" / "model.ckpt");
  std::filesystem::copy_file(dir / "out" / "train.manifest", dir / "again.cfg");
  ASSERT_EQ(invoke({"train", "-c", (dir / "again.cfg").string()}).status, 0);
  EXPECT_EQ(testing::read_file(dir / "out" / "model.ckpt"), first);
}

TEST(Cli, SelfcheckPasses) {
  testing::TempDir dir;
  const Outcome o = invoke({"selfcheck", "--set", "output_dir=" + (dir / "o").string()});
  EXPECT_EQ(o.status, 0) << o.out;
  EXPECT_NE(o.out.find("gradient_check/three_layer_residual"), std::string::npos);
  EXPECT_NE(o.out.find("loss_oracle/identical"), std::string::npos);
  EXPECT_EQ(o.out.find("FAIL"), std::string::npos) << o.out;
}

}  // namespace
}  // namespace twoview
