// Copyright 2026 The sdnfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "sdnfuzz/orchestrator.h"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sdnfuzz/error.h"
#include "test_support.h"

namespace sdnfuzz {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class OrchestratorTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("sdnfuzz_orch_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  CampaignConfig Small(CampaignMode mode, const char* sub) {
    CampaignConfig c;
    c.mode = mode;
    c.n_per_iteration = 100;
    c.max_iterations = 5;
    c.seed = 11;
    c.oracle.noise_rate = 0.02;
    c.oracle.seed = 7;
    c.stop.window = 0;
    c.output_dir = root_ / sub;
    return c;
  }

  SchemaRegistry reg_ = testing::ShippedRegistry();
  fs::path root_;
};

TEST_F(OrchestratorTest, DatasetGrowsByNPerIteration) {
  const auto cfg = Small(CampaignMode::kGuided, "g");
  const auto report = RunCampaign(cfg, reg_);
  ASSERT_EQ(report.iterations.size(), 5u);
  EXPECT_EQ(report.stop_reason, "max_iterations");
  std::size_t rows = 0, failures = 0;
  for (const auto& it : report.iterations) {
    EXPECT_EQ(it.discarded_runs, 0u);
    EXPECT_EQ(it.samples_added, cfg.n_per_iteration);
    rows += it.samples_added;
    failures += it.failure_count;
    EXPECT_EQ(it.presence + it.absence, rows);
    EXPECT_EQ(it.minority + it.majority, rows);
    EXPECT_LE(it.minority, it.majority);
    EXPECT_TRUE(fs::exists(cfg.output_dir / it.rules_file));
  }
  EXPECT_EQ(report.total_failures, failures);
  EXPECT_EQ(report.dataset.size(), 5 * cfg.n_per_iteration);
  EXPECT_EQ(report.dataset.count(Label::kPresence), failures);

  const auto csv = LabeledDataset::ReadCsv(cfg.output_dir / "dataset.csv");
  EXPECT_EQ(csv.size(), 5 * cfg.n_per_iteration);
  EXPECT_EQ(csv.ToCsv(), report.dataset.ToCsv());
  EXPECT_EQ(RuleSet::ReadFile(cfg.output_dir / "rules.txt"), report.final_rules);

  const auto j = nlohmann::json::parse(Slurp(cfg.output_dir / "report.json"));
  EXPECT_EQ(j["iterations"].size(), 5u);
  EXPECT_EQ(j["summary"]["total_failures"].get<std::size_t>(), failures);

  // Iteration 1 is pure random fuzzing; later ones follow the plan.
  EXPECT_EQ(report.iterations[0].guided_runs, 0u);
  // With this seed the last iteration is guided.
  EXPECT_EQ(report.iterations.back().guided_runs, cfg.n_per_iteration);
  for (std::size_t i = 1; i < report.iterations.size(); ++i) {
    const auto& prev = report.iterations[i - 1].plan;
    if (prev.initial_fallback) {
      EXPECT_EQ(report.iterations[i].guided_runs, 0u);
    } else {
      EXPECT_EQ(report.iterations[i].guided_runs, cfg.n_per_iteration);
    }
  }
}

TEST_F(OrchestratorTest, MetricsRecomputeFromDatasetPrefix) {
  const auto cfg = Small(CampaignMode::kGuided, "m");
  const auto report = RunCampaign(cfg, reg_);
  const auto csv = LabeledDataset::ReadCsv(cfg.output_dir / "dataset.csv");
  const auto j = nlohmann::json::parse(Slurp(cfg.output_dir / "report.json"));
  std::size_t rows = 0;
  for (std::size_t i = 0; i < report.iterations.size(); ++i) {
    rows += report.iterations[i].samples_added;
    LearnerParams lp = cfg.learner;
    lp.seed = cfg.seed;
    const auto m = Progress(csv.Prefix(rows), lp);
    const auto& jm = j["iterations"][i]["metrics"];
    EXPECT_NEAR(jm["precision"].get<double>(), m.precision, 1e-9);
    EXPECT_NEAR(jm["recall"].get<double>(), m.recall, 1e-9);
    const auto rules = RuleSet::ReadFile(cfg.output_dir / report.iterations[i].rules_file);
    EXPECT_EQ(rules, Learn(csv.Prefix(rows), lp));
  }
}

TEST_F(OrchestratorTest, RandomModeNeverUsesRules) {
  const auto cfg = Small(CampaignMode::kRandom, "r");
  const auto report = RunCampaign(cfg, reg_);
  for (const auto& it : report.iterations) EXPECT_EQ(it.guided_runs, 0u);
  std::ifstream in(cfg.output_dir / "actions.jsonl");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    const auto a = nlohmann::json::parse(line);
    EXPECT_EQ(a["mode"], "initial");
    EXPECT_FALSE(a.contains("rule"));
    ++lines;
  }
  EXPECT_EQ(lines, report.dataset.size());
}

TEST_F(OrchestratorTest, SchemaRandomKeepsHeader) {
  const auto cfg = Small(CampaignMode::kSchemaRandom, "s");
  const auto report = RunCampaign(cfg, reg_);
  const auto& d = report.dataset;
  const auto schema = reg_.require("packet_in");
  const auto base = ControlMessage::FromDefaults(schema);
  for (const char* f : {"version", "type", "length"}) {
    const auto col = d.column(schema->index_of(f));
    for (auto v : col) ASSERT_EQ(v, base.value(f)) << f;
  }
}

TEST_F(OrchestratorTest, IdenticalSeedsGiveIdenticalArtifacts) {
  const auto a = Small(CampaignMode::kGuided, "a");
  auto b = a;
  b.output_dir = root_ / "b";
  b.workers = 2;  // scheduling must not matter
  RunCampaign(a, reg_);
  RunCampaign(b, reg_);
  EXPECT_EQ(Slurp(a.output_dir / "dataset.csv"), Slurp(b.output_dir / "dataset.csv"));
  EXPECT_EQ(Slurp(a.output_dir / "rules.txt"), Slurp(b.output_dir / "rules.txt"));
  EXPECT_EQ(Slurp(a.output_dir / "actions.jsonl"), Slurp(b.output_dir / "actions.jsonl"));
  // Reports differ only in the worker count recorded in the config.
  auto ja = nlohmann::json::parse(Slurp(a.output_dir / "report.json"));
  auto jb = nlohmann::json::parse(Slurp(b.output_dir / "report.json"));
  ja["config"].erase("workers");
  jb["config"].erase("workers");
  EXPECT_EQ(ja, jb);
}

TEST_F(OrchestratorTest, CompareIsDeterministic) {
  auto base = Small(CampaignMode::kGuided, "c1");
  base.max_iterations = 3;
  const std::vector<CampaignMode> modes = {CampaignMode::kGuided, CampaignMode::kRandom};
  const auto r1 = Compare(base, modes, reg_);
  base.output_dir = root_ / "c2";
  const auto r2 = Compare(base, modes, reg_);
  EXPECT_EQ(r1.ToJson(), r2.ToJson());
  ASSERT_EQ(r1.entries.size(), 2u);
  EXPECT_EQ(r1.entries[1].mode, CampaignMode::kRandom);
  EXPECT_TRUE(fs::exists(root_ / "c1" / "comparison.json"));
  EXPECT_TRUE(fs::exists(root_ / "c1" / "random" / "dataset.csv"));
  EXPECT_THROW(Compare(base, {CampaignMode::kGuided}, reg_), Error);
}

TEST_F(OrchestratorTest, ReplayFromPlantedModel) {
  const auto schema = reg_.require("packet_in");
  DecisionRule r{DefaultOracle().predicate, Label::kPresence};
  r.confidence = 0.97;
  DecisionRule weak{ParseCondition("ip_ttl <= 3"), Label::kPresence};
  weak.confidence = 0.5;
  DecisionRule def{Condition{}, Label::kAbsence};
  RuleSet rules({r, weak}, def);

  EXPECT_TRUE(Replay(rules, schema, 0, 1, root_ / "empty").messages.empty());

  const auto out = Replay(rules, schema, 300, 2, root_ / "corpus");
  ASSERT_EQ(out.messages.size(), 300u);
  std::size_t n_strong = 0;
  for (std::size_t k = 0; k < out.messages.size(); ++k) {
    const auto map = out.messages[k].to_map();
    const FieldMap m(map.begin(), map.end());
    EXPECT_TRUE(Evaluate(rules.minority_rules()[out.rule_index[k]].condition, m));
    EXPECT_NE(rules.FiringRule(m), -1);
    n_strong += out.rule_index[k] == 0;
  }
  // Confidence weighting: 0.97 / (0.97 + 0.5) of the draws.
  EXPECT_NEAR(n_strong / 300.0, 0.97 / 1.47, 0.08);
  EXPECT_TRUE(fs::exists(root_ / "corpus" / "msg_000299.bin"));
  const auto bytes = Slurp(root_ / "corpus" / "msg_000000.bin");
  EXPECT_EQ(bytes.size(), schema->total_bytes());

  // Against the noise-free SUT, the planted rule's messages all fail.
  SutHarness harness(reg_, DefaultOracle(), 1);
  std::size_t presence = 0, runs = 0;
  for (std::size_t k = 0; k < out.messages.size(); ++k) {
    if (out.rule_index[k] != 0) continue;
    const Bytes enc = Encode(out.messages[k]);
    const auto res = harness.Run(0, static_cast<std::uint32_t>(k + 1),
                                 [&](const ControlMessage&) { return enc; });
    ASSERT_TRUE(res.ok) << res.error;
    ++runs;
    presence += res.outcome.label == Label::kPresence;
  }
  EXPECT_GE(static_cast<double>(presence) / runs, 0.95);
}

TEST_F(OrchestratorTest, ReplaySkipsUnsatisfiableRules) {
  const auto schema = reg_.require("packet_in");
  DecisionRule bad{ParseCondition("version > 5 AND version < 2"), Label::kPresence};
  bad.confidence = 0.9;
  DecisionRule good{ParseCondition("ip_ttl = 3"), Label::kPresence};
  good.confidence = 0.1;
  const auto out = Replay(RuleSet({bad, good}, DecisionRule{Condition{}, Label::kAbsence}),
                          schema, 20, 3);
  EXPECT_EQ(out.warnings.size(), 1u);
  for (int i : out.rule_index) EXPECT_EQ(i, 1);
}

TEST_F(OrchestratorTest, ConfigValidation) {
  CampaignConfig c;
  c.n_per_iteration = 9;
  EXPECT_THROW(c.Validate(reg_), Error);
  c = CampaignConfig{};
  c.message_type = "hello";
  EXPECT_THROW(c.Validate(reg_), Error);  // oracle still targets packet_in
  c = CampaignConfig{};
  c.message_type = "nope";
  EXPECT_THROW(c.Validate(reg_), Error);
  EXPECT_NO_THROW(CampaignConfig{}.Validate(reg_));
  EXPECT_EQ(ParseCampaignMode("schema_random"), CampaignMode::kSchemaRandom);
  EXPECT_THROW(ParseCampaignMode("smart"), Error);
}

}  // namespace
}  // namespace sdnfuzz
