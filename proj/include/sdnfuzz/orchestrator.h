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


// Campaign driver: fuzz, learn, plan, repeat. Also replay of a learned model
// as a test generator and side-by-side comparison of fuzzing modes.

#ifndef SDNFUZZ_ORCHESTRATOR_H_
#define SDNFUZZ_ORCHESTRATOR_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdnfuzz/codec.h"
#include "sdnfuzz/dataset.h"
#include "sdnfuzz/fuzzer.h"
#include "sdnfuzz/learner.h"
#include "sdnfuzz/planner.h"
#include "sdnfuzz/proxy.h"
#include "sdnfuzz/sut.h"

namespace sdnfuzz {

enum class CampaignMode { kGuided, kRandom, kSchemaRandom };
std::string_view CampaignModeName(CampaignMode mode);
// Throws Error{kInvalidConfig}.
CampaignMode ParseCampaignMode(std::string_view text);

struct CampaignConfig {
  CampaignMode mode = CampaignMode::kGuided;
  std::string message_type = "packet_in";
  std::size_t n_per_iteration = 200;
  // nullopt means 1/|F|.
  std::optional<double> mutation_rate;
  int max_iterations = 20;
  double wall_clock_budget_s = 600.0;
  std::uint64_t seed = 1;
  FailureOracle oracle = DefaultOracle();
  // Empty: nothing is written.
  std::filesystem::path output_dir;
  int workers = 4;
  int max_retries = 3;
  StopPolicy stop;
  LearnerParams learner;

  // Throws Error{kInvalidConfig}.
  void Validate(const SchemaRegistry& registry) const;
};

struct IterationRecord {
  int index = 0;
  std::size_t samples_added = 0;
  std::size_t presence = 0;  // accumulated
  std::size_t absence = 0;
  std::size_t minority = 0;
  std::size_t majority = 0;
  std::size_t failure_count = 0;  // presence labels added this iteration
  std::size_t guided_runs = 0;
  std::size_t discarded_runs = 0;
  Metrics metrics;
  std::size_t rule_count = 0;
  std::string rules_file;
  IterationPlan plan;
  std::vector<std::string> events;
};

struct CampaignReport {
  CampaignConfig config;
  std::vector<IterationRecord> iterations;
  std::size_t total_failures = 0;
  std::string stop_reason;
  RuleSet final_rules;
  LabeledDataset dataset;

  std::string ToJson() const;
};

// Bundles the mock controller and one proxy per worker, and runs fuzzed
// sessions through them.
class SutHarness {
 public:
  SutHarness(const SchemaRegistry& registry, const FailureOracle& oracle, int workers);
  ~SutHarness();

  struct RunResult {
    bool ok = false;
    RunOutcome outcome;
    SessionRecord session;
    std::string error;
  };

  // Runs the procedure once on worker `worker`, passing the intercepted
  // target through `hook`.
  RunResult Run(int worker, std::uint32_t xid, const FuzzHook& hook);
  int workers() const noexcept { return static_cast<int>(proxies_.size()); }

 private:
  const SchemaRegistry& registry_;
  Procedure procedure_;
  std::unique_ptr<MockController> controller_;
  std::vector<std::unique_ptr<Proxy>> proxies_;
};

// Throws Error{kSutUnavailable}, Error{kPersistence}, Error{kInvalidConfig}.
CampaignReport RunCampaign(const CampaignConfig& config, const SchemaRegistry& registry);

struct ReplayResult {
  std::vector<ControlMessage> messages;
  std::vector<int> rule_index;  // per message
  std::vector<std::string> warnings;
};

// Draws `count` messages from the minority rules (rule chosen with probability
// proportional to confidence, fields outside the rule at their defaults) and,
// when out_dir is non-empty, writes them as msg_NNNNNN.bin.
ReplayResult Replay(const RuleSet& rules, const SchemaPtr& schema, std::size_t count,
                    std::uint64_t seed, const std::filesystem::path& out_dir = {});

struct ComparisonEntry {
  CampaignMode mode;
  std::size_t failures = 0;
  std::size_t samples = 0;
  Metrics final_metrics;
};

struct ComparisonReport {
  std::vector<ComparisonEntry> entries;
  std::string ToJson() const;
};

// Runs `base` once per mode with everything else shared; each mode writes to
// <output_dir>/<mode> when output_dir is set.
ComparisonReport Compare(const CampaignConfig& base,
                         const std::vector<CampaignMode>& modes,
                         const SchemaRegistry& registry);

// Default output directory: $SDNFUZZ_OUT, else ./sdnfuzz-out.
std::filesystem::path DefaultOutputDir();

}  // namespace sdnfuzz

#endif  // SDNFUZZ_ORCHESTRATOR_H_
