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


// sdnfuzz: campaign / compare / replay / schemas validate.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sdnfuzz/codec.h"
#include "sdnfuzz/error.h"
#include "sdnfuzz/learner.h"
#include "sdnfuzz/orchestrator.h"
#include "sdnfuzz/sut.h"

namespace {

using namespace sdnfuzz;

struct CampaignFlags {
  std::string mode = "guided";
  std::string message_type = "packet_in";
  std::size_t n = 200;
  std::string mutation_rate = "auto";
  int iterations = 20;
  double budget_seconds = 600.0;
  std::uint64_t seed = 1;
  std::string oracle;
  std::string out;
  std::string schemas;
  int workers = 4;
  std::size_t plateau_window = 3;
  double epsilon = 0.01;
};

void AddCampaignFlags(CLI::App* cmd, CampaignFlags& f, bool with_mode) {
  if (with_mode)
    cmd->add_option("--mode", f.mode, "guided | random | schema_random")
        ->check(CLI::IsMember({"guided", "random", "schema_random"}));
  cmd->add_option("--message-type", f.message_type, "target message type");
  cmd->add_option("--n", f.n, "messages fuzzed per iteration")->check(CLI::Range(10, 1 << 24));
  cmd->add_option("--mutation-rate", f.mutation_rate, "probability or 'auto' (1/|F|)");
  cmd->add_option("--iterations", f.iterations, "maximum iterations");
  cmd->add_option("--budget-seconds", f.budget_seconds, "wall-clock budget");
  cmd->add_option("--seed", f.seed, "campaign seed");
  cmd->add_option("--oracle", f.oracle, "oracle config JSON (default: built-in)");
  cmd->add_option("--out", f.out, "output directory (default: $SDNFUZZ_OUT or ./sdnfuzz-out)");
  cmd->add_option("--schemas", f.schemas, "schema definition file");
  cmd->add_option("--workers", f.workers, "parallel run workers")->check(CLI::Range(1, 64));
  cmd->add_option("--plateau-window", f.plateau_window, "plateau window w (0 disables)");
  cmd->add_option("--epsilon", f.epsilon, "plateau threshold");
}

SchemaRegistry LoadRegistry(const std::string& path) {
  return LoadSchemasFile(path.empty() ? DefaultSchemaPath() : std::filesystem::path(path));
}

CampaignConfig ToConfig(const CampaignFlags& f) {
  CampaignConfig c;
  c.mode = ParseCampaignMode(f.mode);
  c.message_type = f.message_type;
  c.n_per_iteration = f.n;
  if (f.mutation_rate != "auto") {
    try {
      c.mutation_rate = std::stod(f.mutation_rate);
    } catch (const std::exception&) {
      throw Error(Errc::kInvalidConfig, "bad --mutation-rate '" + f.mutation_rate + "'");
    }
  }
  c.max_iterations = f.iterations;
  c.wall_clock_budget_s = f.budget_seconds;
  c.seed = f.seed;
  if (!f.oracle.empty()) {
    c.oracle = FailureOracle::ReadFile(f.oracle);
  } else {
    c.oracle = DefaultOracle();
    c.oracle.message_type = f.message_type;
  }
  c.output_dir = f.out.empty() ? DefaultOutputDir() : std::filesystem::path(f.out);
  c.workers = f.workers;
  c.stop.window = f.plateau_window;
  c.stop.epsilon = f.epsilon;
  return c;
}

void PrintSummary(const CampaignReport& r) {
  for (const auto& it : r.iterations)
    std::cout << "iteration " << it.index << ": +" << it.samples_added << " samples, "
              << it.failure_count << " failures, presence " << it.presence << "/"
              << (it.presence + it.absence) << ", rules " << it.rule_count
              << ", precision " << it.metrics.precision << ", recall " << it.metrics.recall
              << "\n";
  std::cout << "stop: " << r.stop_reason << ", total failures " << r.total_failures << "\n"
            << r.final_rules.ToText();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ML-guided fuzzing of SDN control messages"};
  app.require_subcommand(1);

  CampaignFlags campaign_flags;
  auto* campaign = app.add_subcommand("campaign", "run one fuzz/learn/plan campaign");
  AddCampaignFlags(campaign, campaign_flags, true);

  CampaignFlags compare_flags;
  std::vector<std::string> compare_modes{"guided", "random"};
  auto* compare = app.add_subcommand("compare", "run several modes on one budget");
  AddCampaignFlags(compare, compare_flags, false);
  compare->add_option("--modes", compare_modes, "modes to compare")->delimiter(',');

  std::string replay_rules, replay_type = "packet_in", replay_out, replay_schemas;
  std::size_t replay_count = 100;
  std::uint64_t replay_seed = 1;
  auto* replay = app.add_subcommand("replay", "generate messages from a rule file");
  replay->add_option("--rules", replay_rules, "rule file")->required();
  replay->add_option("--message-type", replay_type, "message type");
  replay->add_option("--count", replay_count, "messages to generate");
  replay->add_option("--seed", replay_seed, "seed");
  replay->add_option("--out", replay_out, "corpus directory")->required();
  replay->add_option("--schemas", replay_schemas, "schema definition file");

  auto* schemas = app.add_subcommand("schemas", "schema utilities");
  schemas->require_subcommand(1);
  std::string validate_file;
  auto* validate = schemas->add_subcommand("validate", "load and check a definition file");
  validate->add_option("file", validate_file, "definition file (default: shipped)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*campaign) {
      const auto registry = LoadRegistry(campaign_flags.schemas);
      const auto report = RunCampaign(ToConfig(campaign_flags), registry);
      PrintSummary(report);
    } else if (*compare) {
      const auto registry = LoadRegistry(compare_flags.schemas);
      std::vector<CampaignMode> modes;
      for (const auto& m : compare_modes) modes.push_back(ParseCampaignMode(m));
      const auto report = Compare(ToConfig(compare_flags), modes, registry);
      std::cout << report.ToJson();
    } else if (*replay) {
      const auto registry = LoadRegistry(replay_schemas);
      const auto rules = RuleSet::ReadFile(replay_rules);
      const auto result =
          Replay(rules, registry.require(replay_type), replay_count, replay_seed, replay_out);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << "wrote " << result.messages.size() << " messages to " << replay_out << "\n";
    } else if (*validate) {
      const auto path = validate_file.empty() ? DefaultSchemaPath()
                                              : std::filesystem::path(validate_file);
      const auto registry = LoadSchemasFile(path);
      for (const auto& s : registry.all())
        std::cout << s->type_name() << ": type " << int{s->header_type_code()} << ", "
                  << s->total_bytes() << " bytes, " << s->field_count() << " fields\n";
      std::cout << registry.size() << " schemas OK\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
