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

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "sdnfuzz/error.h"
#include "sdnfuzz/rng.h"
#include "sdnfuzz/sampler.h"

namespace sdnfuzz {

using ordered_json = nlohmann::ordered_json;

std::string_view CampaignModeName(CampaignMode mode) {
  switch (mode) {
    case CampaignMode::kGuided: return "guided";
    case CampaignMode::kRandom: return "random";
    case CampaignMode::kSchemaRandom: return "schema_random";
  }
  return "guided";
}

CampaignMode ParseCampaignMode(std::string_view text) {
  if (text == "guided") return CampaignMode::kGuided;
  if (text == "random") return CampaignMode::kRandom;
  if (text == "schema_random") return CampaignMode::kSchemaRandom;
  throw Error(Errc::kInvalidConfig, "unknown mode '" + std::string(text) + "'");
}

void CampaignConfig::Validate(const SchemaRegistry& registry) const {
  if (n_per_iteration < 10)
    throw Error(Errc::kInvalidConfig, "n_per_iteration must be at least 10");
  if (!registry.by_name(message_type))
    throw Error(Errc::kInvalidConfig, "unknown message type '" + message_type + "'");
  if (oracle.message_type != message_type)
    throw Error(Errc::kInvalidConfig, "oracle watches " + oracle.message_type +
                                          " but the campaign fuzzes " + message_type);
  if (mutation_rate && !(*mutation_rate >= 0.0 && *mutation_rate <= 1.0))
    throw Error(Errc::kInvalidConfig, "mutation rate must lie in [0, 1]");
  if (max_iterations < 1) throw Error(Errc::kInvalidConfig, "need at least one iteration");
  if (workers < 1) throw Error(Errc::kInvalidConfig, "need at least one worker");
  oracle.Validate(registry);
}

std::filesystem::path DefaultOutputDir() {
  if (const char* env = std::getenv("SDNFUZZ_OUT"); env && *env) return env;
  return "sdnfuzz-out";
}

// ---------------------------------------------------------------------------
// SUT harness

SutHarness::SutHarness(const SchemaRegistry& registry, const FailureOracle& oracle,
                       int workers)
    : registry_(registry), procedure_(ProcedureFor(oracle.message_type)) {
  try {
    controller_ = std::make_unique<MockController>(registry, oracle, workers);
  } catch (const Error& e) {
    if (e.code() == Errc::kInvalidConfig) throw;
    throw Error(Errc::kSutUnavailable, e.what());
  }
  for (int w = 0; w < workers; ++w) {
    InterceptConfig ic;
    ic.upstream = controller_->endpoint();
    ic.target_type = oracle.message_type;
    proxies_.push_back(std::make_unique<Proxy>(ic, registry));
  }
}

SutHarness::~SutHarness() {
  for (auto& p : proxies_) p->Shutdown();
  controller_->Stop();
}

SutHarness::RunResult SutHarness::Run(int worker, std::uint32_t xid, const FuzzHook& hook) {
  Proxy& proxy = *proxies_.at(static_cast<std::size_t>(worker));
  RunResult r;
  std::thread relay([&] { r.session = proxy.ServeOne(hook); });
  try {
    r.outcome = RunProcedure({"127.0.0.1", proxy.port()}, procedure_, registry_, xid);
    r.ok = true;
  } catch (const Error& e) {
    r.error = e.what();
  }
  relay.join();
  if (r.ok && !r.session.ok()) {
    r.ok = false;
    r.error = r.session.error_detail;
  }
  if (r.ok && !r.session.target_seen) {
    r.ok = false;
    r.error = "target message not intercepted";
  }
  return r;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

ordered_json MetricsJson(const Metrics& m) {
  ordered_json j;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["tp"] = m.tp;
  j["fp"] = m.fp;
  j["fn"] = m.fn;
  j["tn"] = m.tn;
  return j;
}

ordered_json PlanJson(const IterationPlan& p) {
  ordered_json j;
  j["minor"] = p.minor;
  j["major"] = p.major;
  j["next_minor"] = p.next_minor;
  j["next_major"] = p.next_major;
  j["initial_fallback"] = p.initial_fallback;
  ordered_json budget = ordered_json::array();
  for (const auto& e : p.budget.entries) {
    ordered_json b;
    b["rule"] = e.rule_index;
    b["quota"] = e.quota;
    budget.push_back(b);
  }
  j["budget"] = budget;
  j["equal_split_groups"] = p.equal_split_groups;
  return j;
}

ordered_json ConfigJson(const CampaignConfig& c, std::size_t field_count) {
  ordered_json j;
  j["mode"] = CampaignModeName(c.mode);
  j["message_type"] = c.message_type;
  j["n_per_iteration"] = c.n_per_iteration;
  j["mutation_rate"] = c.mutation_rate.value_or(1.0 / static_cast<double>(field_count));
  j["mutation_rate_auto"] = !c.mutation_rate.has_value();
  j["max_iterations"] = c.max_iterations;
  j["wall_clock_budget_s"] = c.wall_clock_budget_s;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["max_retries"] = c.max_retries;
  j["oracle"] = ordered_json::parse(c.oracle.ToJson());
  j["stop"] = {{"epsilon", c.stop.epsilon}, {"window", c.stop.window}};
  return j;
}

ordered_json ValuesJson(const ControlMessage& m) {
  ordered_json j;
  for (std::size_t i = 0; i < m.schema().field_count(); ++i)
    j[m.schema().field(i).name] = m.value(i);
  return j;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(Errc::kPersistence, "cannot write " + path.string());
}

}  // namespace

std::string CampaignReport::ToJson() const {
  const std::size_t fields = dataset.field_count();
  ordered_json j;
  j["config"] = ConfigJson(config, fields ? fields : 1);
  ordered_json its = ordered_json::array();
  for (const auto& r : iterations) {
    ordered_json it;
    it["index"] = r.index;
    it["samples_added"] = r.samples_added;
    it["presence"] = r.presence;
    it["absence"] = r.absence;
    it["minority"] = r.minority;
    it["majority"] = r.majority;
    it["failure_count"] = r.failure_count;
    it["guided_runs"] = r.guided_runs;
    it["discarded_runs"] = r.discarded_runs;
    it["metrics"] = MetricsJson(r.metrics);
    it["rule_count"] = r.rule_count;
    it["rules_file"] = r.rules_file;
    it["plan"] = PlanJson(r.plan);
    it["events"] = r.events;
    its.push_back(it);
  }
  j["iterations"] = its;
  ordered_json summary;
  summary["iterations"] = iterations.size();
  summary["samples"] = dataset.size();
  summary["total_failures"] = total_failures;
  summary["presence"] = dataset.count(Label::kPresence);
  summary["absence"] = dataset.count(Label::kAbsence);
  summary["stop_reason"] = stop_reason;
  if (!iterations.empty()) summary["final_metrics"] = MetricsJson(iterations.back().metrics);
  summary["final_rules"] = final_rules.ToText();
  j["summary"] = summary;
  return j.dump(2) + "\n";
}

std::string ComparisonReport::ToJson() const {
  ordered_json j = ordered_json::array();
  for (const auto& e : entries) {
    ordered_json x;
    x["mode"] = CampaignModeName(e.mode);
    x["failures"] = e.failures;
    x["samples"] = e.samples;
    x["final_metrics"] = MetricsJson(e.final_metrics);
    j.push_back(x);
  }
  ordered_json out;
  out["modes"] = j;
  return out.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Campaign

namespace {

struct RunSpec {
  int rule_index = kNoRule;  // kNoRule: random fuzzing
};

struct RunSlot {
  bool ok = false;
  FuzzAction action;
  RunOutcome outcome;
  int attempts = 0;
  std::vector<std::string> session_lines;
  std::string error;
};

// Rule-entry draws happen serially here so that worker scheduling cannot
// change which rule a run exploits.
std::vector<RunSpec> DrawSpecs(const CampaignConfig& cfg, int iteration,
                               const RuleSet& rules, IterationPlan& plan,
                               const SchemaPtr& schema, IterationRecord& rec) {
  std::vector<RunSpec> specs(cfg.n_per_iteration);
  if (cfg.mode != CampaignMode::kGuided || iteration == 1 || plan.initial_fallback)
    return specs;

  BudgetDistribution budget = plan.budget;
  // Drop rules the sampler cannot satisfy before any run is scheduled.
  Rng probe = MakeRng(cfg.seed, {3, static_cast<std::uint64_t>(iteration)});
  for (std::size_t i = 0; i < budget.entries.size();) {
    const int r = budget.entries[i].rule_index;
    try {
      if (r >= 0) {
        Solve(rules.minority_rules()[static_cast<std::size_t>(r)].condition, *schema, probe);
      } else {
        std::vector<Condition> conds;
        for (const auto& m : rules.minority_rules()) conds.push_back(m.condition);
        SolveNoneOf(conds, *schema, probe);
      }
      ++i;
    } catch (const Error& e) {
      if (e.code() != Errc::kUnsatisfiable) throw;
      rec.events.push_back("unsatisfiable rule " + std::to_string(r) + " dropped");
      budget.entries.erase(budget.entries.begin() + static_cast<long>(i));
    }
  }
  Rng select = MakeRng(cfg.seed, {1, static_cast<std::uint64_t>(iteration)});
  for (auto& s : specs) {
    if (budget.empty()) break;
    const std::size_t pos = SelectEntry(budget, select);
    s.rule_index = budget.entries[pos].rule_index;
    ConsumeEntry(budget, pos);
  }
  return specs;
}

}  // namespace

CampaignReport RunCampaign(const CampaignConfig& cfg, const SchemaRegistry& registry) {
  cfg.Validate(registry);
  const auto start = std::chrono::steady_clock::now();
  const SchemaPtr schema = registry.require(cfg.message_type);
  const double mu = cfg.mutation_rate.value_or(1.0 / static_cast<double>(schema->field_count()));

  const bool persist = !cfg.output_dir.empty();
  std::ofstream actions_log, sessions_log;
  if (persist) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw Error(Errc::kPersistence, "cannot create " + cfg.output_dir.string());
    actions_log.open(cfg.output_dir / "actions.jsonl", std::ios::binary | std::ios::trunc);
    sessions_log.open(cfg.output_dir / "sessions.log", std::ios::binary | std::ios::trunc);
    if (!actions_log || !sessions_log)
      throw Error(Errc::kPersistence, "cannot open logs in " + cfg.output_dir.string());
  }

  SutHarness harness(registry, cfg.oracle, cfg.workers);

  CampaignReport report;
  report.config = cfg;
  report.dataset = LabeledDataset(schema->field_names());
  RuleSet rules;
  IterationPlan plan;
  std::vector<Metrics> history;

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    IterationRecord rec;
    rec.index = it;
    const auto specs = DrawSpecs(cfg, it, rules, plan, schema, rec);
    const RuleSet exploited = rules;

    std::vector<RunSlot> slots(specs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&](int w) {
      while (true) {
        const std::size_t k = next.fetch_add(1);
        if (k >= specs.size()) return;
        RunSlot& slot = slots[k];
        // A sequential xid would track the iteration number and hand the
        // learner a spurious time feature; draw it per run instead.
        Rng xid_rng = MakeRng(cfg.seed, {5, static_cast<std::uint64_t>(it), k});
        const auto run_id = static_cast<std::uint32_t>(xid_rng());
        for (int attempt = 0; attempt <= cfg.max_retries && !slot.ok; ++attempt) {
          ++slot.attempts;
          // Retries reuse the run's seed, so a retried run fuzzes identically.
          Rng rng = MakeRng(cfg.seed, {2, static_cast<std::uint64_t>(it), k});
          std::optional<FuzzAction> action;
          std::string hook_error;
          FuzzHook hook = [&](const ControlMessage& msg) -> Bytes {
            const int r = specs[k].rule_index;
            try {
              if (r == kNoRule) {
                action = cfg.mode == CampaignMode::kSchemaRandom ? SchemaRandomFuzz(msg, rng)
                                                                 : InitialFuzz(msg, rng);
              } else {
                action = ApplyRule(msg, exploited, r, mu, rng);
              }
            } catch (const Error& e) {
              if (e.code() != Errc::kUnsatisfiable) throw;
              // The default-rule search can give up; fall back to random.
              hook_error = e.what();
              action = InitialFuzz(msg, rng);
            }
            return Encode(action->after);
          };
          auto result = harness.Run(w, run_id, hook);
          std::string line = "iteration=" + std::to_string(it) + " run=" + std::to_string(k) +
                             " attempt=" + std::to_string(attempt) + " " +
                             result.session.ToLogLine();
          if (!hook_error.empty()) line += " fuzz_fallback=\"" + hook_error + "\"";
          slot.session_lines.push_back(line);
          if (result.ok && action) {
            slot.ok = true;
            slot.action = std::move(*action);
            slot.outcome = result.outcome;
          } else {
            slot.error = result.error;
          }
        }
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < harness.workers(); ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();

    for (std::size_t k = 0; k < slots.size(); ++k) {
      const auto& s = slots[k];
      if (persist)
        for (const auto& l : s.session_lines) sessions_log << l << '\n';
      if (!s.ok) {
        ++rec.discarded_runs;
        rec.events.push_back("run " + std::to_string(k) + " discarded after " +
                             std::to_string(s.attempts) + " attempts: " + s.error);
        continue;
      }
      report.dataset.Append(s.action.after.values(), s.outcome.label, it);
      ++rec.samples_added;
      if (s.outcome.label == Label::kPresence) ++rec.failure_count;
      if (s.action.mode == FuzzMode::kGuided) ++rec.guided_runs;
      if (persist) {
        ordered_json a;
        a["iteration"] = it;
        a["run"] = k;
        a["mode"] = FuzzModeName(s.action.mode);
        a["rule_index"] = s.action.rule_index;
        if (s.action.applied_rule)
          a["rule"] = FormatCondition(s.action.applied_rule->condition);
        a["replaced_fields"] = s.action.replaced_fields;
        a["mutated_fields"] = s.action.mutated_fields;
        a["before"] = ValuesJson(s.action.before);
        a["after"] = ValuesJson(s.action.after);
        a["label"] = LabelName(s.outcome.label);
        a["attempts"] = s.attempts;
        actions_log << a.dump() << '\n';
      }
    }
    if (rec.discarded_runs == specs.size() && !specs.empty())
      throw Error(Errc::kSutUnavailable, "every run of iteration " + std::to_string(it) +
                                             " failed: " + slots.front().error);

    const auto& data = report.dataset;
    LearnerParams lp = cfg.learner;
    lp.seed = cfg.seed;
    rules = Learn(data, lp);
    rec.rule_count = rules.minority_rules().size();
    if (data.size() >= 10) {
      try {
        rec.metrics = Progress(data, lp);
      } catch (const Error& e) {
        if (e.code() != Errc::kTooFewSamples) throw;
      }
    }
    plan = Plan(data, rules, cfg.n_per_iteration);
    if (plan.initial_fallback && cfg.mode == CampaignMode::kGuided)
      rec.events.push_back("no minority rules; next iteration uses random fuzzing");
    for (const auto& g : plan.equal_split_groups)
      rec.events.push_back("all " + g + " confidences zero; equal split");
    rec.plan = plan;
    rec.presence = data.count(Label::kPresence);
    rec.absence = data.size() - rec.presence;
    rec.minority = plan.minor;
    rec.majority = plan.major;
    report.total_failures += rec.failure_count;

    if (persist) {
      rec.rules_file = "rules_iter_" + std::to_string(it) + ".txt";
      rules.WriteFile(cfg.output_dir / rec.rules_file);
    }
    report.iterations.push_back(rec);
    report.final_rules = rules;
    if (persist) {
      data.WriteCsv(cfg.output_dir / "dataset.csv");
      rules.WriteFile(cfg.output_dir / "rules.txt");
      WriteText(cfg.output_dir / "report.json", report.ToJson());
      actions_log.flush();
      sessions_log.flush();
    }

    history.push_back(rec.metrics);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto decision = ShouldStop(history, elapsed >= cfg.wall_clock_budget_s, cfg.stop);
    if (decision.stop) {
      report.stop_reason = decision.reason;
      break;
    }
  }
  if (report.stop_reason.empty()) report.stop_reason = "max_iterations";
  if (persist) WriteText(cfg.output_dir / "report.json", report.ToJson());
  return report;
}

// ---------------------------------------------------------------------------
// Replay and comparison

ReplayResult Replay(const RuleSet& rules, const SchemaPtr& schema, std::size_t count,
                    std::uint64_t seed, const std::filesystem::path& out_dir) {
  ReplayResult result;
  Rng rng = MakeRng(seed, {4});
  std::vector<double> weights;
  std::vector<int> usable;
  for (std::size_t i = 0; i < rules.minority_rules().size(); ++i) {
    const auto& r = rules.minority_rules()[i];
    bool sat = true;
    try {
      for (const auto& fs : FeasibleSets(r.condition, *schema))
        if (fs.allowed.empty()) sat = false;
    } catch (const Error& e) {
      sat = false;
      result.warnings.push_back("rule " + std::to_string(i) + ": " + e.what());
      continue;
    }
    if (!sat) {
      result.warnings.push_back("rule " + std::to_string(i) + " is unsatisfiable; skipped");
      continue;
    }
    usable.push_back(static_cast<int>(i));
    weights.push_back(r.confidence);
  }
  if (count > 0 && usable.empty())
    throw Error(Errc::kUnsatisfiable, "no satisfiable minority rule to replay");
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) {
    std::fill(weights.begin(), weights.end(), 1.0);
    total = static_cast<double>(weights.size());
  }

  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(Errc::kPersistence, "cannot create " + out_dir.string());
  }
  for (std::size_t k = 0; k < count; ++k) {
    double u = UniformUnit(rng) * total;
    std::size_t pick = 0;
    while (pick + 1 < weights.size() && u >= weights[pick]) u -= weights[pick++];
    const int ri = usable[pick];
    auto msg = ControlMessage::FromDefaults(schema);
    if (schema->find("xid")) msg.set("xid", static_cast<std::uint64_t>(k + 1));
    for (const auto& [idx, v] :
         Solve(rules.minority_rules()[static_cast<std::size_t>(ri)].condition, *schema, rng))
      msg.set(idx, v);
    if (!out_dir.empty()) {
      char name[32];
      std::snprintf(name, sizeof(name), "msg_%06zu.bin", k);
      const Bytes bytes = Encode(msg);
      std::ofstream out(out_dir / name, std::ios::binary | std::ios::trunc);
      out.write(reinterpret_cast<const char*>(bytes.data()),
                static_cast<std::streamsize>(bytes.size()));
      if (!out) throw Error(Errc::kPersistence, "cannot write " + (out_dir / name).string());
    }
    result.messages.push_back(std::move(msg));
    result.rule_index.push_back(ri);
  }
  return result;
}

ComparisonReport Compare(const CampaignConfig& base, const std::vector<CampaignMode>& modes,
                         const SchemaRegistry& registry) {
  if (modes.size() < 2) throw Error(Errc::kInvalidConfig, "compare needs at least two modes");
  ComparisonReport out;
  for (auto mode : modes) {
    CampaignConfig c = base;
    c.mode = mode;
    if (!base.output_dir.empty()) c.output_dir = base.output_dir / CampaignModeName(mode);
    const auto report = RunCampaign(c, registry);
    ComparisonEntry e;
    e.mode = mode;
    e.failures = report.total_failures;
    e.samples = report.dataset.size();
    if (!report.iterations.empty()) e.final_metrics = report.iterations.back().metrics;
    out.entries.push_back(e);
  }
  if (!base.output_dir.empty()) WriteText(base.output_dir / "comparison.json", out.ToJson());
  return out;
}

}  // namespace sdnfuzz
