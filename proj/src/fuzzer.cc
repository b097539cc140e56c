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


#include "sdnfuzz/fuzzer.h"

#include <algorithm>

#include "sdnfuzz/error.h"
#include "sdnfuzz/sampler.h"

namespace sdnfuzz {

std::string_view FuzzModeName(FuzzMode mode) {
  return mode == FuzzMode::kGuided ? "guided" : "initial";
}

std::vector<std::size_t> SelectRandomFields(std::span<const std::size_t> candidates,
                                            Rng& rng) {
  if (candidates.empty()) return {};
  std::vector<std::size_t> out;
  while (out.empty()) {
    for (std::size_t c : candidates)
      if (rng() >> 63) out.push_back(c);
  }
  return out;
}

void ReplaceWithValid(ControlMessage& msg, std::span<const std::size_t> fields,
                      Rng& rng) {
  for (std::size_t i : fields) {
    const auto& f = msg.schema().field(i);
    msg.set(i, UniformU64(rng, f.domain_lo, f.domain_hi));
  }
}

namespace {

FuzzAction RandomOver(const ControlMessage& msg,
                      std::span<const std::size_t> candidates, Rng& rng) {
  FuzzAction action;
  action.before = msg;
  action.after = msg;
  const auto chosen = SelectRandomFields(candidates, rng);
  ReplaceWithValid(action.after, chosen, rng);
  for (std::size_t i : chosen)
    action.replaced_fields.push_back(msg.schema().field(i).name);
  return action;
}

}  // namespace

FuzzAction InitialFuzz(const ControlMessage& msg, Rng& rng) {
  std::vector<std::size_t> all(msg.schema().field_count());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return RandomOver(msg, all, rng);
}

bool IsFramingField(std::string_view name) {
  return name == "version" || name == "type" || name == "length";
}

FuzzAction SchemaRandomFuzz(const ControlMessage& msg, Rng& rng) {
  std::vector<std::size_t> body;
  for (std::size_t i = 0; i < msg.schema().field_count(); ++i)
    if (!IsFramingField(msg.schema().field(i).name)) body.push_back(i);
  return RandomOver(msg, body, rng);
}

std::size_t SelectEntry(const BudgetDistribution& budget, Rng& rng) {
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < budget.entries.size(); ++i)
    if (budget.entries[i].quota > 0) live.push_back(i);
  if (live.empty()) throw Error(Errc::kInvalidConfig, "budget exhausted");
  return live[UniformU64(rng, 0, live.size() - 1)];
}

void ConsumeEntry(BudgetDistribution& budget, std::size_t pos) {
  auto& e = budget.entries.at(pos);
  if (e.quota > 0) --e.quota;
  if (e.quota == 0) budget.entries.erase(budget.entries.begin() + static_cast<long>(pos));
}

std::vector<std::size_t> RuleFields(const RuleSet& rules, int rule_index,
                                    const MessageSchema& schema) {
  std::vector<std::size_t> out;
  auto add = [&](const Condition& c) {
    for (const auto& name : c.fields()) {
      const auto idx = schema.index_of(name);
      if (std::find(out.begin(), out.end(), idx) == out.end()) out.push_back(idx);
    }
  };
  if (rule_index >= 0) {
    add(rules.minority_rules().at(static_cast<std::size_t>(rule_index)).condition);
  } else {
    for (const auto& r : rules.minority_rules()) add(r.condition);
  }
  std::sort(out.begin(), out.end());
  return out;
}

FuzzAction ApplyRule(const ControlMessage& msg, const RuleSet& rules,
                     int rule_index, double mu, Rng& rng) {
  const auto& schema = msg.schema();
  FuzzAction action;
  action.mode = FuzzMode::kGuided;
  action.rule_index = rule_index;
  action.before = msg;
  action.after = msg;

  Assignment assignment;
  if (rule_index >= 0) {
    const auto& rule = rules.minority_rules().at(static_cast<std::size_t>(rule_index));
    action.applied_rule = rule;
    assignment = Solve(rule.condition, schema, rng);
  } else {
    action.applied_rule = rules.default_rule();
    std::vector<Condition> conds;
    for (const auto& r : rules.minority_rules()) conds.push_back(r.condition);
    assignment = SolveNoneOf(conds, schema, rng);
  }
  for (const auto& [idx, value] : assignment) {
    action.after.set(idx, value);
    action.replaced_fields.push_back(schema.field(idx).name);
  }

  const auto fixed = RuleFields(rules, rule_index, schema);
  for (std::size_t i = 0; i < schema.field_count(); ++i) {
    if (std::binary_search(fixed.begin(), fixed.end(), i)) continue;
    if (!(UniformUnit(rng) < mu)) continue;
    action.after.set(i, UniformU64(rng, 0, schema.field(i).raw_max()));
    action.mutated_fields.push_back(schema.field(i).name);
  }
  return action;
}

FuzzAction GuidedFuzz(const ControlMessage& msg, const RuleSet& rules,
                      BudgetDistribution& budget, double mu, Rng& rng) {
  const std::size_t pos = SelectEntry(budget, rng);
  const int rule_index = budget.entries[pos].rule_index;
  try {
    FuzzAction action = ApplyRule(msg, rules, rule_index, mu, rng);
    ConsumeEntry(budget, pos);
    return action;
  } catch (const Error& e) {
    if (e.code() == Errc::kUnsatisfiable)
      budget.entries.erase(budget.entries.begin() + static_cast<long>(pos));
    throw;
  }
}

}  // namespace sdnfuzz
