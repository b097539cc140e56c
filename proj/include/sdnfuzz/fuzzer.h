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


// Message fuzzing: random field replacement for the first iteration and
// rule-guided generation with uniform mutation afterwards.

#ifndef SDNFUZZ_FUZZER_H_
#define SDNFUZZ_FUZZER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdnfuzz/codec.h"
#include "sdnfuzz/learner.h"
#include "sdnfuzz/planner.h"
#include "sdnfuzz/rng.h"

namespace sdnfuzz {

enum class FuzzMode { kInitial, kGuided };
std::string_view FuzzModeName(FuzzMode mode);

inline constexpr int kNoRule = -2;

struct FuzzAction {
  FuzzMode mode = FuzzMode::kInitial;
  // kNoRule for initial fuzzing, -1 for the default rule, else the index into
  // the minority rules.
  int rule_index = kNoRule;
  std::optional<DecisionRule> applied_rule;
  std::vector<std::string> replaced_fields;
  std::vector<std::string> mutated_fields;
  ControlMessage before;
  ControlMessage after;
};

// Indices drawn from `candidates`, each kept with probability 1/2; redrawn
// until nonempty. Result is in candidate order.
std::vector<std::size_t> SelectRandomFields(std::span<const std::size_t> candidates,
                                            Rng& rng);

// Replaces each listed field by a uniform draw from its declared domain.
void ReplaceWithValid(ControlMessage& msg, std::span<const std::size_t> fields,
                      Rng& rng);

// Random subset of all fields, each replaced by a valid value.
FuzzAction InitialFuzz(const ControlMessage& msg, Rng& rng);

// Header fields that frame the message on the wire.
bool IsFramingField(std::string_view name);

// As InitialFuzz, but never touches version / type / length, so every output
// stays a well-formed message of the same type.
FuzzAction SchemaRandomFuzz(const ControlMessage& msg, Rng& rng);

// Uniform choice among entries with remaining quota. Returns the entry
// position. Throws Error{kInvalidConfig} when the budget is exhausted.
std::size_t SelectEntry(const BudgetDistribution& budget, Rng& rng);

// Decrements the entry at `pos`, erasing it once it reaches zero.
void ConsumeEntry(BudgetDistribution& budget, std::size_t pos);

// Fields a rule constrains: its own condition's fields, or for the default
// rule the union over all minority rules.
std::vector<std::size_t> RuleFields(const RuleSet& rules, int rule_index,
                                    const MessageSchema& schema);

// Sets the rule's fields to a satisfying assignment, then mutates every other
// field with probability mu to a uniform value over its raw width.
// Throws Error{kUnsatisfiable}.
FuzzAction ApplyRule(const ControlMessage& msg, const RuleSet& rules,
                     int rule_index, double mu, Rng& rng);

// Selects an entry, applies its rule and consumes one unit of budget. An
// unsatisfiable rule's entry is dropped before the error propagates.
FuzzAction GuidedFuzz(const ControlMessage& msg, const RuleSet& rules,
                      BudgetDistribution& budget, double mu, Rng& rng);

}  // namespace sdnfuzz

#endif  // SDNFUZZ_FUZZER_H_
