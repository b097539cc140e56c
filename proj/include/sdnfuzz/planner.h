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


// Imbalance-aware planning of the next fuzzing iteration and campaign
// progress monitoring.

#ifndef SDNFUZZ_PLANNER_H_
#define SDNFUZZ_PLANNER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdnfuzz/dataset.h"
#include "sdnfuzz/learner.h"

namespace sdnfuzz {

// Quota for one rule. rule_index indexes RuleSet::minority_rules(); -1 is the
// default rule.
struct BudgetEntry {
  int rule_index = -1;
  std::size_t quota = 0;

  friend bool operator==(const BudgetEntry&, const BudgetEntry&) = default;
};

struct BudgetDistribution {
  std::vector<BudgetEntry> entries;

  std::size_t total() const;
  bool empty() const { return total() == 0; }
};

struct IterationPlan {
  std::size_t minor = 0, major = 0;
  std::size_t next_minor = 0, next_major = 0;
  BudgetDistribution budget;
  // True when there are no minority rules; the iteration uses initial fuzz.
  bool initial_fallback = false;
  // Class groups whose confidences were all zero and got an equal split.
  std::vector<std::string> equal_split_groups;
};

// Next-iteration class targets: minor' = min((|D| + n) / 2 - minor, n),
// clamped below at 0; major' = n - minor'.
std::pair<std::size_t, std::size_t> NextTargets(std::size_t dataset_size,
                                                std::size_t minor,
                                                std::size_t n);

// Splits `total` proportionally to `weights` with largest-remainder rounding;
// ties on the remainder go to the lower index. Returns nullopt when every
// weight is zero (or there are no weights).
std::optional<std::vector<std::size_t>> Apportion(
    std::size_t total, const std::vector<double>& weights);

IterationPlan Plan(const LabeledDataset& data, const RuleSet& rules,
                   std::size_t n);

// 10-fold cross-validated precision / recall. Throws Error{kTooFewSamples}
// when |D| < 10.
Metrics Progress(const LabeledDataset& data, const LearnerParams& params = {});

struct StopPolicy {
  double epsilon = 0.01;
  // Plateau window; 0 disables plateau stopping.
  std::size_t window = 3;
  std::optional<double> target_precision;
  std::optional<double> target_recall;
};

struct StopDecision {
  bool stop = false;
  std::string reason;  // "budget", "plateau", "target" or empty
};

StopDecision ShouldStop(const std::vector<Metrics>& history,
                        bool budget_exhausted, const StopPolicy& policy = {});

}  // namespace sdnfuzz

#endif  // SDNFUZZ_PLANNER_H_
