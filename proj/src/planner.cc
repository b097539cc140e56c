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


#include "sdnfuzz/planner.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sdnfuzz/error.h"

namespace sdnfuzz {

std::size_t BudgetDistribution::total() const {
  std::size_t t = 0;
  for (const auto& e : entries) t += e.quota;
  return t;
}

std::pair<std::size_t, std::size_t> NextTargets(std::size_t dataset_size,
                                                std::size_t minor,
                                                std::size_t n) {
  // (|D| + n) / 2 is exact in every table row; odd sums round down.
  const auto half = static_cast<long long>((dataset_size + n) / 2);
  long long next_minor = half - static_cast<long long>(minor);
  next_minor = std::clamp<long long>(next_minor, 0, static_cast<long long>(n));
  const auto m = static_cast<std::size_t>(next_minor);
  return {m, n - m};
}

std::optional<std::vector<std::size_t>> Apportion(
    std::size_t total, const std::vector<double>& weights) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (weights.empty() || !(sum > 0.0)) return std::nullopt;
  std::vector<std::size_t> out(weights.size());
  std::vector<double> rem(weights.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = static_cast<double>(total) * weights[i] / sum;
    out[i] = static_cast<std::size_t>(std::floor(exact));
    rem[i] = exact - static_cast<double>(out[i]);
    assigned += out[i];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned)
    ++out[order[k % order.size()]];
  return out;
}

IterationPlan Plan(const LabeledDataset& data, const RuleSet& rules,
                   std::size_t n) {
  if (n == 0) throw Error(Errc::kInvalidConfig, "iteration size must be positive");
  IterationPlan plan;
  plan.minor = data.count(rules.minority_class());
  plan.major = data.size() - plan.minor;
  std::tie(plan.next_minor, plan.next_major) =
      NextTargets(data.size(), plan.minor, n);

  if (rules.minority_rules().empty()) {
    plan.initial_fallback = true;
    return plan;
  }

  std::vector<double> conf;
  for (const auto& r : rules.minority_rules()) conf.push_back(r.confidence);
  auto minor_quota = Apportion(plan.next_minor, conf);
  if (!minor_quota) {
    plan.equal_split_groups.push_back("minority");
    minor_quota = Apportion(plan.next_minor, std::vector<double>(conf.size(), 1.0));
  }
  for (std::size_t i = 0; i < conf.size(); ++i)
    plan.budget.entries.push_back({static_cast<int>(i), (*minor_quota)[i]});

  // The default rule is the whole majority group, so it takes major' outright;
  // a zero confidence only matters for the log.
  if (!(rules.default_rule().confidence > 0.0))
    plan.equal_split_groups.push_back("majority");
  plan.budget.entries.push_back({-1, plan.next_major});
  return plan;
}

Metrics Progress(const LabeledDataset& data, const LearnerParams& params) {
  if (data.size() < 10)
    throw Error(Errc::kTooFewSamples,
                "progress needs at least 10 samples, have " + std::to_string(data.size()));
  return CrossValidate(data, 10, params);
}

StopDecision ShouldStop(const std::vector<Metrics>& history,
                        bool budget_exhausted, const StopPolicy& policy) {
  if (budget_exhausted) return {true, "budget"};
  if (!history.empty() && (policy.target_precision || policy.target_recall)) {
    const auto& last = history.back();
    const bool p_ok = !policy.target_precision || last.precision >= *policy.target_precision;
    const bool r_ok = !policy.target_recall || last.recall >= *policy.target_recall;
    if (p_ok && r_ok) return {true, "target"};
  }
  if (policy.window > 0 && history.size() >= policy.window) {
    const auto& first = history[history.size() - policy.window];
    const auto& last = history.back();
    if (last.precision - first.precision < policy.epsilon &&
        last.recall - first.recall < policy.epsilon)
      return {true, "plateau"};
  }
  return {};
}

}  // namespace sdnfuzz
