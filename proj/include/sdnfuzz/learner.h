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

// RIPPER rule induction over integer message fields.
//
// The learned model is an ordered list of rules predicting the minority class
// of the training data, followed by a default rule for the majority class that
// fires exactly when no minority rule does.

#ifndef SDNFUZZ_LEARNER_H_
#define SDNFUZZ_LEARNER_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdnfuzz/condition.h"
#include "sdnfuzz/dataset.h"

namespace sdnfuzz {

struct DecisionRule {
  Condition condition;
  Label prediction = Label::kAbsence;
  std::size_t t = 0;  // samples matching the condition
  std::size_t f = 0;  // of those, samples whose label differs from prediction
  double confidence = 0.0;

  // Sets t, f and confidence = (t - f) / t (0 when t == 0).
  void Annotate(std::size_t matched, std::size_t mismatched);

  friend bool operator==(const DecisionRule&, const DecisionRule&) = default;
};

double ConfidenceScore(std::size_t t, std::size_t f);

class RuleSet {
 public:
  RuleSet() = default;
  RuleSet(std::vector<DecisionRule> minority_rules, DecisionRule default_rule);

  const std::vector<DecisionRule>& minority_rules() const noexcept {
    return minority_rules_;
  }
  const DecisionRule& default_rule() const noexcept { return default_rule_; }
  Label minority_class() const noexcept { return Other(default_rule_.prediction); }
  Label majority_class() const noexcept { return default_rule_.prediction; }

  // Index of the first minority rule whose condition holds, or -1 when the
  // default rule applies. Throws Error{kMissingField}.
  int FiringRule(const FieldMap& values) const;
  Label Classify(const FieldMap& values) const;
  // Predictions for every row of `data` (1 = presence).
  std::vector<std::uint8_t> ClassifyAll(const LabeledDataset& data) const;

  // Recomputes t / f / confidence of every rule over `data`.
  void AnnotateOn(const LabeledDataset& data);

  std::string ToText() const;
  // Throws Error{kParse}.
  static RuleSet FromText(std::string_view text);
  void WriteFile(const std::filesystem::path& path) const;
  static RuleSet ReadFile(const std::filesystem::path& path);

  friend bool operator==(const RuleSet&, const RuleSet&) = default;

 private:
  std::vector<DecisionRule> minority_rules_;
  DecisionRule default_rule_;
};

struct LearnerParams {
  double grow_fraction = 2.0 / 3.0;
  int optimization_passes = 2;
  std::size_t min_coverage = 2;
  // Rule addition stops once the description length exceeds the best seen
  // by this many bits.
  double max_dl_surplus = 64.0;
  std::uint64_t seed = 1;
};

RuleSet Learn(const LabeledDataset& data, const LearnerParams& params = {});

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

// Presence is the positive class. Precision (recall) is 0 when there are no
// predicted (actual) positives.
Metrics Score(std::span<const std::uint8_t> actual,
              std::span<const std::uint8_t> predicted);

// Stratified k-fold cross-validation with pooled counts. Throws
// Error{kTooFewSamples} when |data| < k.
Metrics CrossValidate(const LabeledDataset& data, int k = 10,
                      const LearnerParams& params = {});

}  // namespace sdnfuzz

#endif  // SDNFUZZ_LEARNER_H_
