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

#include <gtest/gtest.h>

#include <cstdlib>
#include <numeric>

#include "sdnfuzz/error.h"
#include "test_support.h"

namespace sdnfuzz {
namespace {

struct TableRow {
  std::size_t size, minor, next_minor, next_major;
};

// Reference rows of the imbalance trajectory for n = 200.
constexpr TableRow kTable[] = {
    {200, 10, 190, 10},   {400, 125, 175, 25},  {600, 248, 152, 48},
    {800, 380, 120, 80},  {1000, 495, 105, 95}, {1200, 600, 100, 100},
};

TEST(NextTargets, MatchesReferenceRows) {
  for (const auto& row : kTable) {
    const auto [mi, ma] = NextTargets(row.size, row.minor, 200);
    EXPECT_EQ(mi, row.next_minor) << row.size;
    EXPECT_EQ(ma, row.next_major) << row.size;
  }
}

using Targets = std::pair<std::size_t, std::size_t>;

TEST(NextTargets, ClampsToRange) {
  // Minority already past half of the next dataset: nothing more to add.
  EXPECT_EQ(NextTargets(1000, 800, 200), Targets(0, 200));
  EXPECT_EQ(NextTargets(0, 0, 200), Targets(100, 100));
  // No minority yet: the whole iteration goes to the minority.
  EXPECT_EQ(NextTargets(400, 0, 200), Targets(200, 0));
}

TEST(NextTargets, RealizedQuotasConvergeToBalance) {
  std::size_t size = 200, minor = 10;
  long long gap = static_cast<long long>(size - 2 * minor);
  for (int it = 0; it < 30; ++it) {
    const auto [mi, ma] = NextTargets(size, minor, 200);
    ASSERT_EQ(mi + ma, 200u);
    size += 200;
    minor += mi;
    const long long g = std::llabs(static_cast<long long>(size) - 2 * static_cast<long long>(minor));
    if (mi < 200) {
      EXPECT_LE(g, gap);
    }
    gap = g;
  }
  EXPECT_EQ(minor * 2, size);
}

// Integer-exact largest remainder over integer weights.
std::vector<std::size_t> ApportionOracle(std::size_t total, const std::vector<std::uint64_t>& w) {
  const std::uint64_t sum = std::accumulate(w.begin(), w.end(), std::uint64_t{0});
  std::vector<std::size_t> q(w.size());
  std::vector<std::uint64_t> rem(w.size());
  std::size_t given = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    q[i] = total * w[i] / sum;
    rem[i] = total * w[i] % sum;
    given += q[i];
  }
  while (given < total) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < w.size(); ++i)
      if (rem[i] > rem[best]) best = i;
    ++q[best];
    rem[best] = 0;
    ++given;
  }
  return q;
}

TEST(Apportion, WorkedExample) {
  const auto q = Apportion(190, {0.8, 0.7});
  ASSERT_TRUE(q);
  EXPECT_EQ(*q, (std::vector<std::size_t>{101, 89}));
}

TEST(Apportion, AgreesWithIntegerOracle) {
  Rng rng = MakeRng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t k = 1 + rng() % 6;
    const std::size_t total = rng() % 400;
    std::vector<std::uint64_t> w(k);
    std::vector<double> wd(k);
    for (std::size_t i = 0; i < k; ++i) {
      w[i] = rng() % 17;
      wd[i] = static_cast<double>(w[i]);
    }
    const auto got = Apportion(total, wd);
    if (std::accumulate(w.begin(), w.end(), std::uint64_t{0}) == 0) {
      EXPECT_FALSE(got);
      continue;
    }
    ASSERT_TRUE(got);
    EXPECT_EQ(std::accumulate(got->begin(), got->end(), std::size_t{0}), total);
    // Ties on the remainder may resolve either way between equal weights only.
    const auto want = ApportionOracle(total, w);
    for (std::size_t i = 0; i < k; ++i)
      EXPECT_LE(std::llabs(static_cast<long long>((*got)[i]) - static_cast<long long>(want[i])), 1);
  }
}

TEST(Apportion, AllZero) {
  EXPECT_FALSE(Apportion(10, {0.0, 0.0}));
  EXPECT_FALSE(Apportion(10, {}));
}

// Minority presence dataset of the given size over the small schema.
LabeledDataset Counts(std::size_t size, std::size_t minor) {
  const auto s = testing::SmallSchema();
  LabeledDataset d(s->field_names());
  for (std::size_t i = 0; i < size; ++i)
    d.Append(std::vector<std::uint64_t>{0, 0, 0, 0, 0},
             i < minor ? Label::kPresence : Label::kAbsence);
  return d;
}

DecisionRule Rule(const char* cond, Label l, double conf) {
  DecisionRule r{*cond ? ParseCondition(cond) : Condition{}, l};
  r.confidence = conf;
  return r;
}

TEST(Plan, WorkedBudget) {
  RuleSet rs({Rule("version > 5", Label::kPresence, 0.8),
              Rule("length >= 10", Label::kPresence, 0.7)},
             Rule("", Label::kAbsence, 0.8));
  const auto plan = Plan(Counts(200, 10), rs, 200);
  EXPECT_EQ(plan.minor, 10u);
  EXPECT_EQ(plan.major, 190u);
  EXPECT_EQ(plan.next_minor, 190u);
  EXPECT_EQ(plan.next_major, 10u);
  EXPECT_FALSE(plan.initial_fallback);
  EXPECT_TRUE(plan.equal_split_groups.empty());
  ASSERT_EQ(plan.budget.entries.size(), 3u);
  EXPECT_EQ(plan.budget.entries[0], (BudgetEntry{0, 101}));
  EXPECT_EQ(plan.budget.entries[1], (BudgetEntry{1, 89}));
  EXPECT_EQ(plan.budget.entries[2], (BudgetEntry{-1, 10}));
  EXPECT_EQ(plan.budget.total(), 200u);
}

TEST(Plan, QuotaTotalsHitTargets) {
  for (const auto& row : kTable) {
    RuleSet rs({Rule("version > 5", Label::kPresence, 0.33),
                Rule("n1 = 2", Label::kPresence, 0.91),
                Rule("n2 < 4", Label::kPresence, 0.05)},
               Rule("", Label::kAbsence, 0.6));
    const auto plan = Plan(Counts(row.size, row.minor), rs, 200);
    std::size_t mi = 0;
    for (const auto& e : plan.budget.entries)
      if (e.rule_index >= 0) mi += e.quota;
    EXPECT_EQ(mi, row.next_minor);
    EXPECT_EQ(plan.budget.total(), 200u);
  }
}

TEST(Plan, ZeroConfidencesFallBackToEqualSplit) {
  RuleSet rs({Rule("version > 5", Label::kPresence, 0.0),
              Rule("length >= 10", Label::kPresence, 0.0)},
             Rule("", Label::kAbsence, 0.0));
  const auto plan = Plan(Counts(200, 10), rs, 200);
  EXPECT_EQ(plan.budget.entries[0].quota, 95u);
  EXPECT_EQ(plan.budget.entries[1].quota, 95u);
  EXPECT_EQ(plan.budget.entries[2].quota, 10u);
  EXPECT_EQ(plan.equal_split_groups, (std::vector<std::string>{"minority", "majority"}));
}

TEST(Plan, NoMinorityRulesFallsBackToInitialFuzz) {
  const auto plan = Plan(Counts(200, 3), RuleSet({}, Rule("", Label::kAbsence, 1.0)), 200);
  EXPECT_TRUE(plan.initial_fallback);
  EXPECT_TRUE(plan.budget.entries.empty());
}

TEST(Progress, IsTenFoldCrossValidation) {
  const auto d = testing::PlantedDataset(*testing::SmallSchema(),
                                         [](auto v) { return v[1] > 5 && v[2] >= 10; }, 600, 3,
                                         true);
  const auto p = Progress(d);
  const auto cv = CrossValidate(d, 10);
  EXPECT_EQ(p.tp, cv.tp);
  EXPECT_EQ(p.fp, cv.fp);
  EXPECT_DOUBLE_EQ(p.precision, cv.precision);
  EXPECT_DOUBLE_EQ(p.recall, cv.recall);
  try {
    Progress(Counts(9, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kTooFewSamples);
  }
}

TEST(Progress, RandomLabelsGiveRecallNearPredictedRate) {
  const auto s = testing::SmallSchema();
  LabeledDataset d(s->field_names());
  Rng rng = MakeRng(21);
  for (int i = 0; i < 2000; ++i) {
    std::vector<std::uint64_t> v = {0, rng() % 16, rng() % 16, rng() % 16, rng() % 16};
    d.Append(v, UniformUnit(rng) < 0.5 ? Label::kPresence : Label::kAbsence);
  }
  const auto m = Progress(d);
  const double predicted = static_cast<double>(m.tp + m.fp) / d.size();
  EXPECT_NEAR(m.recall, predicted, 0.05);
}

Metrics M(double p, double r) {
  Metrics m;
  m.precision = p;
  m.recall = r;
  return m;
}

TEST(ShouldStop, Rules) {
  EXPECT_FALSE(ShouldStop({}, false).stop);
  EXPECT_EQ(ShouldStop({}, true).reason, "budget");
  EXPECT_EQ(ShouldStop({M(0.99, 0.95), M(0.99, 0.95), M(0.99, 0.95)}, false).reason,
            "plateau");
  EXPECT_FALSE(ShouldStop({M(0.99, 0.95), M(0.99, 0.95)}, false).stop);
  EXPECT_FALSE(ShouldStop({M(0.5, 0.5), M(0.6, 0.5), M(0.7, 0.5)}, false).stop);
  StopPolicy off;
  off.window = 0;
  EXPECT_FALSE(ShouldStop({M(0.99, 0.95), M(0.99, 0.95), M(0.99, 0.95)}, false, off).stop);
  StopPolicy target;
  target.window = 0;
  target.target_precision = 0.9;
  target.target_recall = 0.9;
  EXPECT_EQ(ShouldStop({M(0.95, 0.92)}, false, target).reason, "target");
  EXPECT_FALSE(ShouldStop({M(0.95, 0.85)}, false, target).stop);
}

}  // namespace
}  // namespace sdnfuzz
