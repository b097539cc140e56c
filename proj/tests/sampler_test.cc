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


#include "sdnfuzz/sampler.h"

#include <gtest/gtest.h>

#include <array>
#include <set>

#include "sdnfuzz/condition.h"
#include "sdnfuzz/error.h"
#include "test_support.h"

namespace sdnfuzz {
namespace {

constexpr Op kOps[] = {Op::kEq, Op::kNe, Op::kLe, Op::kGe, Op::kLt, Op::kGt};

// Truth-table check of one atom, written without the library's Compare.
bool AtomHolds(std::uint64_t v, Op op, std::uint64_t c) {
  switch (op) {
    case Op::kEq: return v == c;
    case Op::kNe: return !(v == c);
    case Op::kLe: return !(v > c);
    case Op::kGe: return !(v < c);
    case Op::kLt: return v < c && v != c;
    case Op::kGt: return v > c && v != c;
  }
  return false;
}

Condition RandomNibbleCondition(Rng& rng) {
  Condition c;
  const auto n = UniformU64(rng, 1, 4);
  for (std::uint64_t i = 0; i < n; ++i)
    c.atoms.push_back({UniformU64(rng, 0, 1) ? "a" : "b", kOps[UniformU64(rng, 0, 5)],
                       UniformU64(rng, 0, 15)});
  return c;
}

// All (a, b) pairs satisfying the condition, by enumeration.
std::vector<std::array<std::uint64_t, 2>> BruteForce(const Condition& c) {
  std::vector<std::array<std::uint64_t, 2>> out;
  for (std::uint64_t a = 0; a < 16; ++a)
    for (std::uint64_t b = 0; b < 16; ++b) {
      bool ok = true;
      for (const auto& at : c.atoms) ok = ok && AtomHolds(at.field == "a" ? a : b, at.op, at.constant);
      if (ok) out.push_back({a, b});
    }
  return out;
}

TEST(Evaluate, EmptyConjunctionIsTrue) { EXPECT_TRUE(Evaluate(Condition{}, FieldMap{})); }

TEST(Evaluate, WorkedExampleSatisfied) {
  const auto c = ParseCondition("version > 5 AND length >= 10");
  EXPECT_TRUE(Evaluate(c, FieldMap{{"version", 6}, {"length", 20}}));
  EXPECT_FALSE(Evaluate(c, FieldMap{{"version", 5}, {"length", 20}}));
  EXPECT_FALSE(Evaluate(c, FieldMap{{"version", 6}, {"length", 9}}));
}

TEST(Evaluate, MissingFieldThrows) {
  const auto c = ParseCondition("version > 5");
  try {
    Evaluate(c, FieldMap{{"length", 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kMissingField);
  }
}

TEST(Evaluate, AgreesWithTruthTableOnTwoNibbles) {
  Rng rng = MakeRng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto c = RandomNibbleCondition(rng);
    const auto sat = BruteForce(c);
    std::set<std::array<std::uint64_t, 2>> want(sat.begin(), sat.end());
    for (std::uint64_t a = 0; a < 16; ++a)
      for (std::uint64_t b = 0; b < 16; ++b)
        ASSERT_EQ(Evaluate(c, FieldMap{{"a", a}, {"b", b}}), want.count({a, b}) == 1)
            << FormatCondition(c) << " a=" << a << " b=" << b;
  }
}

TEST(ConditionText, ParsePrintRoundTrip) {
  for (const char* text : {"TRUE", "a = 1", "a != 2 AND b <= 3", "x < 0 AND y > 18446744073709551615",
                           "version > 5 AND length >= 10"}) {
    const auto c = ParseCondition(text);
    EXPECT_EQ(FormatCondition(c), text);
    EXPECT_EQ(ParseCondition(FormatCondition(c)), c);
  }
  EXPECT_THROW(ParseCondition("a >> 3"), Error);
  EXPECT_THROW(ParseCondition("a <= -1"), Error);
  EXPECT_THROW(ParseCondition("a <= 1 AND"), Error);
}

TEST(IntervalSetTest, ConstrainOperators) {
  auto s = IntervalSet::Range(0, 15);
  s.Constrain(Op::kNe, 7);
  EXPECT_EQ(s.intervals().size(), 2u);
  EXPECT_FALSE(s.contains(7));
  EXPECT_EQ(static_cast<std::uint64_t>(s.size()), 15u);
  s.Constrain(Op::kGt, 3);
  s.Constrain(Op::kLt, 10);
  EXPECT_EQ(static_cast<std::uint64_t>(s.size()), 5u);  // 4 5 6 8 9
  s.Constrain(Op::kEq, 7);
  EXPECT_TRUE(s.empty());
}

TEST(IntervalSetTest, FullWidthAndEdges) {
  auto s = IntervalSet::Range(0, ~std::uint64_t{0});
  EXPECT_EQ(s.size(), static_cast<unsigned __int128>(1) << 64);
  s.Constrain(Op::kLt, 0);
  EXPECT_TRUE(s.empty());
  auto t = IntervalSet::Range(0, ~std::uint64_t{0});
  t.Constrain(Op::kGt, ~std::uint64_t{0});
  EXPECT_TRUE(t.empty());
  auto u = IntervalSet::Range(0, ~std::uint64_t{0});
  u.Constrain(Op::kNe, ~std::uint64_t{0});
  EXPECT_FALSE(u.contains(~std::uint64_t{0}));
  Rng rng = MakeRng(1);
  for (int i = 0; i < 100; ++i) EXPECT_NE(u.Draw(rng), ~std::uint64_t{0});
}

TEST(Solve, WorkedExampleRanges) {
  const auto reg = testing::ShippedRegistry();
  const auto s = reg.require("packet_in");
  const auto c = ParseCondition("version > 5 AND length >= 10");
  Rng rng = MakeRng(2);
  for (int i = 0; i < 1000; ++i) {
    const auto a = Solve(c, *s, rng);
    ASSERT_EQ(a.size(), 2u);
    const auto m = ToFieldMap(a, *s);
    EXPECT_GE(m.at("version"), 6u);
    EXPECT_LE(m.at("version"), 255u);
    EXPECT_GE(m.at("length"), 10u);
    EXPECT_LE(m.at("length"), 65535u);
    EXPECT_TRUE(Evaluate(c, m));
  }
  // The hand-picked model is inside the feasible sets.
  const auto sets = FeasibleSets(c, *s);
  EXPECT_TRUE(sets[0].allowed.contains(6));
  EXPECT_TRUE(sets[1].allowed.contains(20));
}

TEST(Solve, PointConstraint) {
  const auto reg = testing::ShippedRegistry();
  Rng rng = MakeRng(4);
  const auto a = Solve(ParseCondition("version = 4"), *reg.require("packet_in"), rng);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].second, 4u);
}

TEST(Solve, UnknownFieldIsReported) {
  const auto reg = testing::ShippedRegistry();
  Rng rng = MakeRng(4);
  EXPECT_THROW(Solve(ParseCondition("nonsense = 4"), *reg.require("hello"), rng), Error);
}

TEST(Solve, MatchesExhaustiveEnumerationOnNibbles) {
  const auto s = testing::NibbleSchema();
  Rng rng = MakeRng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = RandomNibbleCondition(rng);
    const auto sat = BruteForce(c);
    if (sat.empty()) {
      try {
        Solve(c, *s, rng);
        FAIL() << "expected unsatisfiable: " << FormatCondition(c);
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::kUnsatisfiable);
      }
      continue;
    }
    // Per-field projections of the satisfying set.
    std::set<std::uint64_t> want_a, want_b;
    for (const auto& p : sat) {
      want_a.insert(p[0]);
      want_b.insert(p[1]);
    }
    std::set<std::uint64_t> got_a, got_b;
    const auto fields = c.fields();
    const bool uses_a = std::find(fields.begin(), fields.end(), "a") != fields.end();
    const bool uses_b = std::find(fields.begin(), fields.end(), "b") != fields.end();
    for (int d = 0; d < 500; ++d) {
      const auto m = ToFieldMap(Solve(c, *s, rng), *s);
      FieldMap full = m;
      full.try_emplace("a", 0);
      full.try_emplace("b", 0);
      ASSERT_TRUE(Evaluate(c, full)) << FormatCondition(c);
      if (uses_a) got_a.insert(m.at("a"));
      if (uses_b) got_b.insert(m.at("b"));
    }
    if (uses_a) EXPECT_EQ(got_a, want_a) << FormatCondition(c);
    if (uses_b) EXPECT_EQ(got_b, want_b) << FormatCondition(c);
  }
}

TEST(Solve, DrawsAreUniform) {
  const auto s = testing::NibbleSchema();
  const auto c = ParseCondition("a >= 2 AND a != 7 AND a <= 13");  // 11 values
  Rng rng = MakeRng(12);
  std::map<std::uint64_t, int> counts;
  const int draws = 22000;
  for (int i = 0; i < draws; ++i) counts[Solve(c, *s, rng)[0].second]++;
  ASSERT_EQ(counts.size(), 11u);
  const double expected = draws / 11.0;
  double chi2 = 0;
  for (const auto& [v, n] : counts) chi2 += (n - expected) * (n - expected) / expected;
  // 10 degrees of freedom; 29.6 is the 0.999 quantile.
  EXPECT_LT(chi2, 29.6);
}

TEST(SolveNoneOf, OutputAvoidsEveryCondition) {
  const auto s = testing::NibbleSchema();
  Rng rng = MakeRng(21);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Condition> conds;
    const auto k = UniformU64(rng, 1, 4);
    for (std::uint64_t i = 0; i < k; ++i) conds.push_back(RandomNibbleCondition(rng));
    // Brute force: does any (a, b) escape all conditions?
    bool escape = false;
    for (std::uint64_t a = 0; a < 16 && !escape; ++a)
      for (std::uint64_t b = 0; b < 16 && !escape; ++b) {
        bool any = false;
        for (const auto& c : conds) any = any || Evaluate(c, FieldMap{{"a", a}, {"b", b}});
        escape = !any;
      }
    try {
      const auto m = ToFieldMap(SolveNoneOf(conds, *s, rng), *s);
      ASSERT_TRUE(escape);
      FieldMap full = m;
      full.try_emplace("a", 0);
      full.try_emplace("b", 0);
      for (const auto& c : conds) {
        // Fields a condition does not mention were left free, so only check
        // conditions fully covered by the assignment.
        bool covered = true;
        for (const auto& f : c.fields()) covered = covered && m.count(f);
        if (covered) ASSERT_FALSE(Evaluate(c, m)) << FormatCondition(c);
      }
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), Errc::kUnsatisfiable);
      ASSERT_FALSE(escape);
    }
  }
}

}  // namespace
}  // namespace sdnfuzz
