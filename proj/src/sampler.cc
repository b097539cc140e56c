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

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

#include "sdnfuzz/error.h"

namespace sdnfuzz {
namespace {

constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

Op Negate(Op op) {
  switch (op) {
    case Op::kEq: return Op::kNe;
    case Op::kNe: return Op::kEq;
    case Op::kLe: return Op::kGt;
    case Op::kGe: return Op::kLt;
    case Op::kLt: return Op::kGe;
    case Op::kGt: return Op::kLe;
  }
  return op;
}

// Rejection attempts before falling back to constructive search in
// SolveNoneOf.
constexpr int kRejectionTries = 64;
constexpr int kSearchBudget = 100000;

}  // namespace

IntervalSet IntervalSet::Range(std::uint64_t lo, std::uint64_t hi) {
  IntervalSet s;
  if (lo <= hi) s.parts_.push_back({lo, hi});
  return s;
}

void IntervalSet::IntersectWith(std::uint64_t lo, std::uint64_t hi) {
  std::vector<Interval> out;
  for (const auto& p : parts_) {
    const std::uint64_t a = std::max(p.lo, lo);
    const std::uint64_t b = std::min(p.hi, hi);
    if (a <= b) out.push_back({a, b});
  }
  parts_ = std::move(out);
}

void IntervalSet::Remove(std::uint64_t v) {
  std::vector<Interval> out;
  for (const auto& p : parts_) {
    if (v < p.lo || v > p.hi) {
      out.push_back(p);
      continue;
    }
    if (v > p.lo) out.push_back({p.lo, v - 1});
    if (v < p.hi) out.push_back({v + 1, p.hi});
  }
  parts_ = std::move(out);
}

void IntervalSet::Constrain(Op op, std::uint64_t c) {
  switch (op) {
    case Op::kEq: IntersectWith(c, c); break;
    case Op::kNe: Remove(c); break;
    case Op::kLe: IntersectWith(0, c); break;
    case Op::kGe: IntersectWith(c, kMax); break;
    case Op::kLt:
      if (c == 0) parts_.clear();
      else IntersectWith(0, c - 1);
      break;
    case Op::kGt:
      if (c == kMax) parts_.clear();
      else IntersectWith(c + 1, kMax);
      break;
  }
}

bool IntervalSet::contains(std::uint64_t v) const {
  return std::any_of(parts_.begin(), parts_.end(),
                     [v](const Interval& p) { return p.lo <= v && v <= p.hi; });
}

unsigned __int128 IntervalSet::size() const {
  unsigned __int128 n = 0;
  for (const auto& p : parts_)
    n += static_cast<unsigned __int128>(p.hi - p.lo) + 1;
  return n;
}

std::uint64_t IntervalSet::Draw(Rng& rng) const {
  if (parts_.empty())
    throw Error(Errc::kUnsatisfiable, "draw from empty interval set");
  const unsigned __int128 total = size();
  std::uint64_t k;
  if (total > kMax) {
    k = rng();  // the whole 64-bit range; mt19937_64 is uniform over it
  } else {
    k = UniformU64(rng, 0, static_cast<std::uint64_t>(total - 1));
  }
  for (const auto& p : parts_) {
    const std::uint64_t span = p.hi - p.lo;
    if (k <= span) return p.lo + k;
    k -= span + 1;
  }
  return parts_.back().hi;  // unreachable
}

std::vector<FieldInterval> FeasibleSets(const Condition& cond,
                                        const MessageSchema& schema) {
  std::map<std::size_t, IntervalSet> sets;
  for (const auto& atom : cond.atoms) {
    auto idx = schema.find(atom.field);
    if (!idx) throw Error(Errc::kMissingField, atom.field);
    auto [it, fresh] = sets.try_emplace(*idx);
    if (fresh) it->second = IntervalSet::Range(0, schema.field(*idx).raw_max());
    it->second.Constrain(atom.op, atom.constant);
  }
  std::vector<FieldInterval> out;
  out.reserve(sets.size());
  for (auto& [idx, set] : sets)
    out.push_back({schema.field(idx).name, idx, std::move(set)});
  return out;
}

Assignment Solve(const Condition& cond, const MessageSchema& schema, Rng& rng) {
  auto sets = FeasibleSets(cond, schema);
  for (const auto& fi : sets)
    if (fi.allowed.empty())
      throw Error(Errc::kUnsatisfiable,
                  "no value of " + fi.field + " satisfies " +
                      FormatCondition(cond));
  Assignment out;
  out.reserve(sets.size());
  for (const auto& fi : sets) out.emplace_back(fi.index, fi.allowed.Draw(rng));
  return out;
}

namespace {

struct NoneOfSearch {
  std::vector<std::vector<BoundCondition::BoundAtom>> rules;
  Rng& rng;
  int budget = kSearchBudget;

  bool Run(std::size_t i, std::map<std::size_t, IntervalSet>& state) {
    if (i == rules.size()) return true;
    if (--budget < 0) return false;
    std::vector<std::size_t> order(rules[i].size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t k : order) {
      const auto& atom = rules[i][k];
      auto next = state;
      next[atom.index].Constrain(Negate(atom.op), atom.constant);
      if (next[atom.index].empty()) continue;
      if (Run(i + 1, next)) {
        state = std::move(next);
        return true;
      }
    }
    return false;
  }
};

}  // namespace

Assignment SolveNoneOf(std::span<const Condition> rules,
                       const MessageSchema& schema, Rng& rng) {
  const auto names = schema.field_names();
  std::vector<BoundCondition> bound;
  std::vector<std::size_t> fields;
  for (const auto& cond : rules) {
    bound.emplace_back(cond, names);
    for (const auto& a : bound.back().atoms())
      if (std::find(fields.begin(), fields.end(), a.index) == fields.end())
        fields.push_back(a.index);
  }
  std::sort(fields.begin(), fields.end());

  std::vector<std::uint64_t> values(schema.field_count(), 0);
  for (int attempt = 0; attempt < kRejectionTries; ++attempt) {
    for (std::size_t f : fields)
      values[f] = UniformU64(rng, 0, schema.field(f).raw_max());
    const bool any = std::any_of(bound.begin(), bound.end(),
                                 [&](const BoundCondition& b) { return b(values); });
    if (!any) {
      Assignment out;
      for (std::size_t f : fields) out.emplace_back(f, values[f]);
      return out;
    }
  }

  std::map<std::size_t, IntervalSet> state;
  for (std::size_t f : fields)
    state[f] = IntervalSet::Range(0, schema.field(f).raw_max());
  NoneOfSearch search{{}, rng};
  std::vector<std::size_t> order(bound.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i : order)
    search.rules.emplace_back(bound[i].atoms().begin(), bound[i].atoms().end());
  if (!search.Run(0, state))
    throw Error(Errc::kUnsatisfiable, "every assignment satisfies some rule");
  Assignment out;
  for (std::size_t f : fields) out.emplace_back(f, state[f].Draw(rng));
  return out;
}

FieldMap ToFieldMap(const Assignment& a, const MessageSchema& schema) {
  FieldMap m;
  for (const auto& [idx, v] : a) m.emplace(schema.field(idx).name, v);
  return m;
}

}  // namespace sdnfuzz
