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

// Bounded-integer constraint sampler.
//
// Learned conditions are conjunctions of single-field comparisons, so each
// field's feasible values are an interval union computed independently. A
// satisfying assignment is one uniform draw per field from that union, over
// the field's full raw width.

#ifndef SDNFUZZ_SAMPLER_H_
#define SDNFUZZ_SAMPLER_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sdnfuzz/codec.h"
#include "sdnfuzz/condition.h"
#include "sdnfuzz/rng.h"

namespace sdnfuzz {

struct Interval {
  std::uint64_t lo;
  std::uint64_t hi;  // inclusive

  friend bool operator==(const Interval&, const Interval&) = default;
};

// Sorted, disjoint, non-adjacent intervals.
class IntervalSet {
 public:
  IntervalSet() = default;
  static IntervalSet Range(std::uint64_t lo, std::uint64_t hi);

  // Restricts the set to values satisfying `value op constant`.
  void Constrain(Op op, std::uint64_t constant);

  bool empty() const noexcept { return parts_.empty(); }
  bool contains(std::uint64_t v) const;
  // Number of members; 2^64 is representable.
  unsigned __int128 size() const;
  std::uint64_t Draw(Rng& rng) const;

  std::span<const Interval> intervals() const noexcept { return parts_; }

 private:
  void IntersectWith(std::uint64_t lo, std::uint64_t hi);
  void Remove(std::uint64_t v);

  std::vector<Interval> parts_;
};

struct FieldInterval {
  std::string field;
  std::size_t index;
  IntervalSet allowed;
};

// Per-field feasible sets for the fields named in `cond`, in schema order.
// Throws Error{kMissingField} for fields absent from the schema.
std::vector<FieldInterval> FeasibleSets(const Condition& cond,
                                        const MessageSchema& schema);

// (field index, value) pairs, one per field named in the condition.
using Assignment = std::vector<std::pair<std::size_t, std::uint64_t>>;

// Throws Error{kUnsatisfiable} when some field has no feasible value.
Assignment Solve(const Condition& cond, const MessageSchema& schema, Rng& rng);

// Assignment over the union of the fields of `rules` under which none of the
// conditions holds (the default-rule region). Unconstrained fields in that
// union are drawn over their full width. Throws Error{kUnsatisfiable}.
Assignment SolveNoneOf(std::span<const Condition> rules,
                       const MessageSchema& schema, Rng& rng);

FieldMap ToFieldMap(const Assignment& a, const MessageSchema& schema);

}  // namespace sdnfuzz

#endif  // SDNFUZZ_SAMPLER_H_
