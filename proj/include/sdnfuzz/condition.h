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

#ifndef SDNFUZZ_CONDITION_H_
#define SDNFUZZ_CONDITION_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sdnfuzz {

enum class Op : std::uint8_t { kEq, kNe, kLe, kGe, kLt, kGt };

std::string_view OpSymbol(Op op);
std::optional<Op> ParseOp(std::string_view symbol);

constexpr bool Compare(std::uint64_t value, Op op, std::uint64_t constant) {
  switch (op) {
    case Op::kEq: return value == constant;
    case Op::kNe: return value != constant;
    case Op::kLe: return value <= constant;
    case Op::kGe: return value >= constant;
    case Op::kLt: return value < constant;
    case Op::kGt: return value > constant;
  }
  return false;
}

struct Atom {
  std::string field;
  Op op = Op::kEq;
  std::uint64_t constant = 0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

// A conjunction of atoms. The empty conjunction is vacuously true.
struct Condition {
  std::vector<Atom> atoms;

  bool empty() const noexcept { return atoms.empty(); }
  // Field names in first-appearance order, without duplicates.
  std::vector<std::string> fields() const;

  friend bool operator==(const Condition&, const Condition&) = default;
};

using FieldMap = std::map<std::string, std::uint64_t, std::less<>>;

// Throws Error{kMissingField} when an atom's field is absent.
bool Evaluate(const Condition& cond, const FieldMap& values);

// Condition with field names resolved to positions in a fixed field list, for
// evaluation against value vectors aligned with that list.
class BoundCondition {
 public:
  struct BoundAtom {
    std::size_t index;
    Op op;
    std::uint64_t constant;
  };

  // Throws Error{kMissingField} when an atom names a field not in `names`.
  BoundCondition(const Condition& cond, std::span<const std::string> names);

  bool operator()(std::span<const std::uint64_t> values) const {
    for (const auto& a : atoms_)
      if (!Compare(values[a.index], a.op, a.constant)) return false;
    return true;
  }

  std::span<const BoundAtom> atoms() const noexcept { return atoms_; }

 private:
  std::vector<BoundAtom> atoms_;
};

// Text form: `version > 5 AND length >= 10`; the empty condition prints as
// `TRUE`.
std::string FormatCondition(const Condition& cond);
// Throws Error{kParse}.
Condition ParseCondition(std::string_view text);

}  // namespace sdnfuzz

#endif  // SDNFUZZ_CONDITION_H_
