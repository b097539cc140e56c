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

#include "sdnfuzz/condition.h"

#include <algorithm>
#include <charconv>

#include "sdnfuzz/error.h"
#include "text_util.h"

namespace sdnfuzz {

std::string_view OpSymbol(Op op) {
  switch (op) {
    case Op::kEq: return "=";
    case Op::kNe: return "!=";
    case Op::kLe: return "<=";
    case Op::kGe: return ">=";
    case Op::kLt: return "<";
    case Op::kGt: return ">";
  }
  return "?";
}

std::optional<Op> ParseOp(std::string_view s) {
  if (s == "=" || s == "==") return Op::kEq;
  if (s == "!=") return Op::kNe;
  if (s == "<=") return Op::kLe;
  if (s == ">=") return Op::kGe;
  if (s == "<") return Op::kLt;
  if (s == ">") return Op::kGt;
  return std::nullopt;
}

std::vector<std::string> Condition::fields() const {
  std::vector<std::string> out;
  for (const auto& a : atoms)
    if (std::find(out.begin(), out.end(), a.field) == out.end())
      out.push_back(a.field);
  return out;
}

bool Evaluate(const Condition& cond, const FieldMap& values) {
  bool result = true;
  // Every referenced field must be present, even after the result is known.
  for (const auto& a : cond.atoms) {
    auto it = values.find(a.field);
    if (it == values.end())
      throw Error(Errc::kMissingField, a.field);
    result = result && Compare(it->second, a.op, a.constant);
  }
  return result;
}

BoundCondition::BoundCondition(const Condition& cond,
                               std::span<const std::string> names) {
  atoms_.reserve(cond.atoms.size());
  for (const auto& a : cond.atoms) {
    auto it = std::find(names.begin(), names.end(), a.field);
    if (it == names.end()) throw Error(Errc::kMissingField, a.field);
    atoms_.push_back({static_cast<std::size_t>(it - names.begin()), a.op,
                      a.constant});
  }
}

std::string FormatCondition(const Condition& cond) {
  if (cond.empty()) return "TRUE";
  std::string out;
  for (std::size_t i = 0; i < cond.atoms.size(); ++i) {
    if (i) out += " AND ";
    const Atom& a = cond.atoms[i];
    out += a.field;
    out += ' ';
    out += OpSymbol(a.op);
    out += ' ';
    out += std::to_string(a.constant);
  }
  return out;
}

Condition ParseCondition(std::string_view text) {
  const auto tokens = text_util::SplitWhitespace(text);
  Condition cond;
  if (tokens.size() == 1 && tokens[0] == "TRUE") return cond;
  if (tokens.empty()) throw Error(Errc::kParse, "empty condition");
  std::size_t i = 0;
  while (true) {
    if (i + 3 > tokens.size())
      throw Error(Errc::kParse, "incomplete atom in '" + std::string(text) + "'");
    Atom a;
    a.field = std::string(tokens[i]);
    auto op = ParseOp(tokens[i + 1]);
    if (!op)
      throw Error(Errc::kParse, "bad operator '" + std::string(tokens[i + 1]) + "'");
    a.op = *op;
    a.constant = text_util::ParseU64(tokens[i + 2]);
    cond.atoms.push_back(std::move(a));
    i += 3;
    if (i == tokens.size()) break;
    if (tokens[i] != "AND")
      throw Error(Errc::kParse, "expected AND, got '" + std::string(tokens[i]) + "'");
    ++i;
  }
  return cond;
}

}  // namespace sdnfuzz
