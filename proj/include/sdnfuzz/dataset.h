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

#ifndef SDNFUZZ_DATASET_H_
#define SDNFUZZ_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdnfuzz/condition.h"

namespace sdnfuzz {

enum class Label : std::uint8_t { kAbsence = 0, kPresence = 1 };

std::string_view LabelName(Label label);
// Throws Error{kParse}.
Label ParseLabel(std::string_view text);
inline Label Other(Label l) {
  return l == Label::kPresence ? Label::kAbsence : Label::kPresence;
}

struct LabeledSample {
  std::vector<std::uint64_t> values;
  Label label = Label::kAbsence;
};

// Append-only accumulation of fuzzing outcomes. Values are stored column-major
// so rule coverage can run over contiguous feature columns.
class LabeledDataset {
 public:
  LabeledDataset() = default;
  explicit LabeledDataset(std::vector<std::string> field_names);

  void Append(std::span<const std::uint64_t> values, Label label,
              int iteration = 0);

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  std::size_t field_count() const noexcept { return names_.size(); }
  const std::vector<std::string>& field_names() const noexcept { return names_; }

  std::span<const std::uint64_t> column(std::size_t field) const {
    return columns_[field];
  }
  // 1 = presence, 0 = absence.
  std::span<const std::uint8_t> presence() const noexcept { return labels_; }
  Label label(std::size_t row) const { return static_cast<Label>(labels_[row]); }
  int iteration(std::size_t row) const { return iterations_[row]; }
  std::uint64_t value(std::size_t row, std::size_t field) const {
    return columns_[field][row];
  }
  std::vector<std::uint64_t> row(std::size_t row) const;
  FieldMap row_map(std::size_t row) const;
  LabeledSample sample(std::size_t row) const { return {this->row(row), label(row)}; }

  std::size_t count(Label l) const;

  LabeledDataset Subset(std::span<const std::size_t> rows) const;
  LabeledDataset Prefix(std::size_t rows) const;

  // CSV: header = field names + "label"; decimal values; label is
  // presence|absence.
  std::string ToCsv() const;
  static LabeledDataset FromCsv(std::string_view text);
  void WriteCsv(const std::filesystem::path& path) const;
  static LabeledDataset ReadCsv(const std::filesystem::path& path);

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::uint64_t>> columns_;
  std::vector<std::uint8_t> labels_;
  std::vector<int> iterations_;
};

}  // namespace sdnfuzz

#endif  // SDNFUZZ_DATASET_H_
