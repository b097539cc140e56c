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

#include "sdnfuzz/dataset.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "sdnfuzz/error.h"
#include "text_util.h"

namespace sdnfuzz {

std::string_view LabelName(Label label) {
  return label == Label::kPresence ? "presence" : "absence";
}

Label ParseLabel(std::string_view text) {
  if (text == "presence") return Label::kPresence;
  if (text == "absence") return Label::kAbsence;
  throw Error(Errc::kParse, "unknown label '" + std::string(text) + "'");
}

LabeledDataset::LabeledDataset(std::vector<std::string> field_names)
    : names_(std::move(field_names)), columns_(names_.size()) {}

void LabeledDataset::Append(std::span<const std::uint64_t> values, Label label,
                            int iteration) {
  if (values.size() != names_.size())
    throw Error(Errc::kMissingField, "sample has " +
                                         std::to_string(values.size()) +
                                         " values, dataset has " +
                                         std::to_string(names_.size()) + " fields");
  for (std::size_t j = 0; j < values.size(); ++j) columns_[j].push_back(values[j]);
  labels_.push_back(static_cast<std::uint8_t>(label));
  iterations_.push_back(iteration);
}

std::vector<std::uint64_t> LabeledDataset::row(std::size_t r) const {
  std::vector<std::uint64_t> out(names_.size());
  for (std::size_t j = 0; j < names_.size(); ++j) out[j] = columns_[j][r];
  return out;
}

FieldMap LabeledDataset::row_map(std::size_t r) const {
  FieldMap m;
  for (std::size_t j = 0; j < names_.size(); ++j) m.emplace(names_[j], columns_[j][r]);
  return m;
}

std::size_t LabeledDataset::count(Label l) const {
  const auto want = static_cast<std::uint8_t>(l);
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), want));
}

LabeledDataset LabeledDataset::Subset(std::span<const std::size_t> rows) const {
  LabeledDataset out(names_);
  for (auto& c : out.columns_) c.reserve(rows.size());
  for (std::size_t r : rows) {
    for (std::size_t j = 0; j < names_.size(); ++j)
      out.columns_[j].push_back(columns_[j][r]);
    out.labels_.push_back(labels_[r]);
    out.iterations_.push_back(iterations_[r]);
  }
  return out;
}

LabeledDataset LabeledDataset::Prefix(std::size_t rows) const {
  rows = std::min(rows, size());
  LabeledDataset out(names_);
  for (std::size_t j = 0; j < names_.size(); ++j)
    out.columns_[j].assign(columns_[j].begin(), columns_[j].begin() + rows);
  out.labels_.assign(labels_.begin(), labels_.begin() + rows);
  out.iterations_.assign(iterations_.begin(), iterations_.begin() + rows);
  return out;
}

std::string LabeledDataset::ToCsv() const {
  std::string out;
  for (const auto& n : names_) {
    out += n;
    out += ',';
  }
  out += "label\n";
  for (std::size_t r = 0; r < size(); ++r) {
    for (std::size_t j = 0; j < names_.size(); ++j) {
      out += std::to_string(columns_[j][r]);
      out += ',';
    }
    out += LabelName(label(r));
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> SplitComma(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(text_util::Trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

LabeledDataset LabeledDataset::FromCsv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text_util::Trim(text.substr(start, end - start));
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  if (lines.empty()) throw Error(Errc::kParse, "CSV has no header");
  auto header = SplitComma(lines[0]);
  if (header.empty() || header.back() != "label")
    throw Error(Errc::kParse, "CSV header must end with 'label'");
  std::vector<std::string> names(header.begin(), header.end() - 1);
  LabeledDataset ds(names);
  std::vector<std::uint64_t> values(names.size());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto cells = SplitComma(lines[i]);
    if (cells.size() != header.size())
      throw Error(Errc::kParse, "CSV row " + std::to_string(i) + " has " +
                                    std::to_string(cells.size()) + " cells");
    for (std::size_t j = 0; j < names.size(); ++j)
      values[j] = text_util::ParseU64(cells[j]);
    ds.Append(values, ParseLabel(cells.back()));
  }
  return ds;
}

void LabeledDataset::WriteCsv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << ToCsv();
  if (!out) throw Error(Errc::kPersistence, "cannot write " + path.string());
}

LabeledDataset LabeledDataset::ReadCsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kPersistence, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return FromCsv(ss.str());
}

}  // namespace sdnfuzz
