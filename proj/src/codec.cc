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

#include "sdnfuzz/codec.h"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "sdnfuzz/error.h"

#ifndef SDNFUZZ_SCHEMA_DIR
#define SDNFUZZ_SCHEMA_DIR "schemas"
#endif

namespace sdnfuzz {

std::string_view ErrcName(Errc code) {
  switch (code) {
    case Errc::kUnknownMessageType: return "UnknownMessageType";
    case Errc::kTruncatedMessage: return "TruncatedMessage";
    case Errc::kTrailingBytes: return "TrailingBytes";
    case Errc::kValueOverflow: return "ValueOverflow";
    case Errc::kSchemaValidation: return "SchemaValidation";
    case Errc::kUnknownField: return "UnknownField";
    case Errc::kLengthFieldInvalid: return "LengthFieldInvalid";
    case Errc::kUpstreamUnreachable: return "UpstreamUnreachable";
    case Errc::kConnectionReset: return "ConnectionReset";
    case Errc::kSocket: return "Socket";
    case Errc::kUnsatisfiable: return "Unsatisfiable";
    case Errc::kMissingField: return "MissingField";
    case Errc::kParse: return "Parse";
    case Errc::kTooFewSamples: return "TooFewSamples";
    case Errc::kTimeout: return "Timeout";
    case Errc::kSutUnavailable: return "SutUnavailable";
    case Errc::kPersistence: return "PersistenceFailure";
    case Errc::kInvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

MessageSchema::MessageSchema(std::string type_name,
                             std::uint8_t header_type_code,
                             std::size_t total_bytes,
                             std::vector<FieldSpec> fields,
                             std::string description)
    : type_name_(std::move(type_name)),
      header_type_code_(header_type_code),
      total_bytes_(total_bytes),
      fields_(std::move(fields)),
      description_(std::move(description)) {
  auto fail = [&](const std::string& why) {
    throw Error(Errc::kSchemaValidation, type_name_ + ": " + why);
  };
  if (total_bytes_ < kHeaderBytes)
    fail("total_bytes below the 8-byte header");
  std::size_t expected_offset = 0;
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    const FieldSpec& f = fields_[i];
    if (f.name.empty()) fail("field " + std::to_string(i) + " has no name");
    if (f.width_bits == 0 || f.width_bits > 64)
      fail(f.name + ": width_bits must be in [1, 64]");
    if (f.offset_bits != expected_offset)
      fail(f.name + ": fields must be contiguous and in order");
    if (f.domain_lo > f.domain_hi) fail(f.name + ": domain_lo > domain_hi");
    if (f.domain_hi > f.raw_max()) fail(f.name + ": domain exceeds width");
    if (f.default_value > f.raw_max())
      fail(f.name + ": default exceeds width");
    if (!by_name_.emplace(f.name, i).second)
      fail("duplicate field name " + f.name);
    expected_offset += f.width_bits;
  }
  if (expected_offset != total_bits())
    fail("field widths sum to " + std::to_string(expected_offset) +
         " bits, expected " + std::to_string(total_bits()));
}

std::optional<std::size_t> MessageSchema::find(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::size_t MessageSchema::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw Error(Errc::kUnknownField,
              std::string(name) + " not in schema " + type_name_);
}

std::vector<std::string> MessageSchema::field_names() const {
  std::vector<std::string> names;
  names.reserve(fields_.size());
  for (const auto& f : fields_) names.push_back(f.name);
  return names;
}

void SchemaRegistry::add(SchemaPtr schema) {
  for (const auto& s : schemas_) {
    if (s->type_name() == schema->type_name())
      throw Error(Errc::kSchemaValidation,
                  "duplicate schema " + schema->type_name());
    if (s->header_type_code() == schema->header_type_code())
      throw Error(Errc::kSchemaValidation,
                  "duplicate header type code for " + schema->type_name());
  }
  schemas_.push_back(std::move(schema));
}

SchemaPtr SchemaRegistry::by_type_code(std::uint8_t code) const {
  for (const auto& s : schemas_)
    if (s->header_type_code() == code) return s;
  return nullptr;
}

SchemaPtr SchemaRegistry::by_name(std::string_view name) const {
  for (const auto& s : schemas_)
    if (s->type_name() == name) return s;
  return nullptr;
}

SchemaPtr SchemaRegistry::require(std::string_view name) const {
  if (auto s = by_name(name)) return s;
  throw Error(Errc::kUnknownMessageType,
              "no schema named " + std::string(name));
}

ControlMessage::ControlMessage(SchemaPtr schema,
                               std::vector<std::uint64_t> values)
    : schema_(std::move(schema)), values_(std::move(values)) {
  if (!schema_ || values_.size() != schema_->field_count())
    throw Error(Errc::kSchemaValidation,
                "value count does not match schema field count");
}

ControlMessage ControlMessage::FromDefaults(SchemaPtr schema) {
  std::vector<std::uint64_t> values;
  values.reserve(schema->field_count());
  for (const auto& f : schema->fields()) values.push_back(f.default_value);
  return ControlMessage(std::move(schema), std::move(values));
}

std::uint64_t ControlMessage::value(std::string_view name) const {
  return values_[schema_->index_of(name)];
}

void ControlMessage::set(std::string_view name, std::uint64_t v) {
  values_[schema_->index_of(name)] = v;
}

std::map<std::string, std::uint64_t> ControlMessage::to_map() const {
  std::map<std::string, std::uint64_t> out;
  for (std::size_t i = 0; i < values_.size(); ++i)
    out.emplace(schema_->field(i).name, values_[i]);
  return out;
}

namespace {

// Reads `width` bits starting at absolute bit `offset`, MSB-first.
std::uint64_t ReadBits(std::span<const std::uint8_t> bytes,
                       std::uint32_t offset, std::uint32_t width) {
  std::uint64_t v = 0;
  std::uint32_t bit = offset;
  std::uint32_t remaining = width;
  while (remaining > 0) {
    const std::uint32_t in_byte = bit % 8;
    const std::uint32_t take = std::min<std::uint32_t>(8 - in_byte, remaining);
    const std::uint8_t byte = bytes[bit / 8];
    const std::uint8_t chunk =
        static_cast<std::uint8_t>(byte >> (8 - in_byte - take)) &
        static_cast<std::uint8_t>((1u << take) - 1);
    v = (v << take) | chunk;
    bit += take;
    remaining -= take;
  }
  return v;
}

void WriteBits(std::span<std::uint8_t> bytes, std::uint32_t offset,
               std::uint32_t width, std::uint64_t value) {
  std::uint32_t bit = offset;
  std::uint32_t remaining = width;
  while (remaining > 0) {
    const std::uint32_t in_byte = bit % 8;
    const std::uint32_t take = std::min<std::uint32_t>(8 - in_byte, remaining);
    const std::uint8_t mask = static_cast<std::uint8_t>((1u << take) - 1);
    const std::uint8_t chunk =
        static_cast<std::uint8_t>(value >> (remaining - take)) & mask;
    const std::uint32_t shift = 8 - in_byte - take;
    std::uint8_t& dst = bytes[bit / 8];
    dst = static_cast<std::uint8_t>((dst & ~(mask << shift)) | (chunk << shift));
    bit += take;
    remaining -= take;
  }
}

}  // namespace

std::uint8_t PeekType(std::span<const std::uint8_t> bytes) {
  return bytes[kHeaderTypeOffset];
}

std::uint16_t PeekLength(std::span<const std::uint8_t> bytes) {
  return static_cast<std::uint16_t>((bytes[kHeaderLengthOffset] << 8) |
                                    bytes[kHeaderLengthOffset + 1]);
}

ControlMessage Decode(std::span<const std::uint8_t> bytes,
                      const SchemaRegistry& registry) {
  if (bytes.size() < kHeaderBytes)
    throw Error(Errc::kTruncatedMessage,
                std::to_string(bytes.size()) + " bytes, header needs 8");
  const std::uint8_t type = PeekType(bytes);
  SchemaPtr schema = registry.by_type_code(type);
  if (!schema)
    throw Error(Errc::kUnknownMessageType,
                "header type " + std::to_string(type));
  return DecodeAs(bytes, schema);
}

ControlMessage DecodeAs(std::span<const std::uint8_t> bytes,
                        const SchemaPtr& schema) {
  if (bytes.size() < schema->total_bytes())
    throw Error(Errc::kTruncatedMessage,
                schema->type_name() + " needs " +
                    std::to_string(schema->total_bytes()) + " bytes, got " +
                    std::to_string(bytes.size()));
  if (bytes.size() > schema->total_bytes())
    throw Error(Errc::kTrailingBytes,
                schema->type_name() + " is " +
                    std::to_string(schema->total_bytes()) + " bytes, got " +
                    std::to_string(bytes.size()));
  std::vector<std::uint64_t> values;
  values.reserve(schema->field_count());
  for (const auto& f : schema->fields())
    values.push_back(ReadBits(bytes, f.offset_bits, f.width_bits));
  return ControlMessage(schema, std::move(values));
}

Bytes Encode(const ControlMessage& msg) {
  const MessageSchema& schema = msg.schema();
  Bytes out(schema.total_bytes(), 0);
  for (std::size_t i = 0; i < schema.field_count(); ++i) {
    const FieldSpec& f = schema.field(i);
    const std::uint64_t v = msg.value(i);
    if (v > f.raw_max())
      throw Error(Errc::kValueOverflow,
                  f.name + "=" + std::to_string(v) + " exceeds " +
                      std::to_string(f.width_bits) + " bits");
    WriteBits(out, f.offset_bits, f.width_bits, v);
  }
  return out;
}

SchemaRegistry LoadSchemas(std::string_view document) {
  SchemaRegistry registry;
  auto blank = document.find_first_not_of(" \t\r\n");
  if (blank == std::string_view::npos) return registry;

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kSchemaValidation, e.what());
  }
  if (!doc.contains("schemas")) return registry;

  try {
    for (const auto& js : doc.at("schemas")) {
      std::vector<FieldSpec> fields;
      std::uint32_t offset = 0;
      for (const auto& jf : js.at("fields")) {
        FieldSpec f;
        f.name = jf.at("name").get<std::string>();
        f.width_bits = jf.at("width_bits").get<std::uint32_t>();
        f.offset_bits = offset;
        if (f.width_bits == 0 || f.width_bits > 64)
          throw Error(Errc::kSchemaValidation,
                      f.name + ": width_bits must be in [1, 64]");
        f.domain_lo = jf.value("domain_lo", std::uint64_t{0});
        f.domain_hi = jf.contains("domain_hi")
                          ? jf.at("domain_hi").get<std::uint64_t>()
                          : f.raw_max();
        f.default_value = jf.value("default", f.domain_lo);
        offset += f.width_bits;
        fields.push_back(std::move(f));
      }
      const auto code = js.at("header_type_code").get<std::uint32_t>();
      if (code > 0xff)
        throw Error(Errc::kSchemaValidation, "header_type_code above 255");
      registry.add(std::make_shared<MessageSchema>(
          js.at("type_name").get<std::string>(),
          static_cast<std::uint8_t>(code),
          js.at("total_bytes").get<std::size_t>(), std::move(fields),
          js.value("description", std::string{})));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kSchemaValidation, e.what());
  }
  return registry;
}

SchemaRegistry LoadSchemasFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(Errc::kSchemaValidation, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return LoadSchemas(ss.str());
}

std::filesystem::path DefaultSchemaPath() {
  if (const char* env = std::getenv("SDNFUZZ_SCHEMAS"); env && *env)
    return env;
  return std::filesystem::path(SDNFUZZ_SCHEMA_DIR) / "openflow13.json";
}

std::string ToHex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 0xf]);
  }
  return s;
}

}  // namespace sdnfuzz
