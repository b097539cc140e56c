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

// Declarative, bit-exact codec for fixed-size control messages.
//
// A MessageSchema is an ordered list of fields packed MSB-first (network bit
// order) with no gaps. Every message starts with the common 8-byte header
// (version, type, length, xid); the header `type` byte selects the schema
// when decoding from the wire.

#ifndef SDNFUZZ_CODEC_H_
#define SDNFUZZ_CODEC_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sdnfuzz {

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::size_t kHeaderBytes = 8;
inline constexpr std::size_t kHeaderTypeOffset = 1;
inline constexpr std::size_t kHeaderLengthOffset = 2;

struct FieldSpec {
  std::string name;
  std::uint32_t offset_bits = 0;
  std::uint32_t width_bits = 0;
  std::uint64_t domain_lo = 0;
  std::uint64_t domain_hi = 0;
  // Value the mock switch puts on the wire before any fuzzing.
  std::uint64_t default_value = 0;

  // Largest raw value the field can hold: 2^width_bits - 1.
  std::uint64_t raw_max() const noexcept {
    return width_bits >= 64 ? ~std::uint64_t{0}
                            : (std::uint64_t{1} << width_bits) - 1;
  }
};

class MessageSchema {
 public:
  MessageSchema(std::string type_name, std::uint8_t header_type_code,
                std::size_t total_bytes, std::vector<FieldSpec> fields,
                std::string description = {});

  const std::string& type_name() const noexcept { return type_name_; }
  std::uint8_t header_type_code() const noexcept { return header_type_code_; }
  std::size_t total_bytes() const noexcept { return total_bytes_; }
  std::size_t total_bits() const noexcept { return total_bytes_ * 8; }
  const std::string& description() const noexcept { return description_; }

  std::span<const FieldSpec> fields() const noexcept { return fields_; }
  std::size_t field_count() const noexcept { return fields_.size(); }
  const FieldSpec& field(std::size_t i) const { return fields_.at(i); }

  std::optional<std::size_t> find(std::string_view name) const;
  // Throws Error{kUnknownField}.
  std::size_t index_of(std::string_view name) const;
  std::vector<std::string> field_names() const;

 private:
  std::string type_name_;
  std::uint8_t header_type_code_;
  std::size_t total_bytes_;
  std::vector<FieldSpec> fields_;
  std::string description_;
  std::map<std::string, std::size_t, std::less<>> by_name_;
};

using SchemaPtr = std::shared_ptr<const MessageSchema>;

// Immutable after load; safe to share across threads.
class SchemaRegistry {
 public:
  void add(SchemaPtr schema);

  SchemaPtr by_type_code(std::uint8_t code) const;
  SchemaPtr by_name(std::string_view name) const;
  // Throws Error{kUnknownMessageType} when absent.
  SchemaPtr require(std::string_view name) const;

  std::size_t size() const noexcept { return schemas_.size(); }
  bool empty() const noexcept { return schemas_.empty(); }
  const std::vector<SchemaPtr>& all() const noexcept { return schemas_; }

 private:
  std::vector<SchemaPtr> schemas_;
};

// One decoded message. values[i] belongs to schema->field(i).
class ControlMessage {
 public:
  ControlMessage() = default;
  ControlMessage(SchemaPtr schema, std::vector<std::uint64_t> values);

  // Message with every field at its schema default.
  static ControlMessage FromDefaults(SchemaPtr schema);

  const MessageSchema& schema() const { return *schema_; }
  const SchemaPtr& schema_ptr() const noexcept { return schema_; }
  std::span<const std::uint64_t> values() const noexcept { return values_; }

  std::uint64_t value(std::size_t index) const { return values_.at(index); }
  std::uint64_t value(std::string_view name) const;
  void set(std::size_t index, std::uint64_t v) { values_.at(index) = v; }
  void set(std::string_view name, std::uint64_t v);

  std::map<std::string, std::uint64_t> to_map() const;

  friend bool operator==(const ControlMessage& a, const ControlMessage& b) {
    return a.schema_ == b.schema_ && a.values_ == b.values_;
  }

 private:
  SchemaPtr schema_;
  std::vector<std::uint64_t> values_;
};

// Decodes a single framed message; the header type byte picks the schema.
ControlMessage Decode(std::span<const std::uint8_t> bytes,
                      const SchemaRegistry& registry);
// Decodes against a known schema, ignoring what the header claims.
ControlMessage DecodeAs(std::span<const std::uint8_t> bytes,
                        const SchemaPtr& schema);

Bytes Encode(const ControlMessage& msg);

// Header peeks on raw bytes; callers guarantee at least kHeaderBytes.
std::uint8_t PeekType(std::span<const std::uint8_t> bytes);
std::uint16_t PeekLength(std::span<const std::uint8_t> bytes);

// Parses a schema definition document (JSON). An empty document or one with
// no schemas yields an empty registry.
SchemaRegistry LoadSchemas(std::string_view document);
SchemaRegistry LoadSchemasFile(const std::filesystem::path& path);

// Location of the shipped OpenFlow definition file, honouring the
// SDNFUZZ_SCHEMAS environment variable.
std::filesystem::path DefaultSchemaPath();

std::string ToHex(std::span<const std::uint8_t> bytes);

}  // namespace sdnfuzz

#endif  // SDNFUZZ_CODEC_H_
