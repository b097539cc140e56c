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

#ifndef SDNFUZZ_ERROR_H_
#define SDNFUZZ_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace sdnfuzz {

enum class Errc {
  // codec
  kUnknownMessageType,
  kTruncatedMessage,
  kTrailingBytes,
  kValueOverflow,
  kSchemaValidation,
  kUnknownField,
  // proxy
  kLengthFieldInvalid,
  kUpstreamUnreachable,
  kConnectionReset,
  kSocket,
  // sampler / learner / planner
  kUnsatisfiable,
  kMissingField,
  kParse,
  kTooFewSamples,
  // sut / orchestrator
  kTimeout,
  kSutUnavailable,
  kPersistence,
  kInvalidConfig,
};

std::string_view ErrcName(Errc code);

// All recoverable failures in the library surface as this exception type; the
// code identifies the contract-level error kind.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(ErrcName(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace sdnfuzz

#endif  // SDNFUZZ_ERROR_H_
