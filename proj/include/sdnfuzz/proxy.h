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


// TCP man-in-the-middle for the control channel. The switch connects to the
// proxy, the proxy connects upstream to the controller, and exactly one
// selected message is handed to a fuzz hook on its way through.

#ifndef SDNFUZZ_PROXY_H_
#define SDNFUZZ_PROXY_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdnfuzz/codec.h"
#include "sdnfuzz/error.h"

namespace sdnfuzz {

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
};

enum class Direction { kToController, kToSwitch };

struct InterceptConfig {
  Endpoint listen;
  Endpoint upstream;
  std::string target_type;
  int target_ordinal = 1;
  // Which way the target message travels.
  Direction direction = Direction::kToController;
  std::chrono::milliseconds session_timeout{10000};
};

// Incremental framing by the 16-bit header length.
class Segmenter {
 public:
  // Appends `data` and returns every message it completes. Throws
  // Error{kLengthFieldInvalid}; the segmenter is unusable afterwards.
  std::vector<Bytes> Feed(std::span<const std::uint8_t> data);
  const Bytes& residual() const noexcept { return buffer_; }
  // Returns and clears the residual.
  Bytes TakeResidual();

 private:
  Bytes buffer_;
};

struct SegmentResult {
  std::vector<Bytes> messages;
  Bytes residual;
};

// One-shot framing of a whole buffer.
SegmentResult Segment(std::span<const std::uint8_t> stream);

// Receives the decoded target message, returns the bytes to forward instead.
using FuzzHook = std::function<Bytes(const ControlMessage&)>;

struct SessionRecord {
  std::uint64_t session_id = 0;
  bool target_seen = false;
  std::size_t bytes_from_switch = 0;
  std::size_t bytes_to_controller = 0;
  std::size_t bytes_from_controller = 0;
  std::size_t bytes_to_switch = 0;
  std::optional<Errc> error;
  std::string error_detail;

  bool ok() const { return !error.has_value(); }
  // key=value log line.
  std::string ToLogLine() const;
};

class Proxy {
 public:
  // Binds the listener. Throws Error{kUnknownMessageType} when the target
  // type is not registered, Error{kInvalidConfig} for a bad ordinal.
  Proxy(InterceptConfig config, const SchemaRegistry& registry);

  std::uint16_t port() const noexcept { return port_; }
  const InterceptConfig& config() const noexcept { return config_; }

  // Accepts one switch connection and relays it until both sides close.
  // Errors are recorded, not thrown. When no connection arrives before the
  // session timeout the record carries kTimeout.
  SessionRecord ServeOne(const FuzzHook& hook);

  // Unblocks a pending ServeOne.
  void Shutdown();

  ~Proxy();
  Proxy(const Proxy&) = delete;
  Proxy& operator=(const Proxy&) = delete;

 private:
  InterceptConfig config_;
  SchemaPtr target_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::uint64_t next_session_ = 1;
};

}  // namespace sdnfuzz

#endif  // SDNFUZZ_PROXY_H_
