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


// Simulated system under test: a scripted mock controller, a mock switch
// that runs a test procedure through the proxy, and failure detection. A
// planted predicate over the target message decides whether the controller
// misbehaves, which gives the learner a known ground truth.

#ifndef SDNFUZZ_SUT_H_
#define SDNFUZZ_SUT_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "sdnfuzz/codec.h"
#include "sdnfuzz/condition.h"
#include "sdnfuzz/dataset.h"
#include "sdnfuzz/proxy.h"

namespace sdnfuzz {

enum class FailureMode { kSwitchDisconnect, kBroadcastStorm };
std::string_view FailureModeName(FailureMode mode);
// Throws Error{kParse}.
FailureMode ParseFailureMode(std::string_view text);

struct FailureOracle {
  std::string message_type = "packet_in";
  Condition predicate;
  double noise_rate = 0.0;
  FailureMode failure_mode = FailureMode::kSwitchDisconnect;
  std::uint64_t seed = 0;

  // JSON object {message_type, predicate, noise_rate, failure_mode, seed};
  // the predicate uses the rule-file condition syntax. Throws
  // Error{kInvalidConfig} / Error{kParse}.
  static FailureOracle FromJson(std::string_view text);
  static FailureOracle ReadFile(const std::filesystem::path& path);
  std::string ToJson() const;

  // Throws Error{kInvalidConfig} when the message type is unknown, not sent
  // by the switch, or the predicate names fields outside its schema.
  void Validate(const SchemaRegistry& registry) const;

  // Whether the controller fails on a message with these field values.
  // `session_bytes` (everything the controller received so far) seeds the
  // label flip, so a given run always gets the same verdict.
  bool Fails(std::span<const std::uint64_t> values, const MessageSchema& schema,
             std::span<const std::uint8_t> session_bytes) const;
};

// The acceptance-run oracle on packet_in.
FailureOracle DefaultOracle();

// Probability that one random-subset, valid-value fuzz of the all-defaults
// message of `schema` satisfies `predicate`, computed exactly from the field
// domains.
double InitialFuzzHitRate(const Condition& predicate, const MessageSchema& schema);

enum class Procedure { kPingExchange, kSwitchConnect };
std::string_view ProcedureName(Procedure p);
// packet_in and flow_removed go through the ping exchange; hello and
// barrier_reply through switch connection. Throws Error{kInvalidConfig}.
Procedure ProcedureFor(std::string_view message_type);

struct Observations {
  bool controller_closed = false;
  bool ping_ok = false;
  int flood_directives = 0;
};

struct RunOutcome {
  Label label = Label::kAbsence;
  std::optional<FailureMode> detail;
  double duration_ms = 0.0;
};

// A close only counts when the ping also failed; any flood directive is a
// broadcast storm.
RunOutcome Detect(const Observations& obs);

// Controller side of the SUT. Serves each connection with the scripted
// sequence of the oracle's procedure on `threads` accept threads.
class MockController {
 public:
  MockController(const SchemaRegistry& registry, FailureOracle oracle,
                 int threads = 4, Endpoint listen = {});
  ~MockController();
  MockController(const MockController&) = delete;
  MockController& operator=(const MockController&) = delete;

  Endpoint endpoint() const { return {host_, port_}; }
  const FailureOracle& oracle() const noexcept { return oracle_; }
  std::size_t sessions_served() const noexcept { return served_.load(); }
  void Stop();

 private:
  void AcceptLoop();
  void Serve(int fd);

  const SchemaRegistry& registry_;
  FailureOracle oracle_;
  Procedure procedure_;
  std::string host_;
  std::uint16_t port_ = 0;
  int listen_fd_ = -1;
  std::atomic<bool> stopping_{false};
  std::atomic<std::size_t> served_{0};
  std::vector<std::thread> threads_;
};

// Switch side: connects to `endpoint` (normally the proxy), plays the
// procedure with default-valued messages whose xid is `xid`, and reports the
// detected outcome. Throws Error{kSutUnavailable}, Error{kTimeout},
// Error{kConnectionReset}.
RunOutcome RunProcedure(const Endpoint& endpoint, Procedure procedure,
                        const SchemaRegistry& registry, std::uint32_t xid,
                        std::chrono::milliseconds timeout = std::chrono::milliseconds(5000));

// Packet-out style directive the controller sends in reply to a packet_in.
inline constexpr std::uint8_t kPacketOutType = 13;
inline constexpr std::uint8_t kEchoRequestType = 2;
inline constexpr std::uint8_t kEchoReplyType = 3;
inline constexpr std::uint32_t kFloodPort = 0xfffffffb;

}  // namespace sdnfuzz

#endif  // SDNFUZZ_SUT_H_
