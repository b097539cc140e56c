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


#include "sdnfuzz/sut.h"

#include <sys/socket.h>
#include <unistd.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "net.h"
#include "sdnfuzz/error.h"
#include "sdnfuzz/rng.h"
#include "sdnfuzz/sampler.h"

namespace sdnfuzz {

std::string_view FailureModeName(FailureMode mode) {
  return mode == FailureMode::kBroadcastStorm ? "broadcast_storm" : "switch_disconnect";
}

FailureMode ParseFailureMode(std::string_view text) {
  if (text == "switch_disconnect") return FailureMode::kSwitchDisconnect;
  if (text == "broadcast_storm") return FailureMode::kBroadcastStorm;
  throw Error(Errc::kParse, "unknown failure mode '" + std::string(text) + "'");
}

FailureOracle FailureOracle::FromJson(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kParse, std::string("oracle config: ") + e.what());
  }
  if (!doc.is_object()) throw Error(Errc::kInvalidConfig, "oracle config must be an object");
  FailureOracle o;
  try {
    o.message_type = doc.value("message_type", o.message_type);
    o.predicate = ParseCondition(doc.at("predicate").get<std::string>());
    o.noise_rate = doc.value("noise_rate", 0.0);
    o.failure_mode = ParseFailureMode(doc.value("failure_mode", "switch_disconnect"));
    o.seed = doc.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kInvalidConfig, std::string("oracle config: ") + e.what());
  }
  if (!(o.noise_rate >= 0.0 && o.noise_rate < 1.0))
    throw Error(Errc::kInvalidConfig, "noise_rate must lie in [0, 1)");
  return o;
}

FailureOracle FailureOracle::ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kInvalidConfig, "cannot read oracle " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return FromJson(ss.str());
}

std::string FailureOracle::ToJson() const {
  nlohmann::ordered_json doc;
  doc["message_type"] = message_type;
  doc["predicate"] = FormatCondition(predicate);
  doc["noise_rate"] = noise_rate;
  doc["failure_mode"] = FailureModeName(failure_mode);
  doc["seed"] = seed;
  return doc.dump(2);
}

void FailureOracle::Validate(const SchemaRegistry& registry) const {
  const auto schema = registry.by_name(message_type);
  if (!schema) throw Error(Errc::kInvalidConfig, "unknown message type '" + message_type + "'");
  ProcedureFor(message_type);
  for (const auto& f : predicate.fields())
    if (!schema->find(f))
      throw Error(Errc::kInvalidConfig, "predicate field '" + f + "' not in " + message_type);
}

bool FailureOracle::Fails(std::span<const std::uint64_t> values,
                          const MessageSchema& schema,
                          std::span<const std::uint8_t> session_bytes) const {
  const auto names = schema.field_names();
  const bool holds = BoundCondition(predicate, names)(values);
  if (noise_rate <= 0.0) return holds;
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed),
                                   static_cast<std::uint32_t>(seed >> 32),
                                   static_cast<std::uint32_t>(session_bytes.size())};
  for (std::size_t i = 0; i < session_bytes.size(); i += 4) {
    std::uint32_t w = 0;
    for (std::size_t k = i; k < std::min(i + 4, session_bytes.size()); ++k)
      w = (w << 8) | session_bytes[k];
    words.push_back(w);
  }
  std::seed_seq seq(words.begin(), words.end());
  Rng rng(seq);
  const bool flip = UniformUnit(rng) < noise_rate;
  return holds != flip;
}

FailureOracle DefaultOracle() {
  FailureOracle o;
  o.message_type = "packet_in";
  // The template already satisfies the version and eth_type atoms, so random
  // fuzzing only fails when it also picks ip_ttl and lands in [0, 4]. Range
  // atoms rather than an equality keep learned interval rules productive.
  o.predicate = ParseCondition("ip_ttl <= 4 AND version <= 5 AND eth_type >= 2048");
  o.noise_rate = 0.0;
  o.failure_mode = FailureMode::kSwitchDisconnect;
  o.seed = 0;
  return o;
}

double InitialFuzzHitRate(const Condition& predicate, const MessageSchema& schema) {
  const auto sets = FeasibleSets(predicate, schema);
  const double n = static_cast<double>(schema.field_count());
  double both = 1.0;      // product of P(field ok) when replaced with prob 1/2
  double kept = 1.0;      // product of [default ok]
  for (const auto& fs : sets) {
    const auto& f = schema.field(fs.index);
    const IntervalSet domain = IntervalSet::Range(f.domain_lo, f.domain_hi);
    unsigned __int128 inside = 0;
    for (const auto& iv : fs.allowed.intervals()) {
      const std::uint64_t lo = std::max(iv.lo, f.domain_lo);
      const std::uint64_t hi = std::min(iv.hi, f.domain_hi);
      if (lo <= hi) inside += static_cast<unsigned __int128>(hi - lo) + 1;
    }
    const double replaced = static_cast<double>(inside) / static_cast<double>(domain.size());
    const double unchanged = fs.allowed.contains(f.default_value) ? 1.0 : 0.0;
    both *= 0.5 * replaced + 0.5 * unchanged;
    kept *= unchanged;
  }
  // Condition on a nonempty subset: drop the all-unchanged outcome.
  const double empty = std::pow(0.5, n);
  return (both - empty * kept) / (1.0 - empty);
}

std::string_view ProcedureName(Procedure p) {
  return p == Procedure::kPingExchange ? "ping_exchange" : "switch_connect";
}

Procedure ProcedureFor(std::string_view message_type) {
  if (message_type == "packet_in" || message_type == "flow_removed")
    return Procedure::kPingExchange;
  if (message_type == "hello" || message_type == "barrier_reply")
    return Procedure::kSwitchConnect;
  throw Error(Errc::kInvalidConfig, "no switch-side procedure sends '" +
                                        std::string(message_type) + "'");
}

RunOutcome Detect(const Observations& obs) {
  RunOutcome out;
  if (obs.flood_directives > 0) {
    out.label = Label::kPresence;
    out.detail = FailureMode::kBroadcastStorm;
  } else if (obs.controller_closed && !obs.ping_ok) {
    out.label = Label::kPresence;
    out.detail = FailureMode::kSwitchDisconnect;
  }
  return out;
}

namespace {

Bytes Header(std::uint8_t type, std::uint16_t length, std::uint32_t xid) {
  Bytes b(length, 0);
  b[0] = 4;
  b[1] = type;
  b[2] = static_cast<std::uint8_t>(length >> 8);
  b[3] = static_cast<std::uint8_t>(length);
  for (int i = 0; i < 4; ++i) b[4 + i] = static_cast<std::uint8_t>(xid >> (24 - 8 * i));
  return b;
}

Bytes PacketOut(std::uint32_t xid, std::uint32_t port) {
  Bytes b = Header(kPacketOutType, 16, xid);
  for (int i = 0; i < 4; ++i) b[8 + i] = static_cast<std::uint8_t>(port >> (24 - 8 * i));
  return b;
}

std::uint32_t PacketOutPort(const Bytes& b) {
  if (b.size() < 12) return 0;
  return (std::uint32_t{b[8]} << 24) | (std::uint32_t{b[9]} << 16) |
         (std::uint32_t{b[10]} << 8) | b[11];
}

Bytes DefaultMessage(const SchemaRegistry& registry, std::string_view type,
                     std::uint32_t xid) {
  auto msg = ControlMessage::FromDefaults(registry.require(type));
  msg.set("xid", xid);
  return Encode(msg);
}

// One scripted controller step.
struct Step {
  bool receive;
  std::string_view type;  // schema name for receive steps
  std::uint8_t send_type = 0;
};

std::vector<Step> ControllerScript(Procedure p) {
  if (p == Procedure::kPingExchange) {
    return {{true, "hello"},      {false, "hello"},         {true, "packet_in"},
            {false, "packet_out"}, {true, "flow_removed"},   {true, "echo_request"},
            {false, "echo_reply"}};
  }
  return {{true, "hello"},        {false, "hello"},       {false, "barrier_request"},
          {true, "barrier_reply"}, {true, "echo_request"}, {false, "echo_reply"}};
}

}  // namespace

MockController::MockController(const SchemaRegistry& registry, FailureOracle oracle,
                               int threads, Endpoint listen)
    : registry_(registry), oracle_(std::move(oracle)), host_(listen.host) {
  oracle_.Validate(registry_);
  procedure_ = ProcedureFor(oracle_.message_type);
  auto fd = net::Listen(listen.host, listen.port, 256);
  port_ = net::LocalPort(fd.get());
  listen_fd_ = fd.release();
  for (int i = 0; i < std::max(threads, 1); ++i)
    threads_.emplace_back([this] { AcceptLoop(); });
}

MockController::~MockController() {
  Stop();
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void MockController::Stop() {
  if (stopping_.exchange(true)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  for (auto& t : threads_) t.join();
}

void MockController::AcceptLoop() {
  while (!stopping_.load()) {
    net::UniqueFd fd;
    try {
      fd = net::Accept(listen_fd_, net::Clock::now() + std::chrono::milliseconds(200));
    } catch (const Error&) {
      return;  // listener shut down
    }
    if (!fd.valid()) continue;
    Serve(fd.release());
  }
}

void MockController::Serve(int raw_fd) {
  net::UniqueFd fd(raw_fd);
  const auto deadline = net::Clock::now() + std::chrono::seconds(10);
  Bytes received;  // everything read so far, for the noise draw
  std::uint32_t xid = 0;
  try {
    for (const auto& step : ControllerScript(procedure_)) {
      if (!step.receive) {
        Bytes out;
        if (step.type == "hello") out = Header(0, 8, xid);
        else if (step.type == "barrier_request") out = Header(20, 8, xid);
        else if (step.type == "packet_out") out = PacketOut(xid, 1);
        else out = Header(kEchoReplyType, 8, xid);
        net::SendAll(fd.get(), out);
        continue;
      }
      // Frame by what the script expects, not by what the header claims, so a
      // fuzzed length field cannot desynchronise the ground truth.
      Bytes msg;
      SchemaPtr schema;
      if (step.type == "echo_request") {
        msg.resize(kHeaderBytes);
      } else {
        schema = registry_.require(step.type);
        msg.resize(schema->total_bytes());
      }
      if (net::RecvExact(fd.get(), msg, deadline) != net::ReadStatus::kOk) return;
      received.insert(received.end(), msg.begin(), msg.end());
      if (step.type == "hello")
        xid = (std::uint32_t{msg[4]} << 24) | (std::uint32_t{msg[5]} << 16) |
              (std::uint32_t{msg[6]} << 8) | msg[7];
      if (!schema || step.type != oracle_.message_type) continue;

      const auto decoded = DecodeAs(msg, schema);
      if (!oracle_.Fails(decoded.values(), *schema, received)) continue;
      if (oracle_.failure_mode == FailureMode::kSwitchDisconnect) {
        net::GracefulClose(fd, net::Clock::now() + std::chrono::seconds(2));
        served_.fetch_add(1);
        return;
      }
      for (int i = 0; i < 3; ++i) net::SendAll(fd.get(), PacketOut(xid, kFloodPort));
    }
    net::GracefulClose(fd, net::Clock::now() + std::chrono::seconds(2));
  } catch (const Error&) {
    // The switch side sees the broken session and reports it.
  }
  served_.fetch_add(1);
}

RunOutcome RunProcedure(const Endpoint& endpoint, Procedure procedure,
                        const SchemaRegistry& registry, std::uint32_t xid,
                        std::chrono::milliseconds timeout) {
  const auto start = net::Clock::now();
  const auto deadline = start + timeout;
  net::UniqueFd fd;
  try {
    fd = net::Connect(endpoint.host, endpoint.port, timeout);
  } catch (const Error& e) {
    throw Error(Errc::kSutUnavailable, e.what());
  }

  Observations obs;
  bool forwarded = false;
  // Reads until a message of type `want` arrives. False when the controller
  // closed the connection first.
  auto expect = [&](std::uint8_t want) {
    Bytes msg;
    while (true) {
      const auto st = net::RecvFramed(fd.get(), msg, deadline);
      if (st == net::ReadStatus::kTimeout) throw Error(Errc::kTimeout, "switch read timed out");
      if (st == net::ReadStatus::kEof) {
        obs.controller_closed = true;
        return false;
      }
      const std::uint8_t type = PeekType(msg);
      if (type == kPacketOutType && PacketOutPort(msg) == kFloodPort) {
        ++obs.flood_directives;
        continue;
      }
      if (type == want) return true;
    }
  };
  auto send = [&](const Bytes& b) {
    try {
      net::SendAll(fd.get(), b);
      return true;
    } catch (const Error& e) {
      if (e.code() != Errc::kConnectionReset) throw;
      obs.controller_closed = true;
      return false;
    }
  };

  const Bytes echo = Header(kEchoRequestType, 8, xid);
  if (procedure == Procedure::kPingExchange) {
    if (send(DefaultMessage(registry, "hello", xid)) && expect(0) &&
        send(DefaultMessage(registry, "packet_in", xid)) &&
        (forwarded = expect(kPacketOutType)) &&
        send(DefaultMessage(registry, "flow_removed", xid)) && send(echo) &&
        expect(kEchoReplyType)) {
      obs.ping_ok = forwarded;
    }
  } else {
    if (send(DefaultMessage(registry, "hello", xid)) && expect(0) && expect(20) &&
        send(DefaultMessage(registry, "barrier_reply", xid)) && send(echo) &&
        expect(kEchoReplyType)) {
      obs.ping_ok = true;
    }
  }
  // Wait for the controller to finish so no session outlives its run.
  if (!obs.controller_closed) {
    Bytes rest;
    ::shutdown(fd.get(), SHUT_WR);
    net::RecvFramed(fd.get(), rest, deadline);
  }
  RunOutcome out = Detect(obs);
  out.duration_ms =
      std::chrono::duration<double, std::milli>(net::Clock::now() - start).count();
  return out;
}

}  // namespace sdnfuzz
