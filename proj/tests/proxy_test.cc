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


#include "sdnfuzz/proxy.h"

#include <gtest/gtest.h>
#include <sys/socket.h>

#include <future>
#include <thread>

#include "net.h"
#include "test_support.h"

namespace sdnfuzz {
namespace {

using namespace std::chrono_literals;

Bytes Cat(std::initializer_list<Bytes> parts) {
  Bytes out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

Bytes ReadToEof(int fd) {
  Bytes out;
  std::uint8_t buf[4096];
  while (true) {
    const auto n = ::recv(fd, buf, sizeof buf, 0);
    if (n <= 0) break;
    out.insert(out.end(), buf, buf + n);
  }
  return out;
}

class ProxyTest : public ::testing::Test {
 protected:
  struct Outcome {
    SessionRecord record;
    Bytes at_controller;
    Bytes at_switch;
  };

  ControlMessage Msg(const char* type, std::uint64_t xid) {
    auto m = ControlMessage::FromDefaults(reg_.require(type));
    m.set("xid", xid);
    return m;
  }

  // Switch writes `from_switch` in small chunks and half-closes; the
  // controller reads to EOF, answers with `from_controller` and closes.
  Outcome Run(InterceptConfig cfg, const Bytes& from_switch, const Bytes& from_controller,
              const FuzzHook& hook) {
    auto upstream = net::Listen("127.0.0.1", 0);
    cfg.upstream.port = net::LocalPort(upstream.get());
    Proxy proxy(cfg, reg_);
    auto controller = std::async(std::launch::async, [&] {
      auto c = net::Accept(upstream.get(), net::Clock::now() + 5s);
      if (!c.valid()) return Bytes{};
      Bytes got = ReadToEof(c.get());
      try {
        net::SendAll(c.get(), from_controller);
      } catch (const Error&) {
      }
      return got;
    });
    auto serve = std::async(std::launch::async, [&] { return proxy.ServeOne(hook); });
    auto sw = net::Connect("127.0.0.1", proxy.port(), 2s);
    try {
      for (std::size_t off = 0; off < from_switch.size(); off += 5) {
        const auto len = std::min<std::size_t>(5, from_switch.size() - off);
        net::SendAll(sw.get(), std::span(from_switch).subspan(off, len));
        if (off % 40 == 0) std::this_thread::sleep_for(1ms);
      }
    } catch (const Error&) {
    }
    ::shutdown(sw.get(), SHUT_WR);
    Outcome out;
    out.at_switch = ReadToEof(sw.get());
    out.record = serve.get();
    out.at_controller = controller.get();
    return out;
  }

  InterceptConfig Config(const char* target, int ordinal = 1) {
    InterceptConfig c;
    c.target_type = target;
    c.target_ordinal = ordinal;
    c.session_timeout = 5000ms;
    return c;
  }

  SchemaRegistry reg_ = testing::ShippedRegistry();
};

TEST_F(ProxyTest, SegmentsBackToBackMessages) {
  const Bytes h1 = Encode(Msg("hello", 1)), h2 = Encode(Msg("hello", 2));
  const auto r = Segment(Cat({h1, h2}));
  ASSERT_EQ(r.messages.size(), 2u);
  EXPECT_EQ(r.messages[0], h1);
  EXPECT_EQ(r.messages[1], h2);
  EXPECT_TRUE(r.residual.empty());
  EXPECT_TRUE(Segment({}).messages.empty());
}

TEST_F(ProxyTest, SegmenterReassemblesArbitraryChunks) {
  const Bytes stream = Cat({Encode(Msg("hello", 1)), Encode(Msg("packet_in", 2)),
                            Encode(Msg("flow_removed", 3)), Encode(Msg("barrier_reply", 4))});
  Rng rng = MakeRng(1);
  for (int trial = 0; trial < 200; ++trial) {
    Segmenter s;
    Bytes joined;
    std::size_t count = 0, off = 0;
    while (off < stream.size()) {
      const std::size_t len = std::min<std::size_t>(1 + rng() % 23, stream.size() - off);
      for (auto& m : s.Feed(std::span(stream).subspan(off, len))) {
        joined.insert(joined.end(), m.begin(), m.end());
        ++count;
      }
      off += len;
    }
    EXPECT_EQ(count, 4u);
    EXPECT_EQ(joined, stream);
    EXPECT_TRUE(s.residual().empty());
  }
  // A partial trailing message stays in the residual.
  const auto r = Segment(std::span(stream).first(stream.size() - 3));
  EXPECT_EQ(r.messages.size(), 3u);
  EXPECT_EQ(r.residual.size(), Encode(Msg("barrier_reply", 4)).size() - 3);
}

TEST_F(ProxyTest, ShortLengthFieldIsRejected) {
  Bytes bad = {4, 0, 0, 4, 0, 0, 0, 0};
  try {
    Segment(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kLengthFieldInvalid);
  }
}

TEST_F(ProxyTest, IdentityHookIsTransparent) {
  const Bytes up = Cat({Encode(Msg("hello", 1)), Encode(Msg("packet_in", 2)),
                        Encode(Msg("flow_removed", 3))});
  const Bytes down = Cat({Encode(Msg("hello", 9)), Encode(Msg("barrier_request", 10))});
  int calls = 0;
  const auto out = Run(Config("packet_in"), up, down, [&](const ControlMessage& m) {
    ++calls;
    EXPECT_EQ(m.value("xid"), 2u);
    return Encode(m);
  });
  EXPECT_TRUE(out.record.ok()) << out.record.ToLogLine();
  EXPECT_TRUE(out.record.target_seen);
  EXPECT_EQ(calls, 1);
  EXPECT_EQ(out.at_controller, up);
  EXPECT_EQ(out.at_switch, down);
  EXPECT_EQ(out.record.bytes_from_switch, up.size());
  EXPECT_EQ(out.record.bytes_to_switch, down.size());
}

TEST_F(ProxyTest, HookFiresOnlyForTheChosenOrdinal) {
  const Bytes up = Cat({Encode(Msg("packet_in", 1)), Encode(Msg("packet_in", 2)),
                        Encode(Msg("packet_in", 3))});
  std::vector<std::uint64_t> seen;
  const auto out = Run(Config("packet_in", 2), up, {}, [&](const ControlMessage& m) {
    seen.push_back(m.value("xid"));
    return Encode(m);
  });
  EXPECT_EQ(seen, std::vector<std::uint64_t>{2});
  EXPECT_EQ(out.at_controller, up);
}

TEST_F(ProxyTest, FuzzedVersionChangesOneByte) {
  const Bytes hello = Encode(Msg("hello", 1));
  const Bytes pin = Encode(Msg("packet_in", 2));
  const Bytes up = Cat({hello, pin});
  const auto out = Run(Config("packet_in"), up, {}, [](const ControlMessage& m) {
    auto c = m;
    c.set("version", 6);
    return Encode(c);
  });
  ASSERT_EQ(out.at_controller.size(), up.size());
  std::vector<std::size_t> diff;
  for (std::size_t i = 0; i < up.size(); ++i)
    if (up[i] != out.at_controller[i]) diff.push_back(i);
  ASSERT_EQ(diff, std::vector<std::size_t>{hello.size()});
  EXPECT_EQ(out.at_controller[hello.size()], 6);
}

TEST_F(ProxyTest, InvalidLengthAbortsSession) {
  const Bytes up = Cat({Encode(Msg("hello", 1)), Bytes{4, 0, 0, 3, 0, 0, 0, 0}});
  int calls = 0;
  const auto out = Run(Config("packet_in"), up, {}, [&](const ControlMessage& m) {
    ++calls;
    return Encode(m);
  });
  ASSERT_TRUE(out.record.error);
  EXPECT_EQ(*out.record.error, Errc::kLengthFieldInvalid);
  EXPECT_EQ(calls, 0);
  EXPECT_NE(out.record.ToLogLine().find("error=LengthFieldInvalid"), std::string::npos)
      << out.record.ToLogLine();
}

TEST_F(ProxyTest, UnknownTypeIsForwarded) {
  const Bytes odd = {4, 99, 0, 12, 0, 0, 0, 7, 0xaa, 0xbb, 0xcc, 0xdd};
  const Bytes up = Cat({odd, Encode(Msg("hello", 1))});
  const auto out = Run(Config("packet_in"), up, {}, [](const ControlMessage& m) {
    return Encode(m);
  });
  EXPECT_TRUE(out.record.ok()) << out.record.ToLogLine();
  EXPECT_FALSE(out.record.target_seen);
  EXPECT_EQ(out.at_controller, up);
}

TEST_F(ProxyTest, UnreachableUpstream) {
  std::uint16_t dead;
  {
    auto l = net::Listen("127.0.0.1", 0);
    dead = net::LocalPort(l.get());
  }
  auto cfg = Config("packet_in");
  cfg.upstream.port = dead;
  Proxy proxy(cfg, reg_);
  auto serve = std::async(std::launch::async, [&] {
    return proxy.ServeOne([](const ControlMessage& m) { return Encode(m); });
  });
  auto sw = net::Connect("127.0.0.1", proxy.port(), 2s);
  const auto rec = serve.get();
  ASSERT_TRUE(rec.error);
  EXPECT_EQ(*rec.error, Errc::kUpstreamUnreachable);
  EXPECT_TRUE(ReadToEof(sw.get()).empty());
}

TEST_F(ProxyTest, ConfigValidation) {
  auto cfg = Config("no_such_type");
  EXPECT_THROW(Proxy(cfg, reg_), Error);
  cfg = Config("packet_in", 0);
  try {
    Proxy p(cfg, reg_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kInvalidConfig);
  }
}

TEST_F(ProxyTest, AcceptTimeoutIsRecorded) {
  auto cfg = Config("packet_in");
  cfg.session_timeout = 100ms;
  Proxy proxy(cfg, reg_);
  const auto rec = proxy.ServeOne([](const ControlMessage& m) { return Encode(m); });
  ASSERT_TRUE(rec.error);
  EXPECT_EQ(*rec.error, Errc::kTimeout);
}

}  // namespace
}  // namespace sdnfuzz
