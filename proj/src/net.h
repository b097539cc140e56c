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


// Thin POSIX socket helpers shared by the proxy and the mock SUT.

#ifndef SDNFUZZ_SRC_NET_H_
#define SDNFUZZ_SRC_NET_H_

#include <chrono>
#include <cstdint>
#include <span>
#include <string>

#include "sdnfuzz/codec.h"

namespace sdnfuzz::net {

class UniqueFd {
 public:
  UniqueFd() = default;
  explicit UniqueFd(int fd) : fd_(fd) {}
  UniqueFd(UniqueFd&& o) noexcept : fd_(o.release()) {}
  UniqueFd& operator=(UniqueFd&& o) noexcept {
    if (this != &o) reset(o.release());
    return *this;
  }
  UniqueFd(const UniqueFd&) = delete;
  UniqueFd& operator=(const UniqueFd&) = delete;
  ~UniqueFd() { reset(); }

  int get() const noexcept { return fd_; }
  bool valid() const noexcept { return fd_ >= 0; }
  int release() noexcept {
    const int fd = fd_;
    fd_ = -1;
    return fd;
  }
  void reset(int fd = -1) noexcept;

 private:
  int fd_ = -1;
};

using Clock = std::chrono::steady_clock;

// Listening TCP socket; port 0 picks an ephemeral port. Throws Error{kSocket}.
UniqueFd Listen(const std::string& host, std::uint16_t port, int backlog = 64);
std::uint16_t LocalPort(int fd);

// Throws Error{kUpstreamUnreachable}.
UniqueFd Connect(const std::string& host, std::uint16_t port,
                 std::chrono::milliseconds timeout);

// Accepts one connection, waiting at most until `deadline`. Returns an invalid
// fd on timeout. Throws Error{kSocket} when the listener was shut down.
UniqueFd Accept(int listen_fd, Clock::time_point deadline);

// Throws Error{kConnectionReset} on a reset or broken pipe.
void SendAll(int fd, std::span<const std::uint8_t> data);

enum class ReadStatus { kOk, kEof, kTimeout };

// Reads exactly out.size() bytes. kEof when the peer closed first (possibly
// after a partial read). Throws Error{kConnectionReset}.
ReadStatus RecvExact(int fd, std::span<std::uint8_t> out, Clock::time_point deadline);

// Reads one header-framed message. Throws Error{kLengthFieldInvalid} when
// the declared length is below the header size.
ReadStatus RecvFramed(int fd, Bytes& out, Clock::time_point deadline);

// Half-closes the write side, then drains the peer until it closes or the
// deadline passes, so the close does not turn into a reset.
void GracefulClose(UniqueFd& fd, Clock::time_point deadline);

}  // namespace sdnfuzz::net

#endif  // SDNFUZZ_SRC_NET_H_
