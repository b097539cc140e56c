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


#include "net.h"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "sdnfuzz/error.h"

namespace sdnfuzz::net {
namespace {

sockaddr_in MakeAddr(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  const std::string h = host.empty() || host == "localhost" ? "127.0.0.1" : host;
  if (inet_pton(AF_INET, h.c_str(), &addr.sin_addr) != 1)
    throw Error(Errc::kSocket, "bad IPv4 address '" + host + "'");
  return addr;
}

std::string SysError(const char* what) {
  return std::string(what) + ": " + std::strerror(errno);
}

int RemainingMs(Clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
      deadline - Clock::now());
  return left.count() <= 0 ? 0 : static_cast<int>(left.count());
}

// Waits for readability. False on timeout.
bool WaitReadable(int fd, Clock::time_point deadline) {
  while (true) {
    pollfd p{fd, POLLIN, 0};
    const int rc = ::poll(&p, 1, RemainingMs(deadline));
    if (rc > 0) return true;
    if (rc == 0) return false;
    if (errno != EINTR) throw Error(Errc::kSocket, SysError("poll"));
  }
}

}  // namespace

void UniqueFd::reset(int fd) noexcept {
  if (fd_ >= 0) ::close(fd_);
  fd_ = fd;
}

UniqueFd Listen(const std::string& host, std::uint16_t port, int backlog) {
  UniqueFd fd(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
  if (!fd.valid()) throw Error(Errc::kSocket, SysError("socket"));
  const int one = 1;
  ::setsockopt(fd.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  const auto addr = MakeAddr(host, port);
  if (::bind(fd.get(), reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0)
    throw Error(Errc::kSocket, SysError("bind"));
  if (::listen(fd.get(), backlog) != 0) throw Error(Errc::kSocket, SysError("listen"));
  return fd;
}

std::uint16_t LocalPort(int fd) {
  sockaddr_in addr{};
  socklen_t len = sizeof(addr);
  if (::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) != 0)
    throw Error(Errc::kSocket, SysError("getsockname"));
  return ntohs(addr.sin_port);
}

UniqueFd Connect(const std::string& host, std::uint16_t port,
                 std::chrono::milliseconds timeout) {
  const auto addr = MakeAddr(host, port);
  UniqueFd fd(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC | SOCK_NONBLOCK, 0));
  if (!fd.valid()) throw Error(Errc::kSocket, SysError("socket"));
  const std::string where = host + ":" + std::to_string(port);
  if (::connect(fd.get(), reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
    if (errno != EINPROGRESS)
      throw Error(Errc::kUpstreamUnreachable, where + ": " + std::strerror(errno));
    pollfd p{fd.get(), POLLOUT, 0};
    if (::poll(&p, 1, static_cast<int>(timeout.count())) <= 0)
      throw Error(Errc::kUpstreamUnreachable, where + ": connect timed out");
    int err = 0;
    socklen_t len = sizeof(err);
    ::getsockopt(fd.get(), SOL_SOCKET, SO_ERROR, &err, &len);
    if (err != 0)
      throw Error(Errc::kUpstreamUnreachable, where + ": " + std::strerror(err));
  }
  const int flags = ::fcntl(fd.get(), F_GETFL);
  ::fcntl(fd.get(), F_SETFL, flags & ~O_NONBLOCK);
  const int one = 1;
  ::setsockopt(fd.get(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return fd;
}

UniqueFd Accept(int listen_fd, Clock::time_point deadline) {
  while (true) {
    pollfd p{listen_fd, POLLIN, 0};
    const int rc = ::poll(&p, 1, RemainingMs(deadline));
    if (rc == 0) return UniqueFd();
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::kSocket, SysError("poll"));
    }
    if (p.revents & (POLLERR | POLLHUP | POLLNVAL))
      throw Error(Errc::kSocket, "listener closed");
    UniqueFd fd(::accept4(listen_fd, nullptr, nullptr, SOCK_CLOEXEC));
    if (fd.valid()) {
      const int one = 1;
      ::setsockopt(fd.get(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      return fd;
    }
    if (errno == EINTR || errno == EAGAIN || errno == ECONNABORTED) continue;
    throw Error(Errc::kSocket, SysError("accept"));
  }
}

void SendAll(int fd, std::span<const std::uint8_t> data) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (n > 0) {
      off += static_cast<std::size_t>(n);
      continue;
    }
    if (n < 0 && errno == EINTR) continue;
    if (n < 0 && (errno == EPIPE || errno == ECONNRESET))
      throw Error(Errc::kConnectionReset, SysError("send"));
    throw Error(Errc::kSocket, SysError("send"));
  }
}

ReadStatus RecvExact(int fd, std::span<std::uint8_t> out, Clock::time_point deadline) {
  std::size_t got = 0;
  while (got < out.size()) {
    if (!WaitReadable(fd, deadline)) return ReadStatus::kTimeout;
    const ssize_t n = ::recv(fd, out.data() + got, out.size() - got, 0);
    if (n > 0) {
      got += static_cast<std::size_t>(n);
    } else if (n == 0) {
      return ReadStatus::kEof;
    } else if (errno == ECONNRESET) {
      throw Error(Errc::kConnectionReset, SysError("recv"));
    } else if (errno != EINTR && errno != EAGAIN) {
      throw Error(Errc::kSocket, SysError("recv"));
    }
  }
  return ReadStatus::kOk;
}

ReadStatus RecvFramed(int fd, Bytes& out, Clock::time_point deadline) {
  out.assign(kHeaderBytes, 0);
  if (auto st = RecvExact(fd, out, deadline); st != ReadStatus::kOk) return st;
  const std::size_t len = PeekLength(out);
  if (len < kHeaderBytes)
    throw Error(Errc::kLengthFieldInvalid, "declared length " + std::to_string(len));
  out.resize(len);
  return RecvExact(fd, std::span(out).subspan(kHeaderBytes), deadline);
}

void GracefulClose(UniqueFd& fd, Clock::time_point deadline) {
  if (!fd.valid()) return;
  ::shutdown(fd.get(), SHUT_WR);
  std::uint8_t sink[512];
  while (WaitReadable(fd.get(), deadline)) {
    const ssize_t n = ::recv(fd.get(), sink, sizeof(sink), 0);
    if (n > 0 || (n < 0 && errno == EINTR)) continue;
    break;
  }
  fd.reset();
}

}  // namespace sdnfuzz::net
