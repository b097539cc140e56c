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

#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "net.h"

namespace sdnfuzz {

std::vector<Bytes> Segmenter::Feed(std::span<const std::uint8_t> data) {
  buffer_.insert(buffer_.end(), data.begin(), data.end());
  std::vector<Bytes> out;
  std::size_t off = 0;
  while (buffer_.size() - off >= kHeaderBytes) {
    const auto rest = std::span<const std::uint8_t>(buffer_).subspan(off);
    const std::size_t len = PeekLength(rest);
    if (len < kHeaderBytes)
      throw Error(Errc::kLengthFieldInvalid,
                  "declared length " + std::to_string(len) + " below header size");
    if (rest.size() < len) break;
    out.emplace_back(rest.begin(), rest.begin() + static_cast<long>(len));
    off += len;
  }
  buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<long>(off));
  return out;
}

Bytes Segmenter::TakeResidual() {
  Bytes out;
  out.swap(buffer_);
  return out;
}

SegmentResult Segment(std::span<const std::uint8_t> stream) {
  Segmenter s;
  SegmentResult r;
  r.messages = s.Feed(stream);
  r.residual = s.TakeResidual();
  return r;
}

std::string SessionRecord::ToLogLine() const {
  std::string line = "session=" + std::to_string(session_id) +
                     " target_seen=" + (target_seen ? "true" : "false") +
                     " bytes_in=" + std::to_string(bytes_from_switch + bytes_from_controller) +
                     " bytes_out=" + std::to_string(bytes_to_controller + bytes_to_switch) +
                     " error=" + (error ? std::string(ErrcName(*error)) : "none");
  if (!error_detail.empty()) line += " detail=\"" + error_detail + "\"";
  return line;
}

Proxy::Proxy(InterceptConfig config, const SchemaRegistry& registry)
    : config_(std::move(config)) {
  target_ = registry.require(config_.target_type);
  if (config_.target_ordinal < 1)
    throw Error(Errc::kInvalidConfig, "target ordinal must be at least 1");
  auto fd = net::Listen(config_.listen.host, config_.listen.port);
  port_ = net::LocalPort(fd.get());
  listen_fd_ = fd.release();
}

Proxy::~Proxy() {
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void Proxy::Shutdown() {
  if (listen_fd_ >= 0) ::shutdown(listen_fd_, SHUT_RDWR);
}

namespace {

// One relay direction. Before the target has been handled the stream is
// framed so the target can be swapped; afterwards bytes pass straight through.
struct Pipe {
  int from;
  int to;
  bool intercept;
  bool open = true;
  Segmenter segmenter;
  std::size_t* bytes_in;
  std::size_t* bytes_out;
};

}  // namespace

SessionRecord Proxy::ServeOne(const FuzzHook& hook) {
  SessionRecord rec;
  rec.session_id = next_session_++;
  const auto deadline = net::Clock::now() + config_.session_timeout;

  net::UniqueFd sw;
  try {
    sw = net::Accept(listen_fd_, deadline);
  } catch (const Error& e) {
    rec.error = e.code();
    rec.error_detail = e.what();
    return rec;
  }
  if (!sw.valid()) {
    rec.error = Errc::kTimeout;
    rec.error_detail = "no switch connection";
    return rec;
  }

  net::UniqueFd ctl;
  try {
    ctl = net::Connect(config_.upstream.host, config_.upstream.port,
                       std::chrono::milliseconds(2000));
  } catch (const Error& e) {
    rec.error = e.code();
    rec.error_detail = e.what();
    return rec;
  }

  const bool to_ctl = config_.direction == Direction::kToController;
  Pipe up{sw.get(), ctl.get(), to_ctl, true, {}, &rec.bytes_from_switch,
          &rec.bytes_to_controller};
  Pipe down{ctl.get(), sw.get(), !to_ctl, true, {}, &rec.bytes_from_controller,
            &rec.bytes_to_switch};
  int seen = 0;
  bool fired = false;

  auto forward = [&](Pipe& p, std::span<const std::uint8_t> data) {
    net::SendAll(p.to, data);
    *p.bytes_out += data.size();
  };

  auto relay = [&](Pipe& p, std::span<const std::uint8_t> data) {
    if (!p.intercept || fired) {
      forward(p, data);
      return;
    }
    for (auto& msg : p.segmenter.Feed(data)) {
      if (!fired && PeekType(msg) == target_->header_type_code() &&
          ++seen == config_.target_ordinal) {
        fired = true;
        rec.target_seen = true;
        Bytes replacement = msg;
        try {
          replacement = hook ? hook(DecodeAs(msg, target_)) : msg;
        } catch (const Error& e) {
          // A target that does not match its schema size is passed through.
          rec.error_detail = std::string("target not decodable: ") + e.what();
          rec.target_seen = false;
        }
        forward(p, replacement);
      } else {
        forward(p, msg);
      }
    }
    if (fired) forward(p, p.segmenter.TakeResidual());
  };

  std::uint8_t buf[16384];
  try {
    while (up.open || down.open) {
      pollfd fds[2];
      int nfds = 0;
      Pipe* which[2];
      for (Pipe* p : {&up, &down}) {
        if (!p->open) continue;
        fds[nfds] = {p->from, POLLIN, 0};
        which[nfds++] = p;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - net::Clock::now());
      if (left.count() <= 0) throw Error(Errc::kTimeout, "session timed out");
      const int rc = ::poll(fds, static_cast<nfds_t>(nfds), static_cast<int>(left.count()));
      if (rc < 0) {
        if (errno == EINTR) continue;
        throw Error(Errc::kSocket, std::string("poll: ") + std::strerror(errno));
      }
      if (rc == 0) throw Error(Errc::kTimeout, "session timed out");
      for (int i = 0; i < nfds; ++i) {
        if (!(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
        Pipe& p = *which[i];
        const ssize_t n = ::recv(p.from, buf, sizeof(buf), 0);
        if (n > 0) {
          *p.bytes_in += static_cast<std::size_t>(n);
          relay(p, std::span<const std::uint8_t>(buf, static_cast<std::size_t>(n)));
        } else if (n == 0) {
          // Flush an incomplete trailing message untouched, then half-close.
          forward(p, p.segmenter.TakeResidual());
          ::shutdown(p.to, SHUT_WR);
          p.open = false;
        } else if (errno == ECONNRESET) {
          throw Error(Errc::kConnectionReset, "peer reset the connection");
        } else if (errno != EINTR && errno != EAGAIN) {
          throw Error(Errc::kSocket, std::string("recv: ") + std::strerror(errno));
        }
      }
    }
  } catch (const Error& e) {
    rec.error = e.code();
    rec.error_detail = e.what();
  }
  return rec;
}

}  // namespace sdnfuzz
