// Copyright 2026 The ARL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <list>
#include <thread>

#include <fmt/format.h>

#include "arl/transport.h"
#include "transport_internal.h"

namespace arl {
namespace {

std::pair<std::string, std::string> SplitHostPort(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos) throw ConfigError("socket address needs host:port, got '" + address + "'");
  return {address.substr(0, colon), address.substr(colon + 1)};
}

void SetNoDelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

// Writes the whole buffer. Returns false if the peer went away.
bool WriteAll(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

enum class ReadStatus { kOk, kClosed, kTimeout };

// Reads exactly `n` bytes, waiting at most until `deadline` (no deadline if
// nullopt).
ReadStatus ReadExact(int fd, char* out, std::size_t n, std::optional<Clock::time_point> deadline) {
  std::size_t got = 0;
  while (got < n) {
    int wait_ms = -1;
    if (deadline) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(*deadline - Clock::now()).count();
      if (left <= 0) return ReadStatus::kTimeout;
      wait_ms = static_cast<int>(left);
    }
    pollfd p{fd, POLLIN, 0};
    const int r = ::poll(&p, 1, wait_ms);
    if (r < 0 && errno == EINTR) continue;
    if (r == 0) return ReadStatus::kTimeout;
    if (r < 0) return ReadStatus::kClosed;
    const ssize_t k = ::recv(fd, out + got, n - got, 0);
    if (k < 0 && errno == EINTR) continue;
    if (k <= 0) return ReadStatus::kClosed;
    got += static_cast<std::size_t>(k);
  }
  return ReadStatus::kOk;
}

ReadStatus ReadFrame(int fd, std::string& frame, std::optional<Clock::time_point> deadline) {
  char header[4];
  if (auto s = ReadExact(fd, header, 4, deadline); s != ReadStatus::kOk) return s;
  const auto b = [&header](int i) { return static_cast<std::uint32_t>(static_cast<unsigned char>(header[i])); };
  const std::size_t n = (b(0) << 24) | (b(1) << 16) | (b(2) << 8) | b(3);
  frame.assign(header, 4);
  frame.resize(4 + n);
  return ReadExact(fd, frame.data() + 4, n, deadline);
}

class SocketListener final : public Listener {
 public:
  SocketListener(const std::string& address, Handler handler) : handler_(std::move(handler)) {
    const auto [host, port] = SplitHostPort(address);
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = AI_PASSIVE;
    addrinfo* res = nullptr;
    if (::getaddrinfo(host.empty() ? nullptr : host.c_str(), port.c_str(), &hints, &res) != 0 || res == nullptr) {
      throw TransportError("cannot resolve '" + address + "'", false);
    }
    fd_ = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    const int bound = ::bind(fd_, res->ai_addr, res->ai_addrlen);
    ::freeaddrinfo(res);
    if (fd_ < 0 || bound != 0 || ::listen(fd_, 64) != 0) {
      const std::string why = std::strerror(errno);
      if (fd_ >= 0) ::close(fd_);
      throw TransportError(fmt::format("cannot listen on '{}': {}", address, why), false);
    }
    sockaddr_in actual{};
    socklen_t len = sizeof(actual);
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&actual), &len);
    char ip[INET_ADDRSTRLEN];
    ::inet_ntop(AF_INET, &actual.sin_addr, ip, sizeof(ip));
    std::string shown = ip;
    if (shown == "0.0.0.0") shown = "127.0.0.1";
    address_ = fmt::format("{}:{}", shown, ntohs(actual.sin_port));
    accept_thread_ = std::thread([this] { AcceptLoop(); });
  }

  ~SocketListener() override {
    stopping_ = true;
    ::shutdown(fd_, SHUT_RDWR);
    accept_thread_.join();
    ::close(fd_);
    std::lock_guard<std::mutex> lock(mu_);
    for (auto& c : connections_) ::shutdown(c.fd, SHUT_RDWR);
    for (auto& c : connections_) {
      c.thread.join();
      ::close(c.fd);
    }
  }

  std::string address() const override { return address_; }

 private:
  struct Connection {
    int fd;
    std::thread thread;
  };

  void AcceptLoop() {
    while (!stopping_) {
      pollfd p{fd_, POLLIN, 0};
      const int r = ::poll(&p, 1, 100);
      if (r <= 0) continue;
      const int cfd = ::accept(fd_, nullptr, nullptr);
      if (cfd < 0) continue;
      SetNoDelay(cfd);
      std::lock_guard<std::mutex> lock(mu_);
      if (stopping_) {
        ::close(cfd);
        return;
      }
      connections_.push_back({cfd, std::thread([this, cfd] { ServeConnection(cfd); })});
    }
  }

  void ServeConnection(int cfd) {
    std::string frame;
    while (!stopping_) {
      if (ReadFrame(cfd, frame, std::nullopt) != ReadStatus::kOk) return;
      if (!WriteAll(cfd, ServeFrame(handler_, frame))) return;
    }
  }

  Handler handler_;
  int fd_ = -1;
  std::string address_;
  std::atomic<bool> stopping_{false};
  std::thread accept_thread_;
  std::mutex mu_;
  std::list<Connection> connections_;
};

class SocketChannel final : public Channel {
 public:
  explicit SocketChannel(const std::string& address) : address_(address) {
    const auto [host, port] = SplitHostPort(address);
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (::getaddrinfo(host.c_str(), port.c_str(), &hints, &res) != 0 || res == nullptr) {
      throw TransportError("cannot resolve '" + address + "'", false);
    }
    fd_ = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
    const int ok = fd_ >= 0 ? ::connect(fd_, res->ai_addr, res->ai_addrlen) : -1;
    ::freeaddrinfo(res);
    if (ok != 0) {
      const std::string why = std::strerror(errno);
      if (fd_ >= 0) ::close(fd_);
      throw TransportError(fmt::format("cannot connect to '{}': {}", address, why), false);
    }
    SetNoDelay(fd_);
  }

  ~SocketChannel() override { ::close(fd_); }

  std::string peer() const override { return address_; }

 protected:
  std::string RoundTrip(const std::string& frame, std::chrono::milliseconds timeout) override {
    if (broken_) throw TransportError(fmt::format("connection to '{}' is broken", address_), false);
    if (!WriteAll(fd_, frame)) {
      broken_ = true;
      throw TransportError(fmt::format("peer '{}' disappeared", address_), false);
    }
    std::string reply;
    switch (ReadFrame(fd_, reply, Clock::now() + timeout)) {
      case ReadStatus::kOk: return reply;
      case ReadStatus::kTimeout:
        // A late reply would desynchronise the stream.
        broken_ = true;
        throw TransportError(fmt::format("request to '{}' timed out", address_), true);
      case ReadStatus::kClosed: break;
    }
    broken_ = true;
    throw TransportError(fmt::format("peer '{}' disappeared", address_), false);
  }

 private:
  std::string address_;
  int fd_ = -1;
  bool broken_ = false;
};

class SocketTransport final : public Transport {
 public:
  std::unique_ptr<Listener> Listen(const std::string& address, Handler handler) override {
    return std::make_unique<SocketListener>(address, std::move(handler));
  }
  std::unique_ptr<Channel> Connect(const std::string& address) override {
    return std::make_unique<SocketChannel>(address);
  }
  std::string name() const override { return "socket"; }
};

}  // namespace

std::unique_ptr<Transport> MakeSocketTransport() { return std::make_unique<SocketTransport>(); }

}  // namespace arl
