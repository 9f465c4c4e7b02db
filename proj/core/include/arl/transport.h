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

#ifndef ARL_TRANSPORT_H_
#define ARL_TRANSPORT_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "arl/error.h"

namespace arl {

inline constexpr int kProtocolVersion = 1;

enum class MessageKind {
  kRunAssign,
  kEnvReset,
  kEnvResetResult,
  kEnvStep,
  kActRequest,
  kActResponse,
  kEnvStepResult,
  kExperienceBatch,
  kParameterUpdate,
  kSpawnWorkers,
  kRunComplete,
  kHeartbeat,
  kError,
};

const char* ToString(MessageKind kind);
std::optional<MessageKind> MessageKindFromString(const std::string& s);
// The single reply kind for a request kind (Error is always allowed as well).
// Throws ConfigError for kinds that are never sent as requests.
MessageKind ReplyKindFor(MessageKind request);

struct Envelope {
  int protocol_version = kProtocolVersion;
  MessageKind kind = MessageKind::kHeartbeat;
  std::string correlation_id;
  std::string sender_role;
  std::string sender_id;
  nlohmann::json payload = nlohmann::json::object();

  bool operator==(const Envelope&) const = default;
};

// Builds a reply that echoes the correlation id.
Envelope MakeReply(const Envelope& request, MessageKind kind, nlohmann::json payload, std::string sender_role,
                   std::string sender_id);
Envelope MakeError(const Envelope& request, const std::string& code, const std::string& message);

class DecodeError : public Error {
 public:
  enum class Code { kTruncated, kMalformed, kVersion, kUnknownKind, kSchema };
  DecodeError(Code code, const std::string& message) : Error(message), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

// Retriable failures (timeouts, lost peers).
class TransportError : public Error {
 public:
  TransportError(const std::string& message, bool timeout) : Error(message), timeout_(timeout) {}
  bool timeout() const { return timeout_; }

 private:
  bool timeout_;
};

// The peer answered with an Error envelope.
class RemoteError : public Error {
 public:
  RemoteError(std::string code, const std::string& message) : Error(code + ": " + message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Throws DecodeError(kSchema) when the payload does not fit the kind.
void ValidatePayload(MessageKind kind, const nlohmann::json& payload);

// Canonical text: keys sorted, shortest round-trip number formatting.
std::string CanonicalText(const nlohmann::json& j);

// 4-byte big-endian length prefix followed by the canonical envelope text.
std::string Encode(const Envelope& envelope);
Envelope Decode(std::string_view frame);
// Length of the complete frame at the start of `buffer`, if there is one.
std::optional<std::size_t> FrameLength(std::string_view buffer);

using Handler = std::function<Envelope(const Envelope&)>;
using Clock = std::chrono::steady_clock;

inline constexpr std::chrono::milliseconds kDefaultTimeout{30'000};
inline constexpr std::chrono::milliseconds kHeartbeatInterval{5'000};

// Client end of a point-to-point connection. One producer at a time.
class Channel {
 public:
  virtual ~Channel() = default;
  // Sends `request` and waits for the correlated reply. Throws
  // TransportError on timeout or disconnect, RemoteError on an Error reply,
  // DecodeError when the reply is malformed or uncorrelated.
  Envelope Request(const Envelope& request, std::chrono::milliseconds timeout = kDefaultTimeout);
  virtual std::string peer() const = 0;

 protected:
  virtual std::string RoundTrip(const std::string& frame, std::chrono::milliseconds timeout) = 0;
};

// A bound server. Requests from each connection are handled on that
// connection's own thread, in arrival order. Handler exceptions become Error
// replies.
class Listener {
 public:
  virtual ~Listener() = default;
  // Address peers connect to (with the real port for ephemeral binds).
  virtual std::string address() const = 0;
};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::unique_ptr<Listener> Listen(const std::string& address, Handler handler) = 0;
  virtual std::unique_ptr<Channel> Connect(const std::string& address) = 0;
  virtual std::string name() const = 0;
};

// In-process backend; addresses are arbitrary names.
std::unique_ptr<Transport> MakeLoopbackTransport();
// TCP backend; addresses are "host:port", port 0 binds an ephemeral port.
std::unique_ptr<Transport> MakeSocketTransport();
// "loopback" or "socket".
std::unique_ptr<Transport> MakeTransport(const std::string& mode);

// Wraps a handler so every request gets decoded and re-encoded on both sides
// of the wire, and unknown kinds for this endpoint become Error replies.
Handler Dispatch(std::map<MessageKind, Handler> routes);

// Fan-out of one message to many subscribers. Delivery is at-least-once: a
// timed-out send is retried up to `attempts` times, so subscribers must apply
// idempotently.
class Publisher {
 public:
  explicit Publisher(int attempts = 3, std::chrono::milliseconds timeout = kDefaultTimeout)
      : attempts_(attempts), timeout_(timeout) {}
  void AddSubscriber(std::shared_ptr<Channel> channel);
  void RemoveSubscriber(const std::shared_ptr<Channel>& channel);
  // Returns the number of subscribers that acknowledged.
  std::size_t Publish(const Envelope& envelope);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::vector<std::shared_ptr<Channel>> subscribers_;
  int attempts_;
  std::chrono::milliseconds timeout_;
};

// Process-unique correlation ids ("<prefix>-<n>").
std::string NextCorrelationId(const std::string& prefix);

}  // namespace arl

#endif  // ARL_TRANSPORT_H_
