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

#include "arl/transport.h"

#include <array>
#include <atomic>
#include <map>

#include <fmt/format.h>

#include "transport_internal.h"

namespace arl {
namespace {

constexpr std::array<std::pair<MessageKind, const char*>, 13> kKindNames{{
    {MessageKind::kRunAssign, "RunAssign"},
    {MessageKind::kEnvReset, "EnvReset"},
    {MessageKind::kEnvResetResult, "EnvResetResult"},
    {MessageKind::kEnvStep, "EnvStep"},
    {MessageKind::kActRequest, "ActRequest"},
    {MessageKind::kActResponse, "ActResponse"},
    {MessageKind::kEnvStepResult, "EnvStepResult"},
    {MessageKind::kExperienceBatch, "ExperienceBatch"},
    {MessageKind::kParameterUpdate, "ParameterUpdate"},
    {MessageKind::kSpawnWorkers, "SpawnWorkers"},
    {MessageKind::kRunComplete, "RunComplete"},
    {MessageKind::kHeartbeat, "Heartbeat"},
    {MessageKind::kError, "Error"},
}};

enum class FieldType { kObject, kArray, kString, kInteger, kNumber, kBoolean, kAny };

struct Field {
  const char* name;
  FieldType type;
};

// Required payload fields per kind. Extra fields are rejected too, so each
// kind has exactly one shape.
const std::map<MessageKind, std::vector<Field>>& Schemas() {
  using F = FieldType;
  static const std::map<MessageKind, std::vector<Field>> schemas{
      {MessageKind::kRunAssign, {{"descriptor", F::kObject}}},
      {MessageKind::kEnvReset, {}},
      {MessageKind::kEnvResetResult, {{"interfaces", F::kArray}, {"readings", F::kObject}, {"horizon", F::kInteger}}},
      {MessageKind::kEnvStep, {{"actions", F::kObject}}},
      {MessageKind::kActRequest,
       {{"agent", F::kString},
        {"worker", F::kInteger},
        {"step", F::kInteger},
        {"episode", F::kInteger},
        {"episodes", F::kInteger},
        {"readings", F::kArray}}},
      {MessageKind::kActResponse, {{"setpoints", F::kArray}}},
      {MessageKind::kEnvStepResult,
       {{"worker", F::kInteger},
        {"readings", F::kObject},
        {"rewards", F::kObject},
        {"events", F::kArray},
        {"terminated", F::kBoolean},
        {"truncated", F::kBoolean},
        {"ledger", F::kObject},
        {"raw_voltages", F::kObject}}},
      {MessageKind::kExperienceBatch, {{"worker", F::kInteger}, {"base_version", F::kInteger}, {"tuples", F::kArray}}},
      {MessageKind::kParameterUpdate,
       {{"params", F::kAny}, {"version", F::kInteger}, {"mutator", F::kString}, {"identity", F::kBoolean}}},
      {MessageKind::kSpawnWorkers, {{"count", F::kInteger}, {"agent", F::kObject}}},
      {MessageKind::kRunComplete, {{"run_id", F::kString}, {"status", F::kString}, {"footer", F::kObject}}},
      {MessageKind::kHeartbeat, {}},
      {MessageKind::kError, {{"code", F::kString}, {"message", F::kString}}},
  };
  return schemas;
}

bool HasType(const nlohmann::json& v, FieldType t) {
  switch (t) {
    case FieldType::kObject: return v.is_object();
    case FieldType::kArray: return v.is_array();
    case FieldType::kString: return v.is_string();
    case FieldType::kInteger: return v.is_number_integer();
    case FieldType::kNumber: return v.is_number();
    case FieldType::kBoolean: return v.is_boolean();
    case FieldType::kAny: return true;
  }
  return false;
}

std::string ErrorCode(const std::exception& e) {
  if (dynamic_cast<const ValidationError*>(&e)) return "validation";
  if (dynamic_cast<const StaleParametersError*>(&e)) return "stale";
  if (dynamic_cast<const DecodeError*>(&e)) return "decode";
  if (dynamic_cast<const ConfigError*>(&e)) return "config";
  if (dynamic_cast<const DomainTypeError*>(&e)) return "domain";
  if (dynamic_cast<const RemoteError*>(&e)) return static_cast<const RemoteError&>(e).code();
  if (dynamic_cast<const TransportError*>(&e)) return "transport";
  return "internal";
}

}  // namespace

const char* ToString(MessageKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<MessageKind> MessageKindFromString(const std::string& s) {
  for (const auto& [k, name] : kKindNames) {
    if (s == name) return k;
  }
  return std::nullopt;
}

MessageKind ReplyKindFor(MessageKind request) {
  switch (request) {
    case MessageKind::kRunAssign: return MessageKind::kRunComplete;
    case MessageKind::kEnvReset: return MessageKind::kEnvResetResult;
    case MessageKind::kEnvStep: return MessageKind::kEnvStepResult;
    case MessageKind::kActRequest: return MessageKind::kActResponse;
    case MessageKind::kEnvStepResult: return MessageKind::kHeartbeat;
    case MessageKind::kExperienceBatch: return MessageKind::kParameterUpdate;
    case MessageKind::kParameterUpdate: return MessageKind::kHeartbeat;
    case MessageKind::kSpawnWorkers: return MessageKind::kHeartbeat;
    case MessageKind::kHeartbeat: return MessageKind::kHeartbeat;
    default: throw ConfigError(fmt::format("{} is not a request kind", ToString(request)));
  }
}

Envelope MakeReply(const Envelope& request, MessageKind kind, nlohmann::json payload, std::string sender_role,
                   std::string sender_id) {
  return {kProtocolVersion, kind, request.correlation_id, std::move(sender_role), std::move(sender_id),
          std::move(payload)};
}

Envelope MakeError(const Envelope& request, const std::string& code, const std::string& message) {
  return MakeReply(request, MessageKind::kError, {{"code", code}, {"message", message}}, "transport", "");
}

void ValidatePayload(MessageKind kind, const nlohmann::json& payload) {
  if (!payload.is_object()) throw DecodeError(DecodeError::Code::kSchema, "payload must be an object");
  const auto& fields = Schemas().at(kind);
  for (const auto& f : fields) {
    const auto it = payload.find(f.name);
    if (it == payload.end()) {
      throw DecodeError(DecodeError::Code::kSchema, fmt::format("{} payload lacks '{}'", ToString(kind), f.name));
    }
    if (!HasType(*it, f.type)) {
      throw DecodeError(DecodeError::Code::kSchema,
                        fmt::format("{} payload field '{}' has the wrong type", ToString(kind), f.name));
    }
  }
  if (payload.size() != fields.size()) {
    throw DecodeError(DecodeError::Code::kSchema, fmt::format("{} payload has unexpected fields", ToString(kind)));
  }
}

std::string CanonicalText(const nlohmann::json& j) { return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict); }

std::string Encode(const Envelope& e) {
  ValidatePayload(e.kind, e.payload);
  const nlohmann::json body{{"v", e.protocol_version},
                            {"kind", ToString(e.kind)},
                            {"corr", e.correlation_id},
                            {"sender", {{"role", e.sender_role}, {"id", e.sender_id}}},
                            {"payload", e.payload}};
  const std::string text = CanonicalText(body);
  const auto n = static_cast<std::uint32_t>(text.size());
  std::string frame;
  frame.reserve(4 + text.size());
  frame.push_back(static_cast<char>((n >> 24) & 0xff));
  frame.push_back(static_cast<char>((n >> 16) & 0xff));
  frame.push_back(static_cast<char>((n >> 8) & 0xff));
  frame.push_back(static_cast<char>(n & 0xff));
  frame += text;
  return frame;
}

std::optional<std::size_t> FrameLength(std::string_view buffer) {
  if (buffer.size() < 4) return std::nullopt;
  const auto b = [&buffer](int i) { return static_cast<std::uint32_t>(static_cast<unsigned char>(buffer[i])); };
  const std::size_t n = (b(0) << 24) | (b(1) << 16) | (b(2) << 8) | b(3);
  if (buffer.size() < 4 + n) return std::nullopt;
  return 4 + n;
}

Envelope Decode(std::string_view frame) {
  const auto len = FrameLength(frame);
  if (!len) throw DecodeError(DecodeError::Code::kTruncated, "truncated frame");
  if (*len != frame.size()) throw DecodeError(DecodeError::Code::kMalformed, "trailing bytes after frame");
  nlohmann::json body;
  try {
    body = nlohmann::json::parse(frame.substr(4));
  } catch (const nlohmann::json::parse_error& e) {
    throw DecodeError(DecodeError::Code::kMalformed, std::string("unparseable envelope: ") + e.what());
  }
  try {
    Envelope e;
    e.protocol_version = body.at("v").get<int>();
    if (e.protocol_version != kProtocolVersion) {
      throw DecodeError(DecodeError::Code::kVersion, fmt::format("protocol version {} not supported", e.protocol_version));
    }
    const auto kind = MessageKindFromString(body.at("kind").get<std::string>());
    if (!kind) throw DecodeError(DecodeError::Code::kUnknownKind, "unknown message kind");
    e.kind = *kind;
    e.correlation_id = body.at("corr").get<std::string>();
    e.sender_role = body.at("sender").at("role").get<std::string>();
    e.sender_id = body.at("sender").at("id").get<std::string>();
    e.payload = std::move(body.at("payload"));
    if (body.size() != 5) throw DecodeError(DecodeError::Code::kMalformed, "unexpected envelope fields");
    ValidatePayload(e.kind, e.payload);
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw DecodeError(DecodeError::Code::kMalformed, std::string("malformed envelope: ") + ex.what());
  }
}

Envelope Channel::Request(const Envelope& request, std::chrono::milliseconds timeout) {
  const MessageKind expected = ReplyKindFor(request.kind);
  const Envelope reply = Decode(RoundTrip(Encode(request), timeout));
  if (reply.correlation_id != request.correlation_id) {
    throw DecodeError(DecodeError::Code::kSchema, "reply correlation id does not match the request");
  }
  if (reply.kind == MessageKind::kError) {
    throw RemoteError(reply.payload.at("code").get<std::string>(), reply.payload.at("message").get<std::string>());
  }
  if (reply.kind != expected) {
    throw DecodeError(DecodeError::Code::kSchema,
                      fmt::format("expected {} reply, got {}", ToString(expected), ToString(reply.kind)));
  }
  return reply;
}

// Server side of one request: decode, handle, encode. Never throws.
std::string ServeFrame(const Handler& handler, std::string_view frame) {
  Envelope request;
  try {
    request = Decode(frame);
  } catch (const DecodeError& e) {
    Envelope bogus;
    return Encode(MakeError(bogus, "decode", e.what()));
  }
  try {
    Envelope reply = handler(request);
    reply.correlation_id = request.correlation_id;
    return Encode(reply);
  } catch (const std::exception& e) {
    return Encode(MakeError(request, ErrorCode(e), e.what()));
  }
}

Handler Dispatch(std::map<MessageKind, Handler> routes) {
  return [routes = std::move(routes)](const Envelope& request) -> Envelope {
    const auto it = routes.find(request.kind);
    if (it == routes.end()) {
      return MakeError(request, "unsupported", fmt::format("{} is not served here", ToString(request.kind)));
    }
    return it->second(request);
  };
}

void Publisher::AddSubscriber(std::shared_ptr<Channel> channel) {
  std::lock_guard<std::mutex> lock(mu_);
  subscribers_.push_back(std::move(channel));
}

void Publisher::RemoveSubscriber(const std::shared_ptr<Channel>& channel) {
  std::lock_guard<std::mutex> lock(mu_);
  std::erase(subscribers_, channel);
}

std::size_t Publisher::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return subscribers_.size();
}

std::size_t Publisher::Publish(const Envelope& envelope) {
  std::vector<std::shared_ptr<Channel>> targets;
  {
    std::lock_guard<std::mutex> lock(mu_);
    targets = subscribers_;
  }
  std::size_t acknowledged = 0;
  for (const auto& ch : targets) {
    for (int attempt = 0; attempt < attempts_; ++attempt) {
      try {
        Envelope copy = envelope;
        copy.correlation_id = NextCorrelationId("pub");
        ch->Request(copy, timeout_);
        ++acknowledged;
        break;
      } catch (const TransportError& e) {
        if (!e.timeout()) break;
      } catch (const Error&) {
        break;
      }
    }
  }
  return acknowledged;
}

std::string NextCorrelationId(const std::string& prefix) {
  static std::atomic<std::uint64_t> counter{0};
  return fmt::format("{}-{}", prefix, counter.fetch_add(1) + 1);
}

std::unique_ptr<Transport> MakeTransport(const std::string& mode) {
  if (mode == "loopback") return MakeLoopbackTransport();
  if (mode == "socket") return MakeSocketTransport();
  throw ConfigError("unknown transport '" + mode + "'");
}

}  // namespace arl
