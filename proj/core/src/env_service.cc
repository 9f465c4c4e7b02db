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

#include "arl/env_service.h"

#include "arl/error.h"

namespace arl {

namespace {

nlohmann::json ReadingsByAgentToJson(const ReadingsByAgent& r) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [agent, readings] : r) out[agent] = ReadingsToJson(readings);
  return out;
}

ReadingsByAgent ReadingsByAgentFromJson(const nlohmann::json& j) {
  ReadingsByAgent out;
  for (const auto& [agent, readings] : j.items()) out[agent] = ReadingsFromJson(readings);
  return out;
}

}  // namespace

nlohmann::json StepOutcomeToJson(const StepOutcome& o) {
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : o.events) events.push_back(EventToJson(e));
  return {{"worker", 0},
          {"readings", ReadingsByAgentToJson(o.readings)},
          {"rewards", nlohmann::json::object()},
          {"events", events},
          {"terminated", o.terminated},
          {"truncated", o.truncated},
          {"ledger", {{"defender_balance", o.defender_balance}, {"attacker_total", o.attacker_total}}},
          {"raw_voltages", o.raw_voltages}};
}

StepOutcome StepOutcomeFromJson(const nlohmann::json& p) {
  StepOutcome o;
  o.readings = ReadingsByAgentFromJson(p.at("readings"));
  for (const auto& e : p.at("events")) o.events.push_back(EventFromJson(e));
  o.terminated = p.at("terminated").get<bool>();
  o.truncated = p.at("truncated").get<bool>();
  o.defender_balance = p.at("ledger").at("defender_balance").get<MilliCoins>();
  o.attacker_total = p.at("ledger").at("attacker_total").get<MilliCoins>();
  o.raw_voltages = p.at("raw_voltages").get<std::map<std::string, double>>();
  return o;
}

EnvironmentServer::EnvironmentServer(Transport& transport, const std::string& address,
                                     std::unique_ptr<Environment> env)
    : env_(std::move(env)) {
  listener_ = transport.Listen(address, Dispatch({
      {MessageKind::kEnvReset, [this](const Envelope& r) { return OnReset(r); }},
      {MessageKind::kEnvStep, [this](const Envelope& r) { return OnStep(r); }},
      {MessageKind::kHeartbeat,
       [](const Envelope& r) { return MakeReply(r, MessageKind::kHeartbeat, nlohmann::json::object(), "environment", ""); }},
  }));
}

EnvironmentServer::~EnvironmentServer() { listener_.reset(); }

Envelope EnvironmentServer::OnReset(const Envelope& request) {
  std::lock_guard<std::mutex> lock(mu_);
  const ResetOutcome outcome = env_->Reset();
  nlohmann::json interfaces = nlohmann::json::array();
  for (const auto& i : outcome.interfaces) interfaces.push_back(InterfaceToJson(i));
  return MakeReply(request, MessageKind::kEnvResetResult,
                   {{"interfaces", interfaces},
                    {"readings", ReadingsByAgentToJson(outcome.readings)},
                    {"horizon", env_->horizon()}},
                   "environment", "");
}

Envelope EnvironmentServer::OnStep(const Envelope& request) {
  JointActions actions;
  for (const auto& [agent, setpoints] : request.payload.at("actions").items()) {
    actions[agent] = SetpointsFromJson(setpoints);
  }
  std::lock_guard<std::mutex> lock(mu_);
  const StepOutcome outcome = env_->Step(actions);
  return MakeReply(request, MessageKind::kEnvStepResult, StepOutcomeToJson(outcome), "environment", "");
}

RemoteEnvironment::RemoteEnvironment(std::unique_ptr<Channel> channel, std::string sender_id,
                                     std::chrono::milliseconds timeout)
    : channel_(std::move(channel)), sender_id_(std::move(sender_id)), timeout_(timeout) {}

Envelope RemoteEnvironment::Call(MessageKind kind, nlohmann::json payload) {
  Envelope request{kProtocolVersion, kind, NextCorrelationId(sender_id_), "governor", sender_id_, std::move(payload)};
  return channel_->Request(request, timeout_);
}

ResetOutcome RemoteEnvironment::Reset() {
  const Envelope reply = Call(MessageKind::kEnvReset, nlohmann::json::object());
  ResetOutcome out;
  for (const auto& i : reply.payload.at("interfaces")) out.interfaces.push_back(InterfaceFromJson(i));
  out.readings = ReadingsByAgentFromJson(reply.payload.at("readings"));
  interfaces_ = out.interfaces;
  horizon_ = reply.payload.at("horizon").get<int>();
  step_ = 0;
  terminated_ = false;
  return out;
}

StepOutcome RemoteEnvironment::Step(const JointActions& actions) {
  if (terminated_) throw ValidationError("environment", "step after termination");
  nlohmann::json payload = nlohmann::json::object();
  for (const auto& [agent, setpoints] : actions) payload[agent] = SetpointsToJson(setpoints);
  try {
    const Envelope reply = Call(MessageKind::kEnvStep, {{"actions", payload}});
    StepOutcome out = StepOutcomeFromJson(reply.payload);
    ++step_;
    terminated_ = out.terminated;
    return out;
  } catch (const RemoteError& e) {
    if (e.code() == "validation") throw ValidationError("environment", e.what());
    throw;
  }
}

void RemoteEnvironment::Ping() { Call(MessageKind::kHeartbeat, nlohmann::json::object()); }

}  // namespace arl
