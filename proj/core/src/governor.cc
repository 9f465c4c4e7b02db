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

#include "arl/governor.h"

#include <algorithm>
#include <ctime>
#include <set>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "arl/agent_host.h"
#include "arl/env_service.h"
#include "arl/environment.h"
#include "arl/error.h"
#include "arl/reward.h"

namespace arl {

namespace {

// Same-shape check the environment does, done before anything reaches it.
void CheckSetpoints(const AgentInterface& iface, const std::vector<ActuatorSetpoint>& setpoints) {
  std::map<std::string, const Space*> spaces;
  for (const auto& a : iface.actuators) spaces[a.id] = &a.space;
  std::set<std::string> seen;
  for (const auto& sp : setpoints) {
    const auto it = spaces.find(sp.id);
    if (it == spaces.end()) throw ValidationError(sp.id, "not an actuator of agent " + iface.agent);
    if (!seen.insert(sp.id).second) throw ValidationError(sp.id, "setpoint given twice");
    bool inside = false;
    try {
      inside = Contains(*it->second, sp.value);
    } catch (const DomainTypeError&) {
      inside = false;
    }
    if (!inside) {
      throw ValidationError(sp.id,
                            fmt::format("setpoint {} outside {}", ValueToJson(sp.value).dump(), it->second->ToString()));
    }
  }
  if (seen.size() != spaces.size()) {
    for (const auto& [id, unused] : spaces) {
      if (!seen.count(id)) throw ValidationError(id, "no setpoint proposed");
    }
  }
}

nlohmann::json ReadingsByAgentJson(const ReadingsByAgent& r) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [agent, readings] : r) out[agent] = ReadingsToJson(readings);
  return out;
}

nlohmann::json SpaceJson(const Space& s) { return SpaceToJson(s); }

struct AgentSlot {
  AgentPlan plan;
  AgentInterface iface;
  std::vector<Space> sensor_spaces;
  std::unique_ptr<AgentHost> host;
  std::unique_ptr<Channel> channel;
};

}  // namespace

std::string UtcTimestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", tm);
}

Governor::Governor(Transport& transport, GovernorOptions options)
    : transport_(transport), options_(std::move(options)) {}

std::string Governor::Address(const std::string& run_id, const std::string& service) {
  if (transport_.name() != "socket") return run_id + "/" + service;
  if (options_.endpoints.empty()) return "127.0.0.1:0";
  const std::string& ep = options_.endpoints[static_cast<std::size_t>(next_endpoint_++) % options_.endpoints.size()];
  const auto colon = ep.rfind(':');
  return (colon == std::string::npos ? ep : ep.substr(0, colon)) + ":0";
}

nlohmann::json Governor::Run(const RunDescriptor& d, RecordSink& sink) {
  const StrategyRegistry& registry = *options_.registry;
  sink.Append({{"type", "header"},
               {"schema_version", kRecordSchemaVersion},
               {"descriptor", d.ToJson()},
               {"software_version", SoftwareVersion()},
               {"started_at", UtcTimestamp()}});

  const ExperimentPlan plan = d.Plan(registry);
  const int rounds = plan.environment.rounds;
  const std::string me = "governor/" + d.run_id;

  auto grid_env = std::make_unique<GridEnvironment>(MakeEnvironmentConfig(plan));
  const GridEnvironment& env_view = *grid_env;
  // Actuator metadata is read before the server owns the environment's loop.
  std::map<std::string, ActuatorTarget> targets;
  for (const auto& iface : env_view.Interfaces()) {
    for (const auto& a : iface.actuators) targets[a.id] = env_view.DescribeActuator(a.id);
  }
  EnvironmentServer env_server(transport_, Address(d.run_id, "environment"), std::move(grid_env));
  RemoteEnvironment env(transport_.Connect(env_server.address()), me, options_.timeout);

  std::map<std::string, std::int64_t> messages;
  auto request = [&](Channel& ch, MessageKind kind, nlohmann::json payload) {
    if (kind != MessageKind::kHeartbeat) ++messages[ToString(kind)];
    Envelope e{kProtocolVersion, kind, NextCorrelationId(me), "governor", me, std::move(payload)};
    return ch.Request(e, options_.timeout);
  };

  ResetOutcome reset = env.Reset();
  ++messages[ToString(MessageKind::kEnvReset)];

  std::vector<AgentSlot> slots;
  for (const auto& iface : reset.interfaces) {
    AgentSlot s;
    s.plan = plan.agent(iface.agent);
    s.iface = iface;
    s.sensor_spaces = iface.SensorSpaces();
    const std::string base = "agent/" + iface.agent;
    s.host = std::make_unique<AgentHost>(
        transport_, Address(d.run_id, base),
        [this, run_id = d.run_id, base](int i) { return Address(run_id, fmt::format("{}/worker-{}", base, i)); },
        registry);
    s.channel = transport_.Connect(s.host->address());
    slots.push_back(std::move(s));
  }

  nlohmann::json wiring = nlohmann::json::array();
  for (const auto& s : slots) {
    nlohmann::json sensors = nlohmann::json::array();
    for (const auto& x : s.iface.sensors) sensors.push_back({{"id", x.id}, {"space", SpaceJson(x.space)}});
    nlohmann::json actuators = nlohmann::json::array();
    for (const auto& x : s.iface.actuators) {
      const ActuatorTarget& t = targets.at(x.id);
      actuators.push_back({{"id", x.id},
                           {"space", SpaceJson(x.space)},
                           {"element", t.element_id},
                           {"kind", ToString(t.kind)},
                           {"neutral", t.neutral}});
    }
    wiring.push_back({{"name", s.iface.agent},
                      {"role", ToString(s.iface.role)},
                      {"kind", s.plan.kind},
                      {"workers", s.plan.workers},
                      {"sensors", sensors},
                      {"actuators", actuators}});
  }
  sink.Append({{"type", "wiring"}, {"agents", wiring}});

  for (auto& s : slots) {
    AgentSpec spec;
    spec.strategy = {s.plan.kind, s.plan.hyper, s.iface, s.plan.reward};
    spec.seed = d.seeds.at("agent/" + s.iface.agent);
    request(*s.channel, MessageKind::kSpawnWorkers, {{"count", s.plan.workers}, {"agent", spec.ToJson()}});
  }

  auto heartbeat = [&] {
    env.Ping();
    for (auto& s : slots) request(*s.channel, MessageKind::kHeartbeat, nlohmann::json::object());
  };
  auto last_beat = Clock::now();

  nlohmann::json defender_series = nlohmann::json::array();
  nlohmann::json attacker_series = nlohmann::json::array();
  int attacker_wins = 0;
  StepOutcome last;
  for (int round = 0; round < rounds; ++round) {
    if (round > 0) {
      reset = env.Reset();
      ++messages[ToString(MessageKind::kEnvReset)];
    }
    heartbeat();
    last_beat = Clock::now();
    sink.Append({{"type", "round_start"}, {"round", round}, {"readings", ReadingsByAgentJson(reset.readings)}});

    ReadingsByAgent readings = reset.readings;
    std::map<std::string, double> reward_sums;
    int step = 0;
    while (!env.terminated()) {
      if (Clock::now() - last_beat >= kHeartbeatInterval) {
        heartbeat();
        last_beat = Clock::now();
      }
      JointActions actions;
      nlohmann::json setpoints_json = nlohmann::json::object();
      for (auto& s : slots) {
        const int worker = round % s.plan.workers;
        const Envelope reply = request(*s.channel, MessageKind::kActRequest,
                                       {{"agent", s.iface.agent},
                                        {"worker", worker},
                                        {"step", step},
                                        {"episode", round},
                                        {"episodes", rounds},
                                        {"readings", ReadingsToJson(readings.at(s.iface.agent))}});
        auto setpoints = SetpointsFromJson(reply.payload.at("setpoints"));
        CheckSetpoints(s.iface, setpoints);
        setpoints_json[s.iface.agent] = SetpointsToJson(setpoints);
        actions[s.iface.agent] = std::move(setpoints);
      }

      ++messages[ToString(MessageKind::kEnvStep)];
      StepOutcome outcome = env.Step(actions);

      nlohmann::json rewards = nlohmann::json::object();
      for (auto& s : slots) {
        const Readings& mine = outcome.readings.at(s.iface.agent);
        const double reward = Performance(s.plan.reward, s.sensor_spaces, mine);
        rewards[s.iface.agent] = reward;
        reward_sums[s.iface.agent] += reward;
      }
      // Agents get their own readings and reward only: no element ids, no
      // unclamped values.
      for (auto& s : slots) {
        request(*s.channel, MessageKind::kEnvStepResult,
                {{"worker", round % s.plan.workers},
                 {"readings", {{s.iface.agent, ReadingsToJson(outcome.readings.at(s.iface.agent))}}},
                 {"rewards", {{s.iface.agent, rewards.at(s.iface.agent)}}},
                 {"events", nlohmann::json::array()},
                 {"terminated", outcome.terminated},
                 {"truncated", outcome.truncated},
                 {"ledger", nlohmann::json::object()},
                 {"raw_voltages", nlohmann::json::object()}});
      }

      nlohmann::json events = nlohmann::json::array();
      for (const auto& e : outcome.events) events.push_back(EventToJson(e));
      sink.Append({{"type", "step"},
                   {"round", round},
                   {"step", step},
                   {"observed", ReadingsByAgentJson(readings)},
                   {"setpoints", setpoints_json},
                   {"readings", ReadingsByAgentJson(outcome.readings)},
                   {"rewards", rewards},
                   {"events", events},
                   {"truncated", outcome.truncated},
                   {"terminated", outcome.terminated},
                   {"ledger", {{"defender_balance", outcome.defender_balance},
                               {"attacker_total", outcome.attacker_total}}},
                   {"raw_voltages", outcome.raw_voltages}});
      readings = outcome.readings;
      last = std::move(outcome);
      ++step;
    }

    const bool attacker_won = last.defender_balance == 0;
    attacker_wins += attacker_won ? 1 : 0;
    nlohmann::json mean_rewards = nlohmann::json::object();
    for (const auto& [agent, sum] : reward_sums) mean_rewards[agent] = sum / static_cast<double>(step);
    sink.Append({{"type", "round"},
                 {"round", round},
                 {"steps", step},
                 {"defender_balance", last.defender_balance},
                 {"attacker_total", last.attacker_total},
                 {"attacker_won", attacker_won},
                 {"mean_rewards", mean_rewards}});
    defender_series.push_back(last.defender_balance);
    attacker_series.push_back(last.attacker_total);
  }

  nlohmann::json versions = nlohmann::json::object();
  for (const auto& s : slots) {
    versions[s.iface.agent] = {{"conductor", s.host->ConductorVersion()}, {"workers", s.host->WorkerVersions()}};
  }
  const int defender_wins = rounds - attacker_wins;
  const char* winner = attacker_wins > defender_wins ? "attacker" : defender_wins > attacker_wins ? "defender" : "draw";
  std::int64_t total = 0;
  for (const auto& [kind, n] : messages) total += n;
  nlohmann::json footer{{"type", "footer"},
                        {"status", "completed"},
                        {"episodes", rounds},
                        {"defender_balance_series", defender_series},
                        {"attacker_total_series", attacker_series},
                        {"final", {{"defender_balance", last.defender_balance}, {"attacker_total", last.attacker_total}}},
                        {"round_wins", {{"attacker", attacker_wins}, {"defender", defender_wins}}},
                        {"winner", winner},
                        {"parameter_versions", versions},
                        {"messages", messages},
                        {"conformance", {{"requests", total}, {"violations", 0}}},
                        {"ended_at", UtcTimestamp()}};
  sink.Append(footer);
  return footer;
}

GovernorService::GovernorService(Transport& transport, const std::string& address, RunStore& store,
                                 GovernorOptions options)
    : transport_(transport), store_(store), options_(std::move(options)) {
  listener_ = transport_.Listen(address, Dispatch({
      {MessageKind::kRunAssign, [this](const Envelope& r) { return OnAssign(r); }},
      {MessageKind::kHeartbeat,
       [](const Envelope& r) { return MakeReply(r, MessageKind::kHeartbeat, nlohmann::json::object(), "governor", ""); }},
  }));
}

GovernorService::~GovernorService() { listener_.reset(); }

Envelope GovernorService::OnAssign(const Envelope& request) {
  const RunDescriptor d = RunDescriptor::FromJson(request.payload.at("descriptor"));
  auto writer = store_.Open(d);
  std::string status = "completed";
  nlohmann::json footer;
  try {
    Governor governor(transport_, options_);
    footer = governor.Run(d, *writer);
  } catch (const std::exception& e) {
    spdlog::warn("run {} failed: {}", d.run_id, e.what());
    writer->Fail(e.what());
    return MakeReply(request, MessageKind::kRunComplete,
                     {{"run_id", d.run_id}, {"status", "failed"}, {"footer", {{"error", e.what()}}}}, "governor",
                     d.run_id);
  }
  try {
    writer->Complete();
  } catch (const IntegrityError& e) {
    status = "integrity_error";
    footer = {{"error", e.what()}};
  }
  return MakeReply(request, MessageKind::kRunComplete, {{"run_id", d.run_id}, {"status", status}, {"footer", footer}},
                   "governor", d.run_id);
}

}  // namespace arl
