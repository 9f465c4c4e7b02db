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

#include "arl/agent_host.h"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "arl/error.h"

namespace arl {

nlohmann::json AgentSpec::ToJson() const {
  return {{"kind", strategy.kind},
          {"hyper", strategy.hyper},
          {"interface", InterfaceToJson(strategy.iface)},
          {"reward", RewardParamsToJson(strategy.reward)},
          {"seed", seed}};
}

AgentSpec AgentSpec::FromJson(const nlohmann::json& j) {
  AgentSpec s;
  s.strategy.kind = j.at("kind").get<std::string>();
  s.strategy.hyper = j.at("hyper");
  s.strategy.iface = InterfaceFromJson(j.at("interface"));
  s.strategy.reward = RewardParamsFromJson(j.at("reward"), s.strategy.iface.role);
  s.seed = j.at("seed").get<std::uint64_t>();
  return s;
}

Worker::Worker(const AgentSpec& spec, int index, const ParameterSet& initial, const StrategyRegistry& registry)
    : index_(index),
      strategy_(registry.Get(spec.strategy.kind).make_strategy(spec.strategy)),
      version_(initial.version),
      rng_(DeriveSeed(spec.seed, fmt::format("worker-{}", index))) {
  strategy_->SetParameters(initial);
}

std::vector<ActuatorSetpoint> Worker::Act(const Readings& readings, int step, const ActContext& ctx) {
  std::lock_guard<std::mutex> lock(mu_);
  auto setpoints = strategy_->ProposeActions(readings, ctx, rng_);
  pending_ = Experience{step, readings, setpoints, 0.0, {}, false};
  return setpoints;
}

std::optional<ExperienceBatch> Worker::Observe(const Readings& next, double reward, bool terminal) {
  std::lock_guard<std::mutex> lock(mu_);
  if (!pending_) throw ValidationError(fmt::format("worker-{}", index_), "step result without a pending action");
  pending_->next_readings = next;
  pending_->reward = reward;
  pending_->terminal = terminal;
  episode_.push_back(std::move(*pending_));
  pending_.reset();
  if (!terminal) return std::nullopt;
  ExperienceBatch batch{index_, version_, std::move(episode_)};
  episode_.clear();
  return batch;
}

bool Worker::Apply(const ParameterUpdate& update) {
  std::lock_guard<std::mutex> lock(mu_);
  if (update.version <= version_) return false;
  strategy_->SetParameters({update.blob, update.version});
  version_ = update.version;
  return true;
}

std::int64_t Worker::version() const {
  std::lock_guard<std::mutex> lock(mu_);
  return version_;
}

Conductor::Conductor(const AgentSpec& spec, const StrategyRegistry& registry)
    : mutator_(registry.Get(spec.strategy.kind).make_mutator(spec.strategy)),
      params_(registry.Get(spec.strategy.kind).initial_parameters(spec.strategy)),
      id_(spec.strategy.iface.agent + "/mutator") {}

Conductor::Outcome Conductor::HandleBatch(const ExperienceBatch& batch) {
  std::lock_guard<std::mutex> lock(mu_);
  try {
    ParameterUpdate update = mutator_->Mutate(batch, params_);
    if (!update.identity) params_ = {update.blob, update.version};
    update.mutator_id = id_;
    return {std::move(update), false};
  } catch (const StaleParametersError& e) {
    spdlog::debug("{}: {}", id_, e.what());
    return {{params_.blob, params_.version, id_, true}, true};
  }
}

ParameterSet Conductor::current() const {
  std::lock_guard<std::mutex> lock(mu_);
  return params_;
}

class AgentHost::WorkerNode {
 public:
  WorkerNode(Transport& transport, const std::string& bind, const std::string& host_address, const AgentSpec& spec,
             int index, const ParameterSet& initial, const StrategyRegistry& registry)
      : worker_(spec, index, initial, registry),
        agent_(spec.strategy.iface.agent),
        name_(fmt::format("{}/worker-{}", agent_, index)),
        conductor_(transport.Connect(host_address)) {
    listener_ = transport.Listen(bind, Dispatch({
        {MessageKind::kActRequest, [this](const Envelope& r) { return OnAct(r); }},
        {MessageKind::kEnvStepResult, [this](const Envelope& r) { return OnStepResult(r); }},
        {MessageKind::kParameterUpdate, [this](const Envelope& r) { return OnUpdate(r); }},
        {MessageKind::kHeartbeat,
         [this](const Envelope& r) { return MakeReply(r, MessageKind::kHeartbeat, nlohmann::json::object(), "worker", name_); }},
    }));
  }

  std::string address() const { return listener_->address(); }
  const Worker& worker() const { return worker_; }

 private:
  Envelope OnAct(const Envelope& r) {
    const auto& p = r.payload;
    const auto setpoints = worker_.Act(ReadingsFromJson(p.at("readings")), p.at("step").get<int>(),
                                       {p.at("episode").get<int>(), p.at("episodes").get<int>()});
    return MakeReply(r, MessageKind::kActResponse, {{"setpoints", SetpointsToJson(setpoints)}}, "worker", name_);
  }

  Envelope OnStepResult(const Envelope& r) {
    const auto& p = r.payload;
    const double reward = p.at("rewards").at(agent_).get<double>();
    auto batch = worker_.Observe(ReadingsFromJson(p.at("readings").at(agent_)), reward, p.at("terminated").get<bool>());
    if (batch) {
      Envelope request{kProtocolVersion, MessageKind::kExperienceBatch, NextCorrelationId(name_), "worker", name_,
                       ExperienceBatchToJson(*batch)};
      const Envelope reply = conductor_->Request(request);
      worker_.Apply(ParameterUpdateFromJson(reply.payload));
    }
    return MakeReply(r, MessageKind::kHeartbeat, nlohmann::json::object(), "worker", name_);
  }

  Envelope OnUpdate(const Envelope& r) {
    worker_.Apply(ParameterUpdateFromJson(r.payload));
    return MakeReply(r, MessageKind::kHeartbeat, nlohmann::json::object(), "worker", name_);
  }

  Worker worker_;
  std::string agent_;
  std::string name_;
  std::unique_ptr<Channel> conductor_;
  std::unique_ptr<Listener> listener_;
};

AgentHost::AgentHost(Transport& transport, const std::string& address,
                     std::function<std::string(int)> worker_address, const StrategyRegistry& registry)
    : transport_(transport), worker_address_(std::move(worker_address)), registry_(registry) {
  listener_ = transport_.Listen(address, Dispatch({
      {MessageKind::kSpawnWorkers, [this](const Envelope& r) { return OnSpawn(r); }},
      {MessageKind::kActRequest, [this](const Envelope& r) { return OnForward(r); }},
      {MessageKind::kEnvStepResult, [this](const Envelope& r) { return OnForward(r); }},
      {MessageKind::kExperienceBatch, [this](const Envelope& r) { return OnBatch(r); }},
      {MessageKind::kHeartbeat,
       [](const Envelope& r) { return MakeReply(r, MessageKind::kHeartbeat, nlohmann::json::object(), "conductor", ""); }},
  }));
}

AgentHost::~AgentHost() {
  // Stop accepting traffic before tearing the workers down.
  listener_.reset();
  std::lock_guard<std::mutex> lock(mu_);
  data_channels_.clear();
  publish_channels_.clear();
  workers_.clear();
}

std::string AgentHost::address() const { return listener_->address(); }

void AgentHost::SpawnWorker(int index) {
  auto node = std::make_unique<WorkerNode>(transport_, worker_address_(index), listener_->address(), *spec_, index,
                                           conductor_->current(), registry_);
  std::shared_ptr<Channel> data = transport_.Connect(node->address());
  std::shared_ptr<Channel> pub = transport_.Connect(node->address());
  const auto i = static_cast<std::size_t>(index);
  if (i < workers_.size()) {
    publisher_.RemoveSubscriber(publish_channels_[i]);
    data_channels_[i] = std::move(data);
    publish_channels_[i] = std::move(pub);
    workers_[i] = std::move(node);
  } else {
    data_channels_.push_back(std::move(data));
    publish_channels_.push_back(std::move(pub));
    workers_.push_back(std::move(node));
  }
  publisher_.AddSubscriber(publish_channels_[i]);
}

Envelope AgentHost::OnSpawn(const Envelope& request) {
  const int count = request.payload.at("count").get<int>();
  if (count < 1) throw ConfigError("worker count must be >= 1");
  AgentSpec spec = AgentSpec::FromJson(request.payload.at("agent"));
  std::lock_guard<std::mutex> lock(mu_);
  for (const auto& ch : publish_channels_) publisher_.RemoveSubscriber(ch);
  data_channels_.clear();
  publish_channels_.clear();
  workers_.clear();
  spec_ = std::move(spec);
  conductor_ = std::make_unique<Conductor>(*spec_, registry_);
  for (int i = 0; i < count; ++i) SpawnWorker(i);
  return MakeReply(request, MessageKind::kHeartbeat, nlohmann::json::object(), "conductor", spec_->strategy.iface.agent);
}

Envelope AgentHost::OnForward(const Envelope& request) {
  const int index = request.payload.at("worker").get<int>();
  std::shared_ptr<Channel> channel;
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (!conductor_) throw ValidationError("conductor", "no workers spawned");
    if (index < 0 || static_cast<std::size_t>(index) >= data_channels_.size()) {
      throw ValidationError(fmt::format("worker-{}", index), "no such worker");
    }
    channel = data_channels_[static_cast<std::size_t>(index)];
  }
  try {
    Envelope reply = channel->Request(request);
    return reply;
  } catch (const TransportError& e) {
    spdlog::warn("{} worker {} lost ({}); respawning", spec_->strategy.iface.agent, index, e.what());
    {
      std::lock_guard<std::mutex> lock(mu_);
      SpawnWorker(index);
    }
    ++respawns_;
    return MakeError(request, "worker_crashed", fmt::format("worker {} crashed and was respawned", index));
  }
}

Envelope AgentHost::OnBatch(const Envelope& request) {
  const ExperienceBatch batch = ExperienceBatchFromJson(request.payload);
  Conductor* conductor = nullptr;
  std::string agent;
  {
    std::lock_guard<std::mutex> lock(mu_);
    conductor = conductor_.get();
    agent = spec_->strategy.iface.agent;
  }
  const Conductor::Outcome outcome = conductor->HandleBatch(batch);
  const nlohmann::json payload = ParameterUpdateToJson(outcome.update);
  if (!outcome.rejected && !outcome.update.identity) {
    publisher_.Publish({kProtocolVersion, MessageKind::kParameterUpdate, "", "conductor", agent, payload});
  }
  return MakeReply(request, MessageKind::kParameterUpdate, payload, "conductor", agent);
}

std::vector<std::int64_t> AgentHost::WorkerVersions() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::int64_t> out;
  for (const auto& w : workers_) out.push_back(w ? w->worker().version() : -1);
  return out;
}

std::int64_t AgentHost::ConductorVersion() const {
  std::lock_guard<std::mutex> lock(mu_);
  return conductor_ ? conductor_->current().version : 0;
}

void AgentHost::KillWorker(int index) {
  std::lock_guard<std::mutex> lock(mu_);
  workers_.at(static_cast<std::size_t>(index)).reset();
}

}  // namespace arl
