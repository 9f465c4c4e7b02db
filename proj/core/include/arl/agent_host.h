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

#ifndef ARL_AGENT_HOST_H_
#define ARL_AGENT_HOST_H_

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "arl/strategy.h"
#include "arl/transport.h"

namespace arl {

// Everything a conductor needs to build an agent's workers.
struct AgentSpec {
  StrategySpec strategy;
  std::uint64_t seed = 0;

  nlohmann::json ToJson() const;
  static AgentSpec FromJson(const nlohmann::json& j);
};

// One acting copy of a strategy. Keeps the transition in flight and the
// episode's experience until the terminal step.
class Worker {
 public:
  Worker(const AgentSpec& spec, int index, const ParameterSet& initial, const StrategyRegistry& registry);

  std::vector<ActuatorSetpoint> Act(const Readings& readings, int step, const ActContext& ctx);
  // Completes the pending transition. Returns the episode batch when
  // `terminal` is set.
  std::optional<ExperienceBatch> Observe(const Readings& next, double reward, bool terminal);
  // Applies updates with a newer version only. Returns whether it applied.
  bool Apply(const ParameterUpdate& update);

  std::int64_t version() const;
  int index() const { return index_; }

 private:
  int index_;
  std::unique_ptr<Strategy> strategy_;
  std::int64_t version_ = 0;
  Rng rng_;
  std::optional<Experience> pending_;
  std::vector<Experience> episode_;
  mutable std::mutex mu_;
};

// Owns the global parameters and serializes batches into the mutator.
class Conductor {
 public:
  Conductor(const AgentSpec& spec, const StrategyRegistry& registry);

  struct Outcome {
    ParameterUpdate update;
    // The batch was stale; `update` re-sends the current parameters.
    bool rejected = false;
  };
  Outcome HandleBatch(const ExperienceBatch& batch);
  ParameterSet current() const;

 private:
  std::unique_ptr<StrategyMutator> mutator_;
  ParameterSet params_;
  std::string id_;
  mutable std::mutex mu_;
};

// Serves one agent on a transport: accepts SpawnWorkers, forwards act and
// step-result traffic to the addressed worker, trains on worker batches and
// fans parameter updates out to every worker. Workers are separate endpoints
// on the same transport; the host talks to them only through channels.
class AgentHost {
 public:
  // `worker_address(i)` names the bind address of worker i.
  AgentHost(Transport& transport, const std::string& address, std::function<std::string(int)> worker_address,
            const StrategyRegistry& registry = StrategyRegistry::Default());
  ~AgentHost();

  AgentHost(const AgentHost&) = delete;
  AgentHost& operator=(const AgentHost&) = delete;

  std::string address() const;
  // Parameter version held by each live worker.
  std::vector<std::int64_t> WorkerVersions() const;
  std::int64_t ConductorVersion() const;
  int respawns() const { return respawns_.load(); }

  // Drops worker i's endpoint, as if its process died.
  void KillWorker(int index);

 private:
  class WorkerNode;

  Envelope OnSpawn(const Envelope& request);
  Envelope OnForward(const Envelope& request);
  Envelope OnBatch(const Envelope& request);
  void SpawnWorker(int index);

  Transport& transport_;
  std::function<std::string(int)> worker_address_;
  const StrategyRegistry& registry_;
  std::unique_ptr<Listener> listener_;

  mutable std::mutex mu_;
  std::optional<AgentSpec> spec_;
  std::unique_ptr<Conductor> conductor_;
  std::vector<std::unique_ptr<WorkerNode>> workers_;
  std::vector<std::shared_ptr<Channel>> data_channels_;
  std::vector<std::shared_ptr<Channel>> publish_channels_;
  Publisher publisher_;
  std::atomic<int> respawns_{0};
};

}  // namespace arl

#endif  // ARL_AGENT_HOST_H_
