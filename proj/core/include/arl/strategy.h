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

#ifndef ARL_STRATEGY_H_
#define ARL_STRATEGY_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "arl/environment.h"
#include "arl/error.h"
#include "arl/random.h"
#include "arl/reward.h"

namespace arl {

enum class Capability { kDiscreteOnly, kContinuous };

// Versioned parameter blob shared by every worker of an agent.
struct ParameterSet {
  nlohmann::json blob;
  std::int64_t version = 0;
};

struct ParameterUpdate {
  nlohmann::json blob;
  std::int64_t version = 0;
  std::string mutator_id;
  // An identity update carries the unchanged parameters and version.
  bool identity = false;
};

struct Experience {
  int step = 0;
  Readings readings;
  std::vector<ActuatorSetpoint> setpoints;
  double reward = 0.0;
  Readings next_readings;
  bool terminal = false;
};

struct ExperienceBatch {
  int worker = 0;
  std::int64_t base_version = 0;
  std::vector<Experience> tuples;  // ordered by step
};

// Episode position, used by exploration schedules.
struct ActContext {
  int episode = 0;
  int episodes = 1;
};

// Maps sensor readings to one setpoint per actuator.
class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual std::vector<ActuatorSetpoint> ProposeActions(const Readings& readings, const ActContext& ctx,
                                                       Rng& rng) const = 0;
  virtual void SetParameters(const ParameterSet& params) = 0;
};

// Training rule. Batches are processed one at a time by the conductor.
class StrategyMutator {
 public:
  virtual ~StrategyMutator() = default;
  // Throws StaleParametersError if the batch was produced against a version
  // other than `current.version`.
  virtual ParameterUpdate Mutate(const ExperienceBatch& batch, const ParameterSet& current) = 0;
};

// What the two factories receive.
struct StrategySpec {
  std::string kind;
  nlohmann::json hyper = nlohmann::json::object();
  AgentInterface iface;
  RewardParams reward;
};

// A new algorithm registers exactly a strategy and a mutator under a kind tag.
struct StrategyKind {
  Capability capability = Capability::kDiscreteOnly;
  std::function<std::unique_ptr<Strategy>(const StrategySpec&)> make_strategy;
  std::function<std::unique_ptr<StrategyMutator>(const StrategySpec&)> make_mutator;
  std::function<ParameterSet(const StrategySpec&)> initial_parameters;
  // Returns problems with the hyperparameters; empty when fine.
  std::function<std::vector<std::string>(const nlohmann::json&)> check_hyper;
  // Hyperparameter names the kind understands.
  std::vector<std::string> hyper_keys;
};

class StrategyRegistry {
 public:
  // Registry with the built-in kinds: "random", "fixed", "tabular_q".
  static const StrategyRegistry& Default();

  void Register(const std::string& kind, StrategyKind entry);
  bool Has(const std::string& kind) const { return kinds_.count(kind) > 0; }
  // Throws ConfigError for unknown kinds.
  const StrategyKind& Get(const std::string& kind) const;
  std::vector<std::string> Kinds() const;

 private:
  std::map<std::string, StrategyKind> kinds_;
};

nlohmann::json ExperienceBatchToJson(const ExperienceBatch& b);
ExperienceBatch ExperienceBatchFromJson(const nlohmann::json& j);
nlohmann::json ParameterUpdateToJson(const ParameterUpdate& u);
ParameterUpdate ParameterUpdateFromJson(const nlohmann::json& j);

}  // namespace arl

#endif  // ARL_STRATEGY_H_
