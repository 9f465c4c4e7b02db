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

#ifndef ARL_ENVIRONMENT_H_
#define ARL_ENVIRONMENT_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "arl/ctf.h"
#include "arl/grid.h"
#include "arl/power_flow.h"
#include "arl/protection.h"
#include "arl/reward.h"
#include "arl/spaces.h"

namespace arl {

struct SensorInfo {
  std::string id;
  Space space;
  bool operator==(const SensorInfo&) const = default;
};

struct ActuatorInfo {
  std::string id;
  Space space;
  bool operator==(const ActuatorInfo&) const = default;
};

// What one agent may see and touch. Ids are opaque tokens.
struct AgentInterface {
  std::string agent;
  Role role = Role::kDefender;
  std::vector<SensorInfo> sensors;
  std::vector<ActuatorInfo> actuators;

  std::vector<Space> SensorSpaces() const;
  bool operator==(const AgentInterface&) const = default;
};

using Readings = std::vector<SensorReading>;
using ReadingsByAgent = std::map<std::string, Readings>;
using JointActions = std::map<std::string, std::vector<ActuatorSetpoint>>;

struct ResetOutcome {
  std::vector<AgentInterface> interfaces;
  ReadingsByAgent readings;
};

struct StepOutcome {
  ReadingsByAgent readings;
  std::vector<DisconnectionEvent> events;
  bool truncated = false;
  bool terminated = false;
  // Defender balance and attacker total after the step, in milli-coins.
  MilliCoins defender_balance = kInitialStake;
  MilliCoins attacker_total = 0;
  // Unclamped values of voltage sensors whose reading was clamped.
  std::map<std::string, double> raw_voltages;
};

// The domain-free contract agents and governors program against. Any
// simulator (or a mock) can stand behind it.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual ResetOutcome Reset() = 0;
  // Throws ValidationError (naming the actuator) for unknown ids or values
  // outside their space, and when called after termination.
  virtual StepOutcome Step(const JointActions& actions) = 0;
  virtual std::vector<AgentInterface> Interfaces() const = 0;
  virtual bool terminated() const = 0;
  virtual int step_index() const = 0;
  virtual int horizon() const = 0;
};

enum class ActionView { kDiscrete, kContinuous };

const char* ToString(ActionView view);
ActionView ActionViewFromString(const std::string& s);

// Which grid elements an agent senses and actuates, by glob over element ids
// ("load/*", "sgen/pv*", "trafo/*", "bus/*").
struct AgentWiring {
  std::string name;
  Role role = Role::kDefender;
  std::vector<std::string> sensors;
  std::vector<std::string> actuators;
  ActionView view = ActionView::kDiscrete;
};

struct GridEnvironmentConfig {
  GridModel grid;
  ConstraintConfig constraints;
  PowerFlowOptions power_flow;
  int horizon = 100;
  std::vector<AgentWiring> agents;
};

inline constexpr int kScalingSteps = 11;

// Internal description of an actuator, for analysis tables. Never sent to
// agents.
struct ActuatorTarget {
  std::string element_id;
  enum class Kind { kLoadScaling, kSgenScaling, kTap } kind = Kind::kLoadScaling;
  // Value of the actuator in its untouched state (scaling 1, neutral tap),
  // expressed in the actuator's own space.
  double neutral = 0.0;
};

const char* ToString(ActuatorTarget::Kind kind);

class GridEnvironment final : public Environment {
 public:
  // Throws ConfigError for unusable wiring.
  explicit GridEnvironment(GridEnvironmentConfig config);

  // Throws ValidationError if the untouched grid already violates the grid
  // code.
  ResetOutcome Reset() override;
  StepOutcome Step(const JointActions& actions) override;
  std::vector<AgentInterface> Interfaces() const override;
  bool terminated() const override { return terminated_; }
  int step_index() const override { return step_; }
  int horizon() const override { return config_.horizon; }

  const GridModel& model() const { return model_; }
  const CoinLedger& ledger() const { return ledger_; }
  const PowerFlowSolution& solution() const { return solution_; }
  const ActuatorTarget& DescribeActuator(const std::string& actuator_id) const;

 private:
  struct SensorWire {
    enum class Kind { kBusVoltage, kRelativePower } kind;
    std::size_t bus = 0;
    std::size_t injection = 0;
  };
  struct ActuatorWire {
    ActuatorTarget target;
    std::size_t index = 0;  // injection or transformer index
    Space space;
  };
  struct AgentWires {
    AgentInterface iface;
    std::vector<SensorWire> sensors;
    std::vector<ActuatorWire> actuators;
    std::map<std::string, std::size_t> actuator_index;
  };

  void Wire();
  void ApplySetpoint(const ActuatorWire& wire, const SpaceValue& value);
  ReadingsByAgent ReadAll(std::map<std::string, double>* raw) const;

  GridEnvironmentConfig config_;
  std::vector<AgentWires> agents_;  // defenders first, then attackers
  GridModel model_;
  PowerFlowSolution solution_;
  CoinLedger ledger_;
  std::map<std::string, double> nominal_kw_;
  int step_ = 0;
  bool terminated_ = true;
};

nlohmann::json ReadingsToJson(const Readings& readings);
Readings ReadingsFromJson(const nlohmann::json& j);
nlohmann::json SetpointsToJson(const std::vector<ActuatorSetpoint>& setpoints);
std::vector<ActuatorSetpoint> SetpointsFromJson(const nlohmann::json& j);
nlohmann::json InterfaceToJson(const AgentInterface& iface);
AgentInterface InterfaceFromJson(const nlohmann::json& j);

}  // namespace arl

#endif  // ARL_ENVIRONMENT_H_
