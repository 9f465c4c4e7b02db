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

#ifndef ARL_PLAN_H_
#define ARL_PLAN_H_

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "arl/environment.h"
#include "arl/error.h"
#include "arl/power_flow.h"
#include "arl/protection.h"
#include "arl/reward.h"
#include "arl/strategy.h"
#include "arl/transport.h"

namespace arl {

inline constexpr int kPlanSchemaVersion = 1;
inline constexpr int kDefaultRounds = 10;

struct AgentPlan {
  std::string name;
  Role role = Role::kDefender;
  std::string kind;
  nlohmann::json hyper = nlohmann::json::object();
  RewardParams reward;
  std::vector<std::string> sensors;
  std::vector<std::string> actuators;
  int workers = 1;
  ActionView view = ActionView::kDiscrete;
};

struct EnvironmentPlan {
  // Exactly one of the two is used: a synthetic grid seed or an inline model.
  std::uint64_t grid_seed = 1;
  std::optional<GridModel> grid_model;
  int horizon = 100;
  int rounds = kDefaultRounds;
  ConstraintConfig constraints;
  PowerFlowOptions power_flow;
};

struct DoePlan {
  // Sorted by axis path.
  std::vector<std::pair<std::string, std::vector<nlohmann::json>>> axes;
  std::vector<std::uint64_t> seeds;
};

struct ExecutionPlan {
  int parallelism = 1;
  std::string transport = "loopback";
  std::vector<std::string> endpoints;
  std::chrono::milliseconds timeout = kDefaultTimeout;
};

struct ExperimentPlan {
  int schema_version = kPlanSchemaVersion;
  std::string name;
  EnvironmentPlan environment;
  std::vector<AgentPlan> agents;  // in document order
  DoePlan doe;
  ExecutionPlan execution;
  // The document with every default filled in. Axes are applied to this.
  nlohmann::json document;

  const AgentPlan& agent(const std::string& name) const;
};

// Every problem found in a plan, not just the first.
class PlanError : public ValidationError {
 public:
  explicit PlanError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

struct PlanValidation {
  std::optional<ExperimentPlan> plan;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Grid files named in the plan are read relative to `base_dir` and inlined.
PlanValidation ValidatePlan(const nlohmann::json& document, const std::string& base_dir = ".",
                            const StrategyRegistry& registry = StrategyRegistry::Default());
// Throws PlanError.
ExperimentPlan ParsePlan(const nlohmann::json& document, const std::string& base_dir = ".",
                         const StrategyRegistry& registry = StrategyRegistry::Default());
// Reads and parses a plan file. Throws IoError or PlanError.
ExperimentPlan LoadPlan(const std::string& path, const StrategyRegistry& registry = StrategyRegistry::Default());

// Axis paths: "environment.horizon", "environment.rounds",
// "environment.grid.seed", "environment.constraints.<field>",
// "environment.power_flow.<field>", "agents.<name>.reward.<c|mu|sigma>",
// "agents.<name>.strategy" (kind and hyper together),
// "agents.<name>.strategy.hyper.<key>", "agents.<name>.strategy.kind",
// "agents.<name>.workers". Returns a problem description, or nothing.
std::optional<std::string> CheckAxisPath(const nlohmann::json& normalized, const std::string& path,
                                         const StrategyRegistry& registry = StrategyRegistry::Default());
// Sets one axis value on a normalized document.
void ApplyAxis(nlohmann::json& normalized, const std::string& path, const nlohmann::json& value);

// Environment configuration for a concrete plan (axes already applied).
GridEnvironmentConfig MakeEnvironmentConfig(const ExperimentPlan& plan);

}  // namespace arl

#endif  // ARL_PLAN_H_
