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

#ifndef ARL_GENERATOR_H_
#define ARL_GENERATOR_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "arl/plan.h"

namespace arl {

// Reported in every descriptor and record header.
std::string SoftwareVersion();

// One concrete run: a plan with every axis fixed, plus its seeds.
struct RunDescriptor {
  std::string run_id;
  std::string experiment;
  // Axis path -> chosen value.
  nlohmann::json point = nlohmann::json::object();
  // Normalized plan document with the point applied and no axes left.
  nlohmann::json resolved;
  std::uint64_t master_seed = 0;
  // Component name ("grid", "agent/<name>") -> derived seed.
  std::map<std::string, std::uint64_t> seeds;
  std::string software_version;

  nlohmann::json ToJson() const;
  static RunDescriptor FromJson(const nlohmann::json& j);
  // The resolved document parsed back into a plan.
  ExperimentPlan Plan(const StrategyRegistry& registry = StrategyRegistry::Default()) const;
};

// Hex FNV-1a over the canonical text of {resolved, point, seed}.
std::string ComputeRunId(const nlohmann::json& resolved, const nlohmann::json& point, std::uint64_t seed);

// Cross-product of all axes (sorted by path, first axis slowest) times the
// seed list.
std::vector<RunDescriptor> GenerateRuns(const ExperimentPlan& plan,
                                        const StrategyRegistry& registry = StrategyRegistry::Default());

}  // namespace arl

#endif  // ARL_GENERATOR_H_
