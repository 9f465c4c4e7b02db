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

#include "arl/generator.h"

#include <fmt/format.h>

#include "arl/random.h"
#include "arl/transport.h"

#ifndef ARL_VERSION
#define ARL_VERSION "0.0.0"
#endif

namespace arl {

std::string SoftwareVersion() { return std::string("arl ") + ARL_VERSION; }

nlohmann::json RunDescriptor::ToJson() const {
  return {{"run_id", run_id},
          {"experiment", experiment},
          {"point", point},
          {"resolved", resolved},
          {"master_seed", master_seed},
          {"seeds", seeds},
          {"software_version", software_version}};
}

RunDescriptor RunDescriptor::FromJson(const nlohmann::json& j) {
  RunDescriptor d;
  d.run_id = j.at("run_id").get<std::string>();
  d.experiment = j.at("experiment").get<std::string>();
  d.point = j.at("point");
  d.resolved = j.at("resolved");
  d.master_seed = j.at("master_seed").get<std::uint64_t>();
  d.seeds = j.at("seeds").get<std::map<std::string, std::uint64_t>>();
  d.software_version = j.at("software_version").get<std::string>();
  return d;
}

ExperimentPlan RunDescriptor::Plan(const StrategyRegistry& registry) const { return ParsePlan(resolved, ".", registry); }

std::string ComputeRunId(const nlohmann::json& resolved, const nlohmann::json& point, std::uint64_t seed) {
  const nlohmann::json key{{"resolved", resolved}, {"point", point}, {"seed", seed}};
  return fmt::format("{:016x}", Fnv1a64(CanonicalText(key)));
}

std::vector<RunDescriptor> GenerateRuns(const ExperimentPlan& plan, const StrategyRegistry& registry) {
  const auto& axes = plan.doe.axes;
  for (const auto& [path, values] : axes) {
    if (values.empty()) throw PlanError({"doe.axes." + path + ": must be a non-empty list"});
  }
  std::vector<RunDescriptor> out;
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    nlohmann::json doc = plan.document;
    nlohmann::json point = nlohmann::json::object();
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const auto& value = axes[a].second[idx[a]];
      ApplyAxis(doc, axes[a].first, value);
      point[axes[a].first] = value;
    }
    for (const std::uint64_t seed : plan.doe.seeds) {
      nlohmann::json resolved = doc;
      resolved["doe"] = {{"axes", nlohmann::json::object()}, {"seeds", {seed}}};
      // Catches combinations that only fail together.
      const ExperimentPlan concrete = ParsePlan(resolved, ".", registry);
      RunDescriptor d;
      d.experiment = plan.name;
      d.point = point;
      d.resolved = resolved;
      d.master_seed = seed;
      d.seeds["grid"] = concrete.environment.grid_seed;
      for (const auto& agent : concrete.agents) d.seeds["agent/" + agent.name] = DeriveSeed(seed, "agent/" + agent.name);
      d.software_version = SoftwareVersion();
      d.run_id = ComputeRunId(resolved, point, seed);
      out.push_back(std::move(d));
    }
    // Odometer increment, last axis fastest.
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < axes[a].second.size()) break;
      idx[a] = 0;
      if (a == 0) return out;
    }
    if (axes.empty()) return out;
  }
}

}  // namespace arl
