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

#include "arl/reward.h"

#include <cmath>

#include "arl/error.h"

namespace arl {

const char* ToString(Role role) { return role == Role::kAttacker ? "attacker" : "defender"; }

Role RoleFromString(const std::string& s) {
  if (s == "attacker") return Role::kAttacker;
  if (s == "defender") return Role::kDefender;
  throw ConfigError("unknown role '" + s + "'");
}

void RewardParams::Validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("reward sigma must be positive");
  if (!std::isfinite(c) || !std::isfinite(mu)) throw ConfigError("reward c and mu must be finite");
}

double MeanVoltage(std::span<const Space> sensor_spaces, std::span<const SensorReading> readings,
                   const Space& voltage_space) {
  if (sensor_spaces.size() != readings.size()) throw ConfigError("reading count does not match sensor count");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < readings.size(); ++i) {
    if (!(sensor_spaces[i] == voltage_space)) continue;
    sum += ScalarOf(readings[i].value);
    ++count;
  }
  if (count == 0) throw ConfigError("agent has no voltage sensors to evaluate");
  return sum / static_cast<double>(count);
}

double Performance(const RewardParams& p, double mean_voltage) {
  const double d = mean_voltage - p.mu;
  const double g = std::exp(-(d * d) / (2.0 * p.sigma * p.sigma));
  return (p.role == Role::kAttacker ? -g : g) - p.c;
}

double Performance(const RewardParams& p, std::span<const Space> sensor_spaces,
                   std::span<const SensorReading> readings) {
  return Performance(p, MeanVoltage(sensor_spaces, readings, p.voltage_space));
}

nlohmann::json RewardParamsToJson(const RewardParams& p) {
  return {{"c", p.c}, {"mu", p.mu}, {"sigma", p.sigma}, {"voltage_space", SpaceToJson(p.voltage_space)}};
}

RewardParams RewardParamsFromJson(const nlohmann::json& j, Role role) {
  RewardParams p;
  p.role = role;
  p.c = j.value("c", p.c);
  p.mu = j.value("mu", p.mu);
  p.sigma = j.value("sigma", p.sigma);
  if (j.contains("voltage_space")) p.voltage_space = SpaceFromJson(j.at("voltage_space"));
  p.Validate();
  return p;
}

}  // namespace arl
