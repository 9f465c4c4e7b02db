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

#ifndef ARL_REWARD_H_
#define ARL_REWARD_H_

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "arl/spaces.h"

namespace arl {

enum class Role { kAttacker, kDefender };

const char* ToString(Role role);
Role RoleFromString(const std::string& s);

// Gaussian performance curve around `mu` with width `sigma` and offset `c`.
// The readings it averages are those of sensors whose space equals
// `voltage_space`.
struct RewardParams {
  double c = 0.0;
  double mu = 1.0;
  double sigma = 0.05;
  Role role = Role::kDefender;
  Space voltage_space = Space::MakeBox(0.85, 1.15);

  void Validate() const;
};

// Mean of the readings taken from sensors with the voltage space. Throws
// ConfigError if there are none.
double MeanVoltage(std::span<const Space> sensor_spaces, std::span<const SensorReading> readings,
                   const Space& voltage_space);

// sign * exp(-(mean - mu)^2 / (2 sigma^2)) - c, sign = -1 for attackers.
double Performance(const RewardParams& params, double mean_voltage);
double Performance(const RewardParams& params, std::span<const Space> sensor_spaces,
                   std::span<const SensorReading> readings);

nlohmann::json RewardParamsToJson(const RewardParams& p);
// Missing keys keep their defaults; `role` is supplied by the agent entry.
RewardParams RewardParamsFromJson(const nlohmann::json& j, Role role);

}  // namespace arl

#endif  // ARL_REWARD_H_
