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

#ifndef ARL_PROTECTION_H_
#define ARL_PROTECTION_H_

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "arl/grid.h"
#include "arl/power_flow.h"

namespace arl {

struct ConstraintConfig {
  double v_min = 0.85;
  double v_max = 1.15;
  // Severity marker only; disconnection already fires at v_min.
  double v_cut = 0.8;
  double loading_limit = 1.0;
  int cascade_cap = 50;

  // Throws ConfigError unless v_cut <= v_min < v_max and loading_limit > 0.
  void Validate() const;
};

enum class ElementKind { kLoad, kSgen, kTransformer, kLine };
enum class DisconnectCause { kOvervoltage, kUndervoltage, kOverload, kIslanded, kNonconvergence };

struct DisconnectionEvent {
  std::string element_id;
  ElementKind kind = ElementKind::kLoad;
  int step = 0;
  DisconnectCause cause = DisconnectCause::kOverload;
  bool operator==(const DisconnectionEvent&) const = default;
};

struct EventLog {
  std::vector<DisconnectionEvent> events;
  // Set when the cascade loop stopped at the iteration cap.
  bool truncated = false;
  bool operator==(const EventLog&) const = default;
};

struct CascadeResult {
  GridModel model;
  EventLog log;
  PowerFlowSolution solution;
};

// Solve, trip every violating branch and injection, repeat until a pass is
// quiet. Elements are evaluated in ascending id order; tripped elements stay
// out of service in the returned model.
CascadeResult CheckAndCascade(GridModel model, const ConstraintConfig& config, int step,
                              const PowerFlowOptions& pf = {});

const char* ToString(ElementKind kind);
const char* ToString(DisconnectCause cause);
ElementKind ElementKindFromString(const std::string& s);
DisconnectCause DisconnectCauseFromString(const std::string& s);

nlohmann::json EventToJson(const DisconnectionEvent& e);
DisconnectionEvent EventFromJson(const nlohmann::json& j);
nlohmann::json ConstraintConfigToJson(const ConstraintConfig& c);
// Missing keys keep their defaults.
ConstraintConfig ConstraintConfigFromJson(const nlohmann::json& j);

}  // namespace arl

#endif  // ARL_PROTECTION_H_
