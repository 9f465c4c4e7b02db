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

#include "arl/protection.h"

#include <algorithm>
#include <numeric>

#include "arl/error.h"

namespace arl {
namespace {

template <typename T>
std::vector<std::size_t> ByIdOrder(const std::vector<T>& items) {
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&items](std::size_t a, std::size_t b) { return items[a].id < items[b].id; });
  return order;
}

ElementKind KindOf(const Injection& inj) {
  return inj.kind == InjectionKind::kLoad ? ElementKind::kLoad : ElementKind::kSgen;
}

}  // namespace

void ConstraintConfig::Validate() const {
  if (!(v_cut <= v_min && v_min < v_max)) throw ConfigError("constraints need v_cut <= v_min < v_max");
  if (!(loading_limit > 0.0)) throw ConfigError("loading limit must be positive");
  if (cascade_cap < 1) throw ConfigError("cascade cap must be >= 1");
}

CascadeResult CheckAndCascade(GridModel model, const ConstraintConfig& config, int step, const PowerFlowOptions& pf) {
  const auto line_order = ByIdOrder(model.lines);
  const auto trafo_order = ByIdOrder(model.transformers);
  const auto inj_order = ByIdOrder(model.injections);

  EventLog log;
  PowerFlowSolution sol;
  for (int pass = 0;; ++pass) {
    if (pass == config.cascade_cap) {
      log.truncated = true;
      break;
    }
    sol = SolvePowerFlow(model, pf);
    std::vector<DisconnectionEvent> found;

    if (!sol.converged) {
      // Voltage collapse: the whole system blacks out.
      for (std::size_t k : inj_order) {
        auto& inj = model.injections[k];
        if (!inj.in_service) continue;
        inj.in_service = false;
        found.push_back({inj.id, KindOf(inj), step, DisconnectCause::kNonconvergence});
      }
    } else {
      for (std::size_t k : line_order) {
        auto& l = model.lines[k];
        if (l.in_service && sol.line_loading[k] > config.loading_limit) {
          found.push_back({l.id, ElementKind::kLine, step, DisconnectCause::kOverload});
        }
      }
      for (std::size_t k : trafo_order) {
        auto& t = model.transformers[k];
        if (t.in_service && sol.transformer_loading[k] > config.loading_limit) {
          found.push_back({t.id, ElementKind::kTransformer, step, DisconnectCause::kOverload});
        }
      }
      for (std::size_t k : inj_order) {
        const auto& inj = model.injections[k];
        if (!inj.in_service) continue;
        if (!sol.energized[inj.bus]) {
          found.push_back({inj.id, KindOf(inj), step, DisconnectCause::kIslanded});
        } else if (sol.vm[inj.bus] < config.v_min) {
          found.push_back({inj.id, KindOf(inj), step, DisconnectCause::kUndervoltage});
        } else if (sol.vm[inj.bus] > config.v_max) {
          found.push_back({inj.id, KindOf(inj), step, DisconnectCause::kOvervoltage});
        }
      }
      for (const auto& e : found) {
        switch (e.kind) {
          case ElementKind::kLine: model.lines[*model.FindLine(e.element_id)].in_service = false; break;
          case ElementKind::kTransformer:
            model.transformers[*model.FindTransformer(e.element_id)].in_service = false;
            break;
          default: model.injections[*model.FindInjection(e.element_id)].in_service = false; break;
        }
      }
    }
    if (found.empty()) break;
    log.events.insert(log.events.end(), found.begin(), found.end());
  }
  return {std::move(model), std::move(log), std::move(sol)};
}

const char* ToString(ElementKind kind) {
  switch (kind) {
    case ElementKind::kLoad: return "load";
    case ElementKind::kSgen: return "sgen";
    case ElementKind::kTransformer: return "transformer";
    case ElementKind::kLine: return "line";
  }
  return "?";
}

const char* ToString(DisconnectCause cause) {
  switch (cause) {
    case DisconnectCause::kOvervoltage: return "overvoltage";
    case DisconnectCause::kUndervoltage: return "undervoltage";
    case DisconnectCause::kOverload: return "overload";
    case DisconnectCause::kIslanded: return "islanded";
    case DisconnectCause::kNonconvergence: return "nonconvergence";
  }
  return "?";
}

ElementKind ElementKindFromString(const std::string& s) {
  for (auto k : {ElementKind::kLoad, ElementKind::kSgen, ElementKind::kTransformer, ElementKind::kLine}) {
    if (s == ToString(k)) return k;
  }
  throw ConfigError("unknown element kind '" + s + "'");
}

DisconnectCause DisconnectCauseFromString(const std::string& s) {
  for (auto c : {DisconnectCause::kOvervoltage, DisconnectCause::kUndervoltage, DisconnectCause::kOverload,
                 DisconnectCause::kIslanded, DisconnectCause::kNonconvergence}) {
    if (s == ToString(c)) return c;
  }
  throw ConfigError("unknown disconnect cause '" + s + "'");
}

nlohmann::json EventToJson(const DisconnectionEvent& e) {
  return {{"id", e.element_id}, {"kind", ToString(e.kind)}, {"step", e.step}, {"cause", ToString(e.cause)}};
}

DisconnectionEvent EventFromJson(const nlohmann::json& j) {
  return {j.at("id").get<std::string>(), ElementKindFromString(j.at("kind").get<std::string>()),
          j.at("step").get<int>(), DisconnectCauseFromString(j.at("cause").get<std::string>())};
}

nlohmann::json ConstraintConfigToJson(const ConstraintConfig& c) {
  return {{"v_min", c.v_min},
          {"v_max", c.v_max},
          {"v_cut", c.v_cut},
          {"loading_limit", c.loading_limit},
          {"cascade_cap", c.cascade_cap}};
}

ConstraintConfig ConstraintConfigFromJson(const nlohmann::json& j) {
  ConstraintConfig c;
  c.v_min = j.value("v_min", c.v_min);
  c.v_max = j.value("v_max", c.v_max);
  c.v_cut = j.value("v_cut", c.v_cut);
  c.loading_limit = j.value("loading_limit", c.loading_limit);
  c.cascade_cap = j.value("cascade_cap", c.cascade_cap);
  c.Validate();
  return c;
}

}  // namespace arl
