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

#include "arl/environment.h"

#include <algorithm>
#include <fnmatch.h>

#include <fmt/format.h>

#include "arl/error.h"

namespace arl {
namespace {

bool MatchesAny(const std::vector<std::string>& globs, const std::string& id) {
  return std::any_of(globs.begin(), globs.end(),
                     [&id](const std::string& g) { return fnmatch(g.c_str(), id.c_str(), 0) == 0; });
}

const Space& VoltageSpace() {
  static const Space s = Space::MakeBox(0.85, 1.15);
  return s;
}

const Space& UnitBox() {
  static const Space s = Space::MakeBox(0.0, 1.0);
  return s;
}

}  // namespace

std::vector<Space> AgentInterface::SensorSpaces() const {
  std::vector<Space> out;
  out.reserve(sensors.size());
  for (const auto& s : sensors) out.push_back(s.space);
  return out;
}

const char* ToString(ActionView view) { return view == ActionView::kDiscrete ? "discrete" : "continuous"; }

ActionView ActionViewFromString(const std::string& s) {
  if (s == "discrete") return ActionView::kDiscrete;
  if (s == "continuous") return ActionView::kContinuous;
  throw ConfigError("unknown action view '" + s + "'");
}

const char* ToString(ActuatorTarget::Kind kind) {
  switch (kind) {
    case ActuatorTarget::Kind::kLoadScaling: return "load";
    case ActuatorTarget::Kind::kSgenScaling: return "sgen";
    case ActuatorTarget::Kind::kTap: return "tap";
  }
  return "?";
}

GridEnvironment::GridEnvironment(GridEnvironmentConfig config) : config_(std::move(config)) {
  if (config_.horizon < 1) throw ConfigError("horizon must be >= 1");
  config_.constraints.Validate();
  config_.grid.Validate();
  for (const auto& inj : config_.grid.injections) nominal_kw_[inj.id] = inj.p_nominal_kw;
  Wire();
}

void GridEnvironment::Wire() {
  const GridModel& g = config_.grid;
  std::vector<const AgentWiring*> order;
  for (const auto& a : config_.agents) order.push_back(&a);
  std::stable_sort(order.begin(), order.end(), [](const AgentWiring* a, const AgentWiring* b) {
    if (a->role != b->role) return a->role == Role::kDefender;
    return a->name < b->name;
  });

  std::vector<std::string> names;
  for (const AgentWiring* w : order) {
    if (std::find(names.begin(), names.end(), w->name) != names.end()) {
      throw ConfigError("duplicate agent name '" + w->name + "'");
    }
    names.push_back(w->name);

    AgentWires aw;
    aw.iface.agent = w->name;
    aw.iface.role = w->role;

    // Candidate elements in ascending id order.
    struct Element {
      std::string id;
      enum { kBus, kInjection, kTransformer } type;
      std::size_t index;
    };
    std::vector<Element> elements;
    for (std::size_t i = 0; i < g.buses.size(); ++i) elements.push_back({g.buses[i].id, Element::kBus, i});
    for (std::size_t i = 0; i < g.injections.size(); ++i) {
      elements.push_back({g.injections[i].id, Element::kInjection, i});
    }
    for (std::size_t i = 0; i < g.transformers.size(); ++i) {
      elements.push_back({g.transformers[i].id, Element::kTransformer, i});
    }
    std::sort(elements.begin(), elements.end(), [](const Element& a, const Element& b) { return a.id < b.id; });

    for (const auto& e : elements) {
      if (!MatchesAny(w->sensors, e.id)) continue;
      switch (e.type) {
        case Element::kBus: aw.sensors.push_back({SensorWire::Kind::kBusVoltage, e.index, 0}); break;
        case Element::kInjection:
          aw.sensors.push_back({SensorWire::Kind::kBusVoltage, g.injections[e.index].bus, e.index});
          aw.sensors.push_back({SensorWire::Kind::kRelativePower, g.injections[e.index].bus, e.index});
          break;
        case Element::kTransformer:
          aw.sensors.push_back({SensorWire::Kind::kBusVoltage, g.transformers[e.index].lv_bus, 0});
          break;
      }
    }
    for (const auto& e : elements) {
      if (!MatchesAny(w->actuators, e.id)) continue;
      if (e.type == Element::kInjection) {
        const auto& inj = g.injections[e.index];
        ActuatorWire wire{{inj.id,
                           inj.kind == InjectionKind::kLoad ? ActuatorTarget::Kind::kLoadScaling
                                                            : ActuatorTarget::Kind::kSgenScaling,
                           0.0},
                          e.index,
                          w->view == ActionView::kDiscrete ? Space::MakeDiscrete(kScalingSteps) : UnitBox()};
        wire.target.neutral = w->view == ActionView::kDiscrete ? kScalingSteps - 1 : 1.0;
        aw.actuators.push_back(std::move(wire));
      } else if (e.type == Element::kTransformer) {
        const auto& t = g.transformers[e.index];
        aw.actuators.push_back({{t.id, ActuatorTarget::Kind::kTap, static_cast<double>(t.tap_neutral - t.tap_min)},
                                e.index,
                                Space::MakeDiscrete(t.TapPositions())});
      }
    }
    if (aw.sensors.empty()) throw ConfigError("agent '" + w->name + "' has no sensors");
    if (aw.actuators.empty()) throw ConfigError("agent '" + w->name + "' has no actuators");

    for (std::size_t k = 0; k < aw.sensors.size(); ++k) {
      aw.iface.sensors.push_back({fmt::format("{}:s{:03d}", w->name, k),
                                  aw.sensors[k].kind == SensorWire::Kind::kBusVoltage ? VoltageSpace() : UnitBox()});
    }
    for (std::size_t k = 0; k < aw.actuators.size(); ++k) {
      const std::string id = fmt::format("{}:a{:03d}", w->name, k);
      aw.iface.actuators.push_back({id, aw.actuators[k].space});
      aw.actuator_index[id] = k;
    }
    agents_.push_back(std::move(aw));
  }
}

std::vector<AgentInterface> GridEnvironment::Interfaces() const {
  std::vector<AgentInterface> out;
  for (const auto& a : agents_) out.push_back(a.iface);
  return out;
}

const ActuatorTarget& GridEnvironment::DescribeActuator(const std::string& actuator_id) const {
  for (const auto& a : agents_) {
    const auto it = a.actuator_index.find(actuator_id);
    if (it != a.actuator_index.end()) return a.actuators[it->second].target;
  }
  throw ValidationError(actuator_id, "unknown actuator");
}

ResetOutcome GridEnvironment::Reset() {
  model_ = config_.grid;
  for (auto& inj : model_.injections) {
    inj.scaling = 1.0;
    inj.in_service = true;
  }
  for (auto& t : model_.transformers) {
    t.tap = t.tap_neutral;
    t.in_service = true;
  }
  for (auto& l : model_.lines) l.in_service = true;

  CascadeResult check = CheckAndCascade(model_, config_.constraints, 0, config_.power_flow);
  if (!check.log.events.empty() || !check.solution.converged) {
    throw ValidationError(config_.grid.name, "base case violates the grid constraints");
  }
  solution_ = std::move(check.solution);
  ledger_ = CoinLedger(config_.horizon);
  step_ = 0;
  terminated_ = false;
  return {Interfaces(), ReadAll(nullptr)};
}

void GridEnvironment::ApplySetpoint(const ActuatorWire& wire, const SpaceValue& value) {
  if (wire.target.kind == ActuatorTarget::Kind::kTap) {
    auto& t = model_.transformers[wire.index];
    if (!t.in_service) return;
    t.tap = t.tap_min + static_cast<int>(std::get<std::int64_t>(value));
    return;
  }
  auto& inj = model_.injections[wire.index];
  if (!inj.in_service) return;
  if (wire.space.is_discrete()) {
    inj.scaling = DiscretizeSetpoint(UnitBox(), std::get<std::int64_t>(value), kScalingSteps);
  } else {
    inj.scaling = std::get<std::vector<double>>(value).front();
  }
}

StepOutcome GridEnvironment::Step(const JointActions& actions) {
  if (terminated_) throw ValidationError("environment", "step requested after termination");

  // Validate everything before touching the model.
  for (const auto& [agent, setpoints] : actions) {
    const auto it = std::find_if(agents_.begin(), agents_.end(),
                                 [&agent](const AgentWires& a) { return a.iface.agent == agent; });
    if (it == agents_.end()) throw ValidationError(agent, "unknown agent");
    for (const auto& sp : setpoints) {
      const auto idx = it->actuator_index.find(sp.id);
      if (idx == it->actuator_index.end()) throw ValidationError(sp.id, "unknown actuator");
      bool inside = false;
      try {
        inside = Contains(it->actuators[idx->second].space, sp.value);
      } catch (const DomainTypeError&) {
        inside = false;
      }
      if (!inside) throw ValidationError(sp.id, "setpoint outside the actuator space");
    }
  }

  // Defenders first, attackers override.
  for (const auto& a : agents_) {
    const auto it = actions.find(a.iface.agent);
    if (it == actions.end()) continue;
    for (const auto& sp : it->second) ApplySetpoint(a.actuators[a.actuator_index.at(sp.id)], sp.value);
  }

  CascadeResult result = CheckAndCascade(std::move(model_), config_.constraints, step_, config_.power_flow);
  model_ = std::move(result.model);
  solution_ = std::move(result.solution);

  std::set<std::string> offline;
  for (const auto& inj : model_.injections) {
    if (!inj.in_service) offline.insert(inj.id);
  }
  ledger_.Accrue(result.log.events, offline, nominal_kw_, step_);
  ++step_;
  terminated_ = step_ >= config_.horizon || ledger_.AttackerWon();

  StepOutcome out;
  out.readings = ReadAll(&out.raw_voltages);
  out.events = std::move(result.log.events);
  out.truncated = result.log.truncated;
  out.terminated = terminated_;
  out.defender_balance = ledger_.defender_balance();
  out.attacker_total = ledger_.attacker_total();
  return out;
}

ReadingsByAgent GridEnvironment::ReadAll(std::map<std::string, double>* raw) const {
  ReadingsByAgent out;
  const Box& vb = VoltageSpace().box();
  for (const auto& a : agents_) {
    Readings r;
    r.reserve(a.sensors.size());
    for (std::size_t k = 0; k < a.sensors.size(); ++k) {
      const SensorWire& w = a.sensors[k];
      const std::string& id = a.iface.sensors[k].id;
      double value = 0.0;
      if (w.kind == SensorWire::Kind::kBusVoltage) {
        const double v = solution_.converged ? solution_.vm[w.bus] : 0.0;
        value = std::clamp(v, vb.low[0], vb.high[0]);
        if (raw != nullptr && value != v) (*raw)[id] = v;
      } else {
        value = model_.injections[w.injection].ActivePowerKw() / model_.injections[w.injection].p_nominal_kw;
      }
      r.push_back({id, std::vector<double>{value}});
    }
    out[a.iface.agent] = std::move(r);
  }
  return out;
}

nlohmann::json ReadingsToJson(const Readings& readings) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : readings) j.push_back({r.id, ValueToJson(r.value)});
  return j;
}

Readings ReadingsFromJson(const nlohmann::json& j) {
  Readings out;
  for (const auto& e : j) out.push_back({e.at(0).get<std::string>(), ValueFromJson(e.at(1))});
  return out;
}

nlohmann::json SetpointsToJson(const std::vector<ActuatorSetpoint>& setpoints) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& s : setpoints) j.push_back({s.id, ValueToJson(s.value)});
  return j;
}

std::vector<ActuatorSetpoint> SetpointsFromJson(const nlohmann::json& j) {
  std::vector<ActuatorSetpoint> out;
  for (const auto& e : j) out.push_back({e.at(0).get<std::string>(), ValueFromJson(e.at(1))});
  return out;
}

nlohmann::json InterfaceToJson(const AgentInterface& iface) {
  nlohmann::json sensors = nlohmann::json::array();
  for (const auto& s : iface.sensors) sensors.push_back({s.id, SpaceToJson(s.space)});
  nlohmann::json actuators = nlohmann::json::array();
  for (const auto& a : iface.actuators) actuators.push_back({a.id, SpaceToJson(a.space)});
  return {{"agent", iface.agent}, {"role", ToString(iface.role)}, {"sensors", sensors}, {"actuators", actuators}};
}

AgentInterface InterfaceFromJson(const nlohmann::json& j) {
  AgentInterface iface;
  iface.agent = j.at("agent").get<std::string>();
  iface.role = RoleFromString(j.at("role").get<std::string>());
  for (const auto& s : j.at("sensors")) iface.sensors.push_back({s.at(0).get<std::string>(), SpaceFromJson(s.at(1))});
  for (const auto& a : j.at("actuators")) {
    iface.actuators.push_back({a.at(0).get<std::string>(), SpaceFromJson(a.at(1))});
  }
  return iface;
}

}  // namespace arl
