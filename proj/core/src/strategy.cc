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

#include "arl/strategy.h"

#include <cmath>

#include "arl/error.h"
#include "arl/tabular_q.h"

namespace arl {
namespace {

// Uniform over each actuator space.
class RandomStrategy final : public Strategy {
 public:
  explicit RandomStrategy(AgentInterface iface) : iface_(std::move(iface)) {}

  std::vector<ActuatorSetpoint> ProposeActions(const Readings&, const ActContext&, Rng& rng) const override {
    std::vector<ActuatorSetpoint> out;
    out.reserve(iface_.actuators.size());
    for (const auto& a : iface_.actuators) out.push_back({a.id, SampleUniform(a.space, rng)});
    return out;
  }
  void SetParameters(const ParameterSet&) override {}

 private:
  AgentInterface iface_;
};

// Every actuator held at the same relative position `value` in [0, 1] of its
// range.
class FixedStrategy final : public Strategy {
 public:
  FixedStrategy(AgentInterface iface, double value) : iface_(std::move(iface)), value_(value) {}

  std::vector<ActuatorSetpoint> ProposeActions(const Readings&, const ActContext&, Rng&) const override {
    std::vector<ActuatorSetpoint> out;
    out.reserve(iface_.actuators.size());
    for (const auto& a : iface_.actuators) {
      if (a.space.is_discrete()) {
        const auto n = a.space.discrete().n;
        out.push_back({a.id, static_cast<std::int64_t>(std::lround(value_ * static_cast<double>(n - 1)))});
      } else {
        const Box& b = a.space.box();
        std::vector<double> v(b.dim());
        for (std::size_t i = 0; i < b.dim(); ++i) v[i] = b.low[i] + value_ * (b.high[i] - b.low[i]);
        out.push_back({a.id, std::move(v)});
      }
    }
    return out;
  }
  void SetParameters(const ParameterSet&) override {}

 private:
  AgentInterface iface_;
  double value_;
};

// Strategies without training return the parameters untouched.
class IdentityMutator final : public StrategyMutator {
 public:
  explicit IdentityMutator(std::string id) : id_(std::move(id)) {}
  ParameterUpdate Mutate(const ExperienceBatch& batch, const ParameterSet& current) override {
    if (batch.tuples.empty()) throw ConfigError("experience batch is empty");
    if (batch.base_version != current.version) throw StaleParametersError("batch built on stale parameters");
    return {current.blob, current.version, id_, true};
  }

 private:
  std::string id_;
};

ParameterSet EmptyParameters(const StrategySpec&) { return {nlohmann::json::object(), 0}; }

StrategyRegistry MakeDefault() {
  StrategyRegistry r;
  r.Register("random", {Capability::kContinuous,
                        [](const StrategySpec& s) { return std::make_unique<RandomStrategy>(s.iface); },
                        [](const StrategySpec&) { return std::make_unique<IdentityMutator>("random"); },
                        EmptyParameters, [](const nlohmann::json&) { return std::vector<std::string>{}; }, {}});
  r.Register("fixed",
             {Capability::kContinuous,
              [](const StrategySpec& s) {
                return std::make_unique<FixedStrategy>(s.iface, s.hyper.value("value", 1.0));
              },
              [](const StrategySpec&) { return std::make_unique<IdentityMutator>("fixed"); }, EmptyParameters,
              [](const nlohmann::json& h) {
                std::vector<std::string> problems;
                const double v = h.value("value", 1.0);
                if (!(v >= 0.0 && v <= 1.0)) problems.push_back("fixed.value must lie in [0, 1]");
                return problems;
              },
              {"value"}});
  r.Register("tabular_q",
             {Capability::kDiscreteOnly,
              [](const StrategySpec& s) {
                return std::make_unique<TabularQStrategy>(TabularQConfig::FromJson(s.hyper), s.iface);
              },
              [](const StrategySpec& s) {
                return std::make_unique<TabularQMutator>(TabularQConfig::FromJson(s.hyper), s.iface);
              },
              [](const StrategySpec& s) {
                return ParameterSet{QTables::Zero(s.iface, TabularQConfig::FromJson(s.hyper).bins).ToJson(), 0};
              },
              TabularQConfig::Check,
              {"alpha", "bins", "epsilon_end", "epsilon_start", "gamma"}});
  return r;
}

}  // namespace

const StrategyRegistry& StrategyRegistry::Default() {
  static const StrategyRegistry registry = MakeDefault();
  return registry;
}

void StrategyRegistry::Register(const std::string& kind, StrategyKind entry) { kinds_[kind] = std::move(entry); }

const StrategyKind& StrategyRegistry::Get(const std::string& kind) const {
  const auto it = kinds_.find(kind);
  if (it == kinds_.end()) throw ConfigError("unknown strategy kind '" + kind + "'");
  return it->second;
}

std::vector<std::string> StrategyRegistry::Kinds() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : kinds_) out.push_back(k);
  return out;
}

nlohmann::json ExperienceBatchToJson(const ExperienceBatch& b) {
  nlohmann::json tuples = nlohmann::json::array();
  for (const auto& e : b.tuples) {
    tuples.push_back({{"step", e.step},
                      {"readings", ReadingsToJson(e.readings)},
                      {"setpoints", SetpointsToJson(e.setpoints)},
                      {"reward", e.reward},
                      {"next", ReadingsToJson(e.next_readings)},
                      {"terminal", e.terminal}});
  }
  return {{"worker", b.worker}, {"base_version", b.base_version}, {"tuples", tuples}};
}

ExperienceBatch ExperienceBatchFromJson(const nlohmann::json& j) {
  ExperienceBatch b;
  b.worker = j.at("worker").get<int>();
  b.base_version = j.at("base_version").get<std::int64_t>();
  for (const auto& t : j.at("tuples")) {
    b.tuples.push_back({t.at("step").get<int>(), ReadingsFromJson(t.at("readings")),
                        SetpointsFromJson(t.at("setpoints")), t.at("reward").get<double>(),
                        ReadingsFromJson(t.at("next")), t.at("terminal").get<bool>()});
  }
  return b;
}

nlohmann::json ParameterUpdateToJson(const ParameterUpdate& u) {
  return {{"params", u.blob}, {"version", u.version}, {"mutator", u.mutator_id}, {"identity", u.identity}};
}

ParameterUpdate ParameterUpdateFromJson(const nlohmann::json& j) {
  return {j.at("params"), j.at("version").get<std::int64_t>(), j.at("mutator").get<std::string>(),
          j.at("identity").get<bool>()};
}

}  // namespace arl
