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

#include "arl/tabular_q.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "arl/error.h"

namespace arl {

TabularQConfig TabularQConfig::FromJson(const nlohmann::json& j) {
  const auto problems = Check(j);
  if (!problems.empty()) throw ConfigError(problems.front());
  TabularQConfig c;
  c.alpha = j.value("alpha", c.alpha);
  c.gamma = j.value("gamma", c.gamma);
  c.epsilon_start = j.value("epsilon_start", c.epsilon_start);
  c.epsilon_end = j.value("epsilon_end", c.epsilon_end);
  c.bins = j.value("bins", c.bins);
  if (j.contains("observation_space")) c.observation_space = SpaceFromJson(j.at("observation_space"));
  return c;
}

std::vector<std::string> TabularQConfig::Check(const nlohmann::json& j) {
  std::vector<std::string> p;
  const TabularQConfig d;
  auto prob = [&j](const char* key, double def) { return j.contains(key) && j.at(key).is_number() ? j.at(key).get<double>() : def; };
  const double alpha = prob("alpha", d.alpha);
  const double gamma = prob("gamma", d.gamma);
  const double e0 = prob("epsilon_start", d.epsilon_start);
  const double e1 = prob("epsilon_end", d.epsilon_end);
  if (!(alpha > 0.0 && alpha <= 1.0)) p.push_back("tabular_q.alpha must lie in (0, 1]");
  if (!(gamma >= 0.0 && gamma <= 1.0)) p.push_back("tabular_q.gamma must lie in [0, 1]");
  if (!(e0 >= 0.0 && e0 <= 1.0) || !(e1 >= 0.0 && e1 <= 1.0)) p.push_back("tabular_q.epsilon must lie in [0, 1]");
  if (j.contains("bins") && (!j.at("bins").is_number_integer() || j.at("bins").get<int>() < 1)) {
    p.push_back("tabular_q.bins must be a positive integer");
  }
  return p;
}

double TabularQConfig::Epsilon(const ActContext& ctx) const {
  if (ctx.episodes <= 1) return epsilon_start;
  const double frac = static_cast<double>(std::clamp(ctx.episode, 0, ctx.episodes - 1)) /
                      static_cast<double>(ctx.episodes - 1);
  return epsilon_start + (epsilon_end - epsilon_start) * frac;
}

QTables QTables::Zero(const AgentInterface& iface, int bins) {
  QTables t;
  t.bins = bins;
  for (const auto& a : iface.actuators) {
    if (!a.space.is_discrete()) {
      throw ConfigError("tabular_q needs discrete actuators; '" + a.id + "' is " + a.space.ToString());
    }
    t.q.emplace_back(bins, std::vector<double>(static_cast<std::size_t>(a.space.discrete().n), 0.0));
  }
  return t;
}

QTables QTables::FromJson(const nlohmann::json& j) {
  QTables t;
  t.bins = j.at("bins").get<int>();
  t.q = j.at("q").get<std::vector<std::vector<std::vector<double>>>>();
  return t;
}

nlohmann::json QTables::ToJson() const { return {{"bins", bins}, {"q", q}}; }

int ObservationBin(const TabularQConfig& config, const AgentInterface& iface, const Readings& readings) {
  const auto spaces = iface.SensorSpaces();
  const double mean = MeanVoltage(spaces, readings, config.observation_space);
  const Box& b = config.observation_space.box();
  const double frac = (mean - b.low[0]) / (b.high[0] - b.low[0]);
  const int bin = static_cast<int>(std::floor(frac * config.bins));
  return std::clamp(bin, 0, config.bins - 1);
}

std::int64_t ArgmaxLowest(const std::vector<double>& row) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < row.size(); ++i) {
    if (row[i] > row[best]) best = i;
  }
  return static_cast<std::int64_t>(best);
}

TabularQStrategy::TabularQStrategy(TabularQConfig config, AgentInterface iface)
    : config_(std::move(config)), iface_(std::move(iface)), tables_(QTables::Zero(iface_, config_.bins)) {}

std::vector<ActuatorSetpoint> TabularQStrategy::ProposeActions(const Readings& readings, const ActContext& ctx,
                                                               Rng& rng) const {
  if (readings.size() != iface_.sensors.size()) throw ConfigError("readings do not match the sensor interface");
  const int s = ObservationBin(config_, iface_, readings);
  const double eps = config_.Epsilon(ctx);
  std::vector<ActuatorSetpoint> out;
  out.reserve(iface_.actuators.size());
  for (std::size_t k = 0; k < iface_.actuators.size(); ++k) {
    const auto& row = tables_.q[k][static_cast<std::size_t>(s)];
    // Both draws happen for every actuator whatever eps is.
    const bool explore = rng.Bernoulli(eps);
    const auto random_action = static_cast<std::int64_t>(rng.UniformIndex(row.size()));
    out.push_back({iface_.actuators[k].id, explore ? random_action : ArgmaxLowest(row)});
  }
  return out;
}

void TabularQStrategy::SetParameters(const ParameterSet& params) {
  QTables t = QTables::FromJson(params.blob);
  if (t.q.size() != iface_.actuators.size()) throw ConfigError("Q tables do not match the actuator interface");
  tables_ = std::move(t);
}

TabularQMutator::TabularQMutator(TabularQConfig config, AgentInterface iface, std::string id)
    : config_(std::move(config)), iface_(std::move(iface)), id_(std::move(id)) {}

ParameterUpdate TabularQMutator::Mutate(const ExperienceBatch& batch, const ParameterSet& current) {
  if (batch.tuples.empty()) throw ConfigError("experience batch is empty");
  if (batch.base_version != current.version) {
    throw StaleParametersError(
        fmt::format("batch built on version {}, current is {}", batch.base_version, current.version));
  }
  QTables t = QTables::FromJson(current.blob);
  for (const auto& e : batch.tuples) {
    const auto s = static_cast<std::size_t>(ObservationBin(config_, iface_, e.readings));
    const auto s_next = static_cast<std::size_t>(ObservationBin(config_, iface_, e.next_readings));
    if (e.setpoints.size() != t.q.size()) throw ConfigError("experience setpoints do not match actuators");
    for (std::size_t k = 0; k < t.q.size(); ++k) {
      const auto* a = std::get_if<std::int64_t>(&e.setpoints[k].value);
      if (a == nullptr) throw DomainTypeError("tabular_q cannot learn from continuous setpoints");
      const auto& next_row = t.q[k][s_next];
      const double bootstrap = e.terminal ? 0.0 : config_.gamma * *std::max_element(next_row.begin(), next_row.end());
      double& q = t.q[k][s].at(static_cast<std::size_t>(*a));
      q += config_.alpha * (e.reward + bootstrap - q);
    }
  }
  return {t.ToJson(), current.version + 1, id_, false};
}

}  // namespace arl
