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

#ifndef ARL_TABULAR_Q_H_
#define ARL_TABULAR_Q_H_

#include <vector>

#include "arl/strategy.h"

namespace arl {

struct TabularQConfig {
  double alpha = 0.1;
  double gamma = 0.95;
  double epsilon_start = 0.3;
  double epsilon_end = 0.01;
  int bins = 16;
  Space observation_space = Space::MakeBox(0.85, 1.15);

  static TabularQConfig FromJson(const nlohmann::json& j);
  static std::vector<std::string> Check(const nlohmann::json& j);
  // Linear anneal from epsilon_start (first episode) to epsilon_end (last).
  double Epsilon(const ActContext& ctx) const;
};

// Independent learners: one Q table (bins x actions) per discrete actuator,
// all indexed by the binned mean of the voltage-space readings.
struct QTables {
  int bins = 0;
  std::vector<std::vector<std::vector<double>>> q;  // [actuator][bin][action]

  static QTables Zero(const AgentInterface& iface, int bins);
  static QTables FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

int ObservationBin(const TabularQConfig& config, const AgentInterface& iface, const Readings& readings);

// Greedy action; ties go to the lowest index.
std::int64_t ArgmaxLowest(const std::vector<double>& row);

class TabularQStrategy final : public Strategy {
 public:
  TabularQStrategy(TabularQConfig config, AgentInterface iface);
  std::vector<ActuatorSetpoint> ProposeActions(const Readings& readings, const ActContext& ctx,
                                               Rng& rng) const override;
  void SetParameters(const ParameterSet& params) override;
  const QTables& tables() const { return tables_; }

 private:
  TabularQConfig config_;
  AgentInterface iface_;
  QTables tables_;
};

// Q(s,a) <- Q(s,a) + alpha (r + gamma max_a' Q(s',a') - Q(s,a)), per actuator,
// tuples applied in order; terminal tuples drop the bootstrap term.
class TabularQMutator final : public StrategyMutator {
 public:
  TabularQMutator(TabularQConfig config, AgentInterface iface, std::string id = "tabular_q");
  ParameterUpdate Mutate(const ExperienceBatch& batch, const ParameterSet& current) override;

 private:
  TabularQConfig config_;
  AgentInterface iface_;
  std::string id_;
};

}  // namespace arl

#endif  // ARL_TABULAR_Q_H_
