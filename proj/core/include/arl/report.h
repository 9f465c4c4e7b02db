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

#ifndef ARL_REPORT_H_
#define ARL_REPORT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "arl/run_store.h"

namespace arl {

struct CoinRow {
  int round = 0;
  int step = 0;
  double defender_balance = 0.0;  // coins, mean over runs
};

struct RewardRow {
  int round = 0;
  std::string agent;
  double mean_reward = 0.0;  // mean over steps, then over runs
};

struct ActionRow {
  std::string agent;
  std::string actuator;
  std::string element;
  std::string kind;
  // Sum over a tournament of |setpoint - neutral| in units of the actuator's
  // range, mean over runs.
  double action_mass = 0.0;
};

struct Report {
  int runs = 0;
  std::vector<CoinRow> coins;
  std::vector<RewardRow> rewards;
  std::vector<ActionRow> actions;

  std::string CoinsCsv() const;
  std::string RewardsCsv() const;
  std::string ActionsCsv() const;
};

// Aggregates completed run records. Throws ValidationError when there are
// none.
Report BuildReport(const std::vector<std::vector<Record>>& runs);
// Writes coins.csv, rewards.csv and actions.csv. Throws IoError.
void WriteReport(const Report& report, const std::filesystem::path& dir);

}  // namespace arl

#endif  // ARL_REPORT_H_
