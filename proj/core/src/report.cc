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

#include "arl/report.h"

#include <cmath>
#include <fstream>
#include <map>
#include <tuple>

#include <fmt/format.h>

#include "arl/ctf.h"
#include "arl/error.h"
#include "arl/spaces.h"

namespace arl {

namespace {

struct Mean {
  double sum = 0.0;
  int n = 0;
  void Add(double v) {
    sum += v;
    ++n;
  }
  double value() const { return n ? sum / n : 0.0; }
};

struct ActuatorMeta {
  std::string agent;
  std::string element;
  std::string kind;
  Space space = Space::MakeDiscrete(1);
  double neutral = 0.0;
};

double Deviation(const ActuatorMeta& m, const nlohmann::json& value) {
  if (m.space.is_discrete()) {
    const double width = static_cast<double>(m.space.discrete().n - 1);
    return width > 0 ? std::abs(value.get<double>() - m.neutral) / width : 0.0;
  }
  const auto& box = m.space.box();
  const double width = box.high.at(0) - box.low.at(0);
  return width > 0 ? std::abs(value.at(0).get<double>() - m.neutral) / width : 0.0;
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

}  // namespace

Report BuildReport(const std::vector<std::vector<Record>>& runs) {
  if (runs.empty()) throw ValidationError("report", "no completed runs to report on");
  std::map<std::pair<int, int>, Mean> coins;
  std::map<std::pair<int, std::string>, Mean> rewards;
  std::map<std::pair<std::string, std::string>, Mean> mass;
  std::map<std::pair<std::string, std::string>, ActuatorMeta> meta;

  for (const auto& records : runs) {
    std::map<std::string, ActuatorMeta> actuators;
    std::map<std::string, double> run_mass;
    int horizon = 0;
    for (const auto& r : records) {
      const std::string type = r.value("type", "");
      if (type == "header") {
        horizon = r.at("descriptor").at("resolved").at("environment").at("horizon").get<int>();
      } else if (type == "wiring") {
        for (const auto& agent : r.at("agents")) {
          for (const auto& a : agent.at("actuators")) {
            ActuatorMeta m{agent.at("name").get<std::string>(), a.at("element").get<std::string>(),
                           a.at("kind").get<std::string>(), SpaceFromJson(a.at("space")), a.at("neutral").get<double>()};
            run_mass[a.at("id").get<std::string>()] = 0.0;
            actuators[a.at("id").get<std::string>()] = m;
          }
        }
      } else if (type == "step") {
        const int round = r.at("round").get<int>();
        const int step = r.at("step").get<int>();
        const MilliCoins balance = r.at("ledger").at("defender_balance").get<MilliCoins>();
        coins[{round, step}].Add(ToCoins(balance));
        // An episode the attacker ended early keeps its final balance.
        if (r.at("terminated").get<bool>()) {
          for (int t = step + 1; t < horizon; ++t) coins[{round, t}].Add(ToCoins(balance));
        }
        for (const auto& [agent, setpoints] : r.at("setpoints").items()) {
          for (const auto& sp : setpoints) {
            const std::string id = sp.at(0).get<std::string>();
            run_mass[id] += Deviation(actuators.at(id), sp.at(1));
          }
        }
      } else if (type == "round") {
        const int round = r.at("round").get<int>();
        for (const auto& [agent, v] : r.at("mean_rewards").items()) rewards[{round, agent}].Add(v.get<double>());
      }
    }
    for (const auto& [id, total] : run_mass) {
      const auto& m = actuators.at(id);
      mass[{m.agent, id}].Add(total);
      meta[{m.agent, id}] = m;
    }
  }

  Report report;
  report.runs = static_cast<int>(runs.size());
  for (const auto& [key, m] : coins) report.coins.push_back({key.first, key.second, m.value()});
  for (const auto& [key, m] : rewards) report.rewards.push_back({key.first, key.second, m.value()});
  for (const auto& [key, m] : mass) {
    const auto& info = meta.at(key);
    report.actions.push_back({key.first, key.second, info.element, info.kind, m.value()});
  }
  return report;
}

std::string Report::CoinsCsv() const {
  std::string out = "round,step,defender_balance\n";
  for (const auto& r : coins) out += fmt::format("{},{},{:.3f}\n", r.round, r.step, r.defender_balance);
  return out;
}

std::string Report::RewardsCsv() const {
  std::string out = "round,agent,mean_reward\n";
  for (const auto& r : rewards) out += fmt::format("{},{},{:.9f}\n", r.round, r.agent, r.mean_reward);
  return out;
}

std::string Report::ActionsCsv() const {
  std::string out = "agent,actuator,element,kind,action_mass\n";
  for (const auto& r : actions) {
    out += fmt::format("{},{},{},{},{:.6f}\n", r.agent, r.actuator, r.element, r.kind, r.action_mass);
  }
  return out;
}

void WriteReport(const Report& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  WriteFile(dir / "coins.csv", report.CoinsCsv());
  WriteFile(dir / "rewards.csv", report.RewardsCsv());
  WriteFile(dir / "actions.csv", report.ActionsCsv());
}

}  // namespace arl
