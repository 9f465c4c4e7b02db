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

#include "arl/ctf.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "arl/error.h"

namespace arl {
namespace {

// Cumulative milli-coins owed after `t` offline steps: 0.1 coin per kW,
// i.e. P_N[W] / 10 milli-coins over the full horizon.
MilliCoins Owed(std::int64_t p_watts, int t, int horizon) {
  return (p_watts * t) / (10 * static_cast<std::int64_t>(horizon));
}

}  // namespace

CoinLedger::CoinLedger(int horizon) : horizon_(horizon) {
  if (horizon < 1) throw ConfigError("episode horizon must be >= 1");
}

MilliCoins CoinLedger::Transfer(MilliCoins amount) {
  const MilliCoins paid = std::min(amount, defender_balance_);
  defender_balance_ -= paid;
  attacker_total_ += paid;
  return paid;
}

void CoinLedger::Accrue(const std::vector<DisconnectionEvent>& events, const std::set<std::string>& offline,
                        const std::map<std::string, double>& nominal_kw, int step) {
  if (step < 0 || step >= horizon_) {
    throw BoundsError(fmt::format("accrual step {} outside horizon {}", step, horizon_));
  }
  for (const auto& e : events) {
    if (e.kind != ElementKind::kTransformer && e.kind != ElementKind::kLine) continue;
    if (!one_shot_paid_.insert(e.element_id).second) continue;
    Transfer(e.kind == ElementKind::kTransformer ? kTransformerPayout : kLinePayout);
  }
  for (const auto& id : offline) {
    const auto it = nominal_kw.find(id);
    if (it == nominal_kw.end()) throw ConfigError("offline element '" + id + "' has no nominal power");
    const auto watts = static_cast<std::int64_t>(std::llround(it->second * 1000.0));
    int& t = offline_steps_[id];
    if (t >= horizon_) continue;
    const MilliCoins increment = Owed(watts, t + 1, horizon_) - Owed(watts, t, horizon_);
    ++t;
    Transfer(increment);
  }
}

int CoinLedger::offline_steps(const std::string& id) const {
  const auto it = offline_steps_.find(id);
  return it == offline_steps_.end() ? 0 : it->second;
}

nlohmann::json CoinLedger::Snapshot() const {
  return {{"defender", defender_balance_}, {"attacker", attacker_total_}};
}

}  // namespace arl
