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

#ifndef ARL_CTF_H_
#define ARL_CTF_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "arl/grid.h"
#include "arl/protection.h"

namespace arl {

// Coin amounts in milli-coins.
using MilliCoins = std::int64_t;

inline constexpr MilliCoins kMilliPerCoin = 1000;
inline constexpr MilliCoins kInitialStake = 10'000 * kMilliPerCoin;
inline constexpr MilliCoins kTransformerPayout = 20 * kMilliPerCoin;
inline constexpr MilliCoins kLinePayout = 10 * kMilliPerCoin;

inline double ToCoins(MilliCoins m) { return static_cast<double>(m) / static_cast<double>(kMilliPerCoin); }

// Coin-defense bookkeeping for one episode. An offline load or generator of
// nominal power P_N owes 0.1 * P_N[kW] * t / T coins after t offline steps;
// the ledger pays the increment each step so the running total is
// floor(P_N[W] * t / (10 T)) milli-coins. Transformers and lines pay a fixed
// amount once.
class CoinLedger {
 public:
  CoinLedger() = default;
  explicit CoinLedger(int horizon);

  // Charge one step. `events` are this step's disconnections, `offline` the
  // injection elements (loads and sgens) that are offline at the end of the
  // step, `nominal_kw` their P_N. Transfers are clipped at a zero balance.
  void Accrue(const std::vector<DisconnectionEvent>& events, const std::set<std::string>& offline,
              const std::map<std::string, double>& nominal_kw, int step);

  bool AttackerWon() const { return defender_balance_ == 0; }

  MilliCoins defender_balance() const { return defender_balance_; }
  MilliCoins attacker_total() const { return attacker_total_; }
  int horizon() const { return horizon_; }
  int offline_steps(const std::string& id) const;
  bool paid_once(const std::string& id) const { return one_shot_paid_.count(id) > 0; }

  nlohmann::json Snapshot() const;

 private:
  MilliCoins Transfer(MilliCoins amount);

  int horizon_ = 1;
  MilliCoins defender_balance_ = kInitialStake;
  MilliCoins attacker_total_ = 0;
  std::map<std::string, int> offline_steps_;
  std::set<std::string> one_shot_paid_;
};

}  // namespace arl

#endif  // ARL_CTF_H_
