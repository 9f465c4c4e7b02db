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

#include <benchmark/benchmark.h>

#include "arl/environment.h"
#include "arl/power_flow.h"
#include "arl/protection.h"
#include "arl/synthetic_grid.h"
#include "arl/transport.h"

namespace arl {
namespace {

void BM_PowerFlow(benchmark::State& state) {
  const GridModel m = GenerateSyntheticCityGrid(1);
  for (auto _ : state) benchmark::DoNotOptimize(SolvePowerFlow(m));
}
BENCHMARK(BM_PowerFlow);

void BM_CheckAndCascade(benchmark::State& state) {
  GridModel m = GenerateSyntheticCityGrid(1);
  // Halve every LV rating so each call has trips to chase.
  if (state.range(0) != 0) {
    for (auto& t : m.transformers) t.s_max *= 0.5;
  }
  const ConstraintConfig cc;
  for (auto _ : state) benchmark::DoNotOptimize(CheckAndCascade(m, cc, 0));
}
BENCHMARK(BM_CheckAndCascade)->Arg(0)->Arg(1);

void BM_EnvironmentStep(benchmark::State& state) {
  GridEnvironmentConfig c;
  c.grid = GenerateSyntheticCityGrid(1);
  c.horizon = 1 << 30;
  c.agents.push_back({"attacker", Role::kAttacker, {"bus/*"}, {"load/*", "sgen/*"}, ActionView::kDiscrete});
  c.agents.push_back({"defender", Role::kDefender, {"bus/*"}, {"load/*", "sgen/*", "trafo/*"}, ActionView::kDiscrete});
  GridEnvironment env(c);
  const auto reset = env.Reset();
  JointActions neutral;
  for (const auto& iface : reset.interfaces) {
    for (const auto& a : iface.actuators) {
      neutral[iface.agent].push_back({a.id, static_cast<std::int64_t>(env.DescribeActuator(a.id).neutral)});
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(env.Step(neutral));
}
BENCHMARK(BM_EnvironmentStep);

Envelope ActRequest(int sensors) {
  Readings readings;
  for (int i = 0; i < sensors; ++i) readings.push_back({"a:s" + std::to_string(i), std::vector<double>{0.97 + 1e-4 * i}});
  return {kProtocolVersion,
          MessageKind::kActRequest,
          "governor-1",
          "governor",
          "governor",
          {{"agent", "a"}, {"worker", 0}, {"step", 3}, {"episode", 0}, {"episodes", 10}, {"readings", ReadingsToJson(readings)}}};
}

void BM_Encode(benchmark::State& state) {
  const Envelope e = ActRequest(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Encode(e));
}
BENCHMARK(BM_Encode)->Arg(8)->Arg(64);

void BM_Decode(benchmark::State& state) {
  const std::string frame = Encode(ActRequest(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(Decode(frame));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(frame.size()));
}
BENCHMARK(BM_Decode)->Arg(8)->Arg(64);

}  // namespace
}  // namespace arl

BENCHMARK_MAIN();
