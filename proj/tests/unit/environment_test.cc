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

#include <gtest/gtest.h>

#include "arl/error.h"
#include "arl/synthetic_grid.h"

namespace arl {
namespace {

GridEnvironmentConfig Config(int horizon = 10) {
  GridEnvironmentConfig c;
  c.grid = GenerateSyntheticCityGrid(1);
  c.horizon = horizon;
  c.agents.push_back({"attacker", Role::kAttacker, {"bus/*"}, {"load/*", "sgen/*"}, ActionView::kDiscrete});
  c.agents.push_back({"defender", Role::kDefender, {"bus/*"}, {"load/*", "sgen/*", "trafo/*"}, ActionView::kDiscrete});
  return c;
}

const AgentInterface& Find(const std::vector<AgentInterface>& ifaces, const std::string& name) {
  for (const auto& i : ifaces) {
    if (i.agent == name) return i;
  }
  throw std::out_of_range(name);
}

// Every actuator at its neutral position.
std::vector<ActuatorSetpoint> Neutral(const GridEnvironment& env, const AgentInterface& iface) {
  std::vector<ActuatorSetpoint> out;
  for (const auto& a : iface.actuators) {
    out.push_back({a.id, static_cast<std::int64_t>(env.DescribeActuator(a.id).neutral)});
  }
  return out;
}

TEST(GridEnvironmentTest, WiringCounts) {
  GridEnvironment env(Config());
  const auto reset = env.Reset();
  const auto& att = Find(reset.interfaces, "attacker");
  const auto& def = Find(reset.interfaces, "defender");
  EXPECT_EQ(att.actuators.size(), 65u);
  EXPECT_EQ(def.actuators.size(), 65u + 22u);
  int taps = 0;
  for (const auto& a : def.actuators) {
    if (env.DescribeActuator(a.id).kind == ActuatorTarget::Kind::kTap) ++taps;
    else EXPECT_EQ(a.space, Space::MakeDiscrete(11));
  }
  EXPECT_EQ(taps, 22);
}

TEST(GridEnvironmentTest, IdsAreOpaque) {
  GridEnvironment env(Config());
  for (const auto& iface : env.Reset().interfaces) {
    for (const auto& s : iface.sensors) EXPECT_EQ(s.id.find("bus"), std::string::npos) << s.id;
    for (const auto& a : iface.actuators) EXPECT_EQ(a.id.find("load"), std::string::npos) << a.id;
  }
}

TEST(GridEnvironmentTest, ResetIsDeterministicAndHealthy) {
  GridEnvironment a(Config());
  GridEnvironment b(Config());
  const auto ra = a.Reset();
  const auto rb = b.Reset();
  EXPECT_EQ(ra.readings, rb.readings);
  for (const auto& r : ra.readings.at("defender")) {
    EXPECT_GE(ScalarOf(r.value), 0.95);
    EXPECT_LE(ScalarOf(r.value), 1.05);
  }
  EXPECT_FALSE(a.terminated());
}

TEST(GridEnvironmentTest, NeutralActionsKeepGridQuiet) {
  GridEnvironment env(Config());
  const auto reset = env.Reset();
  JointActions acts;
  for (const auto& i : reset.interfaces) acts[i.agent] = Neutral(env, i);
  const auto out = env.Step(acts);
  EXPECT_TRUE(out.events.empty());
  EXPECT_FALSE(out.terminated);
  EXPECT_EQ(out.defender_balance, kInitialStake);
}

TEST(GridEnvironmentTest, FullLoadNoGenerationViolates) {
  GridEnvironment env(Config());
  const auto reset = env.Reset();
  std::vector<ActuatorSetpoint> attack;
  for (const auto& a : Find(reset.interfaces, "attacker").actuators) {
    const bool load = env.DescribeActuator(a.id).kind == ActuatorTarget::Kind::kLoadScaling;
    attack.push_back({a.id, std::int64_t{load ? 10 : 0}});
  }
  const auto out = env.Step({{"attacker", attack}});
  EXPECT_FALSE(out.events.empty());
  EXPECT_LT(out.defender_balance, kInitialStake);
  EXPECT_EQ(out.defender_balance + out.attacker_total, kInitialStake);
}

TEST(GridEnvironmentTest, TerminatesAtHorizon) {
  GridEnvironment env(Config(3));
  env.Reset();
  EXPECT_FALSE(env.Step({}).terminated);
  EXPECT_FALSE(env.Step({}).terminated);
  EXPECT_TRUE(env.Step({}).terminated);
  EXPECT_THROW(env.Step({}), ValidationError);
}

TEST(GridEnvironmentTest, OutOfSpaceSetpointNamesActuator) {
  GridEnvironment env(Config());
  env.Reset();
  try {
    env.Step({{"attacker", {{"attacker:a000", std::int64_t{11}}}}});
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.subject(), "attacker:a000");
  }
  EXPECT_EQ(env.step_index(), 0);
}

TEST(GridEnvironmentTest, UnknownActuatorRejected) {
  GridEnvironment env(Config());
  env.Reset();
  try {
    env.Step({{"attacker", {{"attacker:a999", std::int64_t{1}}}}});
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.subject(), "attacker:a999");
  }
  EXPECT_THROW(env.Step({{"ghost", {}}}), ValidationError);
  EXPECT_THROW(env.Step({{"attacker", {{"attacker:a000", std::vector<double>{0.5}}}}}), ValidationError);
}

TEST(GridEnvironmentTest, ContinuousViewUsesUnitBox) {
  auto cfg = Config();
  cfg.agents[0].view = ActionView::kContinuous;
  GridEnvironment env(cfg);
  const auto reset = env.Reset();
  const auto& att = Find(reset.interfaces, "attacker");
  EXPECT_EQ(att.actuators.front().space, Space::MakeBox(0.0, 1.0));
  const auto out = env.Step({{"attacker", {{att.actuators.front().id, std::vector<double>{0.5}}}}});
  EXPECT_EQ(out.defender_balance + out.attacker_total, kInitialStake);
}

TEST(GridEnvironmentTest, ConfigErrors) {
  auto dup = Config();
  dup.agents[1].name = "attacker";
  EXPECT_THROW(GridEnvironment{dup}, ConfigError);
  auto blind = Config();
  blind.agents[0].sensors = {"nothing/*"};
  EXPECT_THROW(GridEnvironment{blind}, ConfigError);
}

TEST(GridEnvironmentTest, InterfaceJsonRoundTrip) {
  GridEnvironment env(Config());
  for (const auto& i : env.Reset().interfaces) EXPECT_EQ(InterfaceFromJson(InterfaceToJson(i)), i);
}

}  // namespace
}  // namespace arl
