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

#include "arl/agent_host.h"
#include "arl/tabular_q.h"

#include <gtest/gtest.h>

#include "arl/error.h"
#include "oracles.h"

namespace arl {
namespace {

AgentInterface OneByOne(std::int64_t actions = 11) {
  AgentInterface iface;
  iface.agent = "a";
  iface.role = Role::kAttacker;
  iface.sensors.push_back({"a:s000", Space::MakeBox(0.85, 1.15)});
  iface.actuators.push_back({"a:a000", Space::MakeDiscrete(actions)});
  return iface;
}

StrategySpec Spec(const std::string& kind, nlohmann::json hyper, AgentInterface iface = OneByOne()) {
  StrategySpec s;
  s.kind = kind;
  s.hyper = std::move(hyper);
  s.iface = std::move(iface);
  s.reward.role = s.iface.role;
  return s;
}

Readings At(double v) { return {{"a:s000", std::vector<double>{v}}}; }

Experience Tuple(double obs, std::int64_t action, double reward, double next, bool terminal) {
  return {0, At(obs), {{"a:a000", action}}, reward, At(next), terminal};
}

TEST(RandomStrategyTest, SeededSequenceRepeats) {
  const auto& kind = StrategyRegistry::Default().Get("random");
  const auto s = kind.make_strategy(Spec("random", nlohmann::json::object()));
  Rng r1(5), r2(5);
  std::vector<std::int64_t> seq;
  for (int i = 0; i < 50; ++i) {
    const auto a = s->ProposeActions(At(1.0), {}, r1);
    const auto b = s->ProposeActions(At(1.0), {}, r2);
    ASSERT_EQ(a, b);
    seq.push_back(std::get<std::int64_t>(a[0].value));
  }
  EXPECT_GT(std::set<std::int64_t>(seq.begin(), seq.end()).size(), 5u);
}

TEST(RandomStrategyTest, MutatorIsIdentity) {
  const auto& kind = StrategyRegistry::Default().Get("random");
  const auto spec = Spec("random", nlohmann::json::object());
  const auto m = kind.make_mutator(spec);
  const ParameterSet p = kind.initial_parameters(spec);
  const auto u = m->Mutate({0, p.version, {Tuple(1.0, 3, 1.0, 1.0, true)}}, p);
  EXPECT_TRUE(u.identity);
  EXPECT_EQ(u.version, p.version);
}

TEST(FixedStrategyTest, HoldsRelativePosition) {
  const auto& kind = StrategyRegistry::Default().Get("fixed");
  Rng rng(1);
  EXPECT_EQ(std::get<std::int64_t>(kind.make_strategy(Spec("fixed", {{"value", 1.0}}))->ProposeActions(At(1.0), {}, rng)[0].value), 10);
  EXPECT_EQ(std::get<std::int64_t>(kind.make_strategy(Spec("fixed", {{"value", 0.5}}))->ProposeActions(At(1.0), {}, rng)[0].value), 5);
  EXPECT_FALSE(kind.check_hyper({{"value", 1.5}}).empty());
}

TEST(TabularQTest, ZeroTableBreaksTiesLow) {
  TabularQStrategy s(TabularQConfig::FromJson({{"epsilon_start", 0.0}, {"epsilon_end", 0.0}}), OneByOne());
  Rng rng(3);
  for (double v : {0.86, 1.0, 1.14}) EXPECT_EQ(std::get<std::int64_t>(s.ProposeActions(At(v), {}, rng)[0].value), 0);
  EXPECT_EQ(ArgmaxLowest({0.0, 2.0, 2.0, 1.0}), 1);
}

TEST(TabularQTest, SingleUpdateValue) {
  const auto cfg = TabularQConfig::FromJson({{"alpha", 0.1}, {"gamma", 0.9}});
  TabularQMutator m(cfg, OneByOne());
  const ParameterSet p{QTables::Zero(OneByOne(), cfg.bins).ToJson(), 0};
  const auto u = m.Mutate({0, 0, {Tuple(1.0, 4, 1.0, 1.0, true)}}, p);
  const auto t = QTables::FromJson(u.blob);
  const int s = ObservationBin(cfg, OneByOne(), At(1.0));
  EXPECT_DOUBLE_EQ(t.q[0][s][4], 0.1);
  EXPECT_EQ(u.version, 1);
  EXPECT_FALSE(u.identity);
}

TEST(TabularQTest, RewardedActionBecomesGreedy) {
  const auto cfg = TabularQConfig::FromJson({{"epsilon_start", 0.0}, {"epsilon_end", 0.0}});
  TabularQMutator m(cfg, OneByOne());
  TabularQStrategy s(cfg, OneByOne());
  const ParameterSet p{QTables::Zero(OneByOne(), cfg.bins).ToJson(), 0};
  const auto u = m.Mutate({0, 0, {Tuple(1.0, 7, 1.0, 1.0, true)}}, p);
  s.SetParameters({u.blob, u.version});
  Rng rng(0);
  EXPECT_EQ(std::get<std::int64_t>(s.ProposeActions(At(1.0), {}, rng)[0].value), 7);
}

TEST(TabularQTest, StaleBatchRejected) {
  const auto cfg = TabularQConfig{};
  TabularQMutator m(cfg, OneByOne());
  const ParameterSet p{QTables::Zero(OneByOne(), cfg.bins).ToJson(), 0};
  const ExperienceBatch batch{0, 0, {Tuple(1.0, 2, 1.0, 1.0, true)}};
  const auto u = m.Mutate(batch, p);
  EXPECT_THROW(m.Mutate(batch, {u.blob, u.version}), StaleParametersError);
}

TEST(TabularQTest, EpsilonAnneals) {
  const TabularQConfig c;
  EXPECT_DOUBLE_EQ(c.Epsilon({0, 10}), 0.3);
  EXPECT_NEAR(c.Epsilon({9, 10}), 0.01, 1e-15);
  EXPECT_NEAR(c.Epsilon({3, 7}), 0.3 + (0.01 - 0.3) * 0.5, 1e-15);
}

TEST(TabularQTest, HyperChecks) {
  EXPECT_FALSE(TabularQConfig::Check({{"alpha", 0.0}}).empty());
  EXPECT_FALSE(TabularQConfig::Check({{"gamma", 1.5}}).empty());
  EXPECT_FALSE(TabularQConfig::Check({{"bins", 0}}).empty());
  EXPECT_TRUE(TabularQConfig::Check({{"alpha", 0.5}, {"gamma", 0.0}}).empty());
  AgentInterface cont = OneByOne();
  cont.actuators[0].space = Space::MakeBox(0.0, 1.0);
  EXPECT_THROW(QTables::Zero(cont, 4), ConfigError);
}

// Two-state, two-action MDP: learned Q against value iteration.
TEST(TabularQTest, MatchesValueIterationOnTwoStateMdp) {
  testing::Mdp mdp;
  mdp.states = 2;
  mdp.actions = 2;
  mdp.next = {{0, 1}, {0, 1}};
  mdp.reward = {{0.0, 1.0}, {2.0, -1.0}};
  mdp.gamma = 0.9;
  const auto q_star = testing::ValueIteration(mdp);

  const auto iface = OneByOne(2);
  const auto cfg = TabularQConfig::FromJson({{"alpha", 0.5}, {"gamma", mdp.gamma}, {"bins", 2},
                                             {"epsilon_start", 1.0}, {"epsilon_end", 1.0}});
  const std::array<double, 2> obs{0.9, 1.1};
  ASSERT_EQ(ObservationBin(cfg, iface, At(obs[0])), 0);
  ASSERT_EQ(ObservationBin(cfg, iface, At(obs[1])), 1);

  TabularQStrategy strategy(cfg, iface);
  TabularQMutator mutator(cfg, iface);
  ParameterSet params{QTables::Zero(iface, cfg.bins).ToJson(), 0};
  Rng rng(11);
  int s = 0;
  for (int episode = 0; episode < 400; ++episode) {
    ExperienceBatch batch{0, params.version, {}};
    for (int t = 0; t < 25; ++t) {
      const auto a = std::get<std::int64_t>(strategy.ProposeActions(At(obs[s]), {}, rng)[0].value);
      const int s_next = mdp.next[s][a];
      batch.tuples.push_back(Tuple(obs[s], a, mdp.reward[s][a], obs[s_next], false));
      s = s_next;
    }
    const auto u = mutator.Mutate(batch, params);
    params = {u.blob, u.version};
    strategy.SetParameters(params);
  }
  const auto q = QTables::FromJson(params.blob);
  for (int st = 0; st < 2; ++st) {
    for (int a = 0; a < 2; ++a) EXPECT_NEAR(q.q[0][st][a], q_star[st][a], 1e-6) << st << "," << a;
  }
}

TEST(WorkerTest, BatchOnTerminalAndIdempotentApply) {
  AgentSpec spec{Spec("tabular_q", nlohmann::json::object()), 77};
  const auto& kind = StrategyRegistry::Default().Get("tabular_q");
  Worker w(spec, 0, kind.initial_parameters(spec.strategy), StrategyRegistry::Default());
  w.Act(At(1.0), 0, {});
  EXPECT_FALSE(w.Observe(At(1.0), 0.5, false).has_value());
  w.Act(At(1.0), 1, {});
  const auto batch = w.Observe(At(1.0), 0.5, true);
  ASSERT_TRUE(batch.has_value());
  EXPECT_EQ(batch->tuples.size(), 2u);
  EXPECT_TRUE(batch->tuples.back().terminal);

  Conductor c(spec, StrategyRegistry::Default());
  const auto first = c.HandleBatch(*batch);
  EXPECT_FALSE(first.rejected);
  EXPECT_TRUE(w.Apply(first.update));
  // Delivered a second time, e.g. after a resubscribe.
  EXPECT_FALSE(w.Apply(first.update));
  EXPECT_EQ(w.version(), 1);

  const auto again = c.HandleBatch(*batch);
  EXPECT_TRUE(again.rejected);
  EXPECT_EQ(again.update.version, 1);
  EXPECT_EQ(c.current().version, 1);
}

TEST(WorkerTest, ObserveWithoutActIsError) {
  AgentSpec spec{Spec("random", nlohmann::json::object()), 1};
  Worker w(spec, 0, {}, StrategyRegistry::Default());
  EXPECT_THROW(w.Observe(At(1.0), 0.0, true), ValidationError);
}

TEST(AgentSpecTest, JsonRoundTrip) {
  AgentSpec spec{Spec("tabular_q", {{"alpha", 0.3}}), 123};
  const auto back = AgentSpec::FromJson(spec.ToJson());
  EXPECT_EQ(back.seed, 123u);
  EXPECT_EQ(back.strategy.kind, "tabular_q");
  EXPECT_EQ(back.strategy.hyper, spec.strategy.hyper);
  EXPECT_EQ(back.strategy.iface, spec.strategy.iface);
}

TEST(StrategyRegistryTest, KnownKinds) {
  const auto kinds = StrategyRegistry::Default().Kinds();
  EXPECT_EQ(kinds, (std::vector<std::string>{"fixed", "random", "tabular_q"}));
  EXPECT_THROW(StrategyRegistry::Default().Get("a3c"), ConfigError);
}

}  // namespace
}  // namespace arl
