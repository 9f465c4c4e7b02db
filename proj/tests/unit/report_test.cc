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

#include <gtest/gtest.h>

#include "arl/error.h"
#include "arl/generator.h"
#include "arl/governor.h"
#include "arl/plan.h"
#include "fixtures.h"

namespace arl {
namespace {

std::vector<Record> Play(const nlohmann::json& doc) {
  const auto d = GenerateRuns(ParsePlan(doc))[0];
  auto t = MakeLoopbackTransport();
  Governor g(*t, {});
  MemorySink sink;
  g.Run(d, sink);
  return sink.records();
}

nlohmann::json QuietPlan() {
  auto doc = testing::MinimalPlan(5, 2);
  doc["agents"][0]["strategy"] = {{"kind", "fixed"}, {"hyper", {{"value", 1.0}}}};
  doc["agents"][0]["actuators"] = {"load/*"};
  doc["agents"][1]["strategy"] = {{"kind", "fixed"}, {"hyper", {{"value", 1.0}}}};
  doc["agents"][1]["actuators"] = {"sgen/*"};
  return doc;
}

TEST(ReportTest, UntouchedDefenderKeepsFullStake) {
  const Report r = BuildReport({Play(QuietPlan())});
  ASSERT_EQ(r.coins.size(), 10u);
  for (const auto& row : r.coins) EXPECT_DOUBLE_EQ(row.defender_balance, 10'000.0);
  for (const auto& row : r.actions) EXPECT_DOUBLE_EQ(row.action_mass, 0.0);
}

TEST(ReportTest, OneActionRowPerActuator) {
  const auto records = Play(testing::MinimalPlan(4, 1));
  std::size_t actuators = 0;
  for (const auto& r : records) {
    if (r.at("type") != "wiring") continue;
    for (const auto& a : r.at("agents")) actuators += a.at("actuators").size();
  }
  const Report report = BuildReport({records});
  EXPECT_EQ(report.actions.size(), actuators);
  EXPECT_EQ(report.coins.size(), 4u);
  EXPECT_EQ(report.rewards.size(), 2u);
}

TEST(ReportTest, AveragingIdenticalRunsIsIdentity) {
  const auto records = Play(testing::MinimalPlan(4, 2));
  const Report one = BuildReport({records});
  const Report two = BuildReport({records, records});
  EXPECT_EQ(one.CoinsCsv(), two.CoinsCsv());
  EXPECT_EQ(one.RewardsCsv(), two.RewardsCsv());
  EXPECT_EQ(one.ActionsCsv(), two.ActionsCsv());
  EXPECT_EQ(two.runs, 2);
}

TEST(ReportTest, CsvShapes) {
  const Report r = BuildReport({Play(QuietPlan())});
  EXPECT_EQ(r.CoinsCsv().rfind("round,step,defender_balance\n", 0), 0u);
  EXPECT_NE(r.CoinsCsv().find("\n0,0,10000.000\n"), std::string::npos);
  EXPECT_EQ(r.RewardsCsv().rfind("round,agent,mean_reward\n", 0), 0u);
  EXPECT_EQ(r.ActionsCsv().rfind("agent,actuator,element,kind,action_mass\n", 0), 0u);
}

TEST(ReportTest, EmptyInputRejected) { EXPECT_THROW(BuildReport({}), ValidationError); }

TEST(ReportTest, WritesThreeFiles) {
  testing::TempDir dir;
  WriteReport(BuildReport({Play(QuietPlan())}), dir.path() / "out");
  for (const char* f : {"coins.csv", "rewards.csv", "actions.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir.path() / "out" / f)) << f;
  }
}

}  // namespace
}  // namespace arl
