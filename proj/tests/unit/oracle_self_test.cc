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

#include <cmath>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "oracles.h"

namespace arl::testing {
namespace {

TEST(WilcoxonOracleTest, AllPositiveSmallSample) {
  const auto r = WilcoxonGreater({2, 3, 4, 5, 6}, {1, 1, 1, 1, 1});
  EXPECT_TRUE(r.exact);
  EXPECT_DOUBLE_EQ(r.w_plus, 15.0);
  EXPECT_DOUBLE_EQ(r.p_value, 1.0 / 32.0);
}

TEST(WilcoxonOracleTest, KnownExactTail) {
  // Rank 1 negative: W+ = 20. W+ >= 20 iff W- <= 1, two of 64 sign patterns.
  const auto r = WilcoxonGreater({-1, 2, 3, 4, 5, 6}, {0, 0, 0, 0, 0, 0});
  EXPECT_DOUBLE_EQ(r.w_plus, 20.0);
  EXPECT_NEAR(r.p_value, 2.0 / 64.0, 1e-15);
}

TEST(WilcoxonOracleTest, ZerosDroppedAndTiesApproximate) {
  const auto r = WilcoxonGreater({1, 1, 2, 2, 3, 0}, {0, 0, 0, 0, 0, 0});
  EXPECT_EQ(r.n, 5);
  EXPECT_FALSE(r.exact);
  EXPECT_LT(r.p_value, 0.05);
}

TEST(ValueIterationOracleTest, SingleStateGeometricSeries) {
  Mdp m;
  m.states = 1;
  m.actions = 2;
  m.next = {{0, 0}};
  m.reward = {{1.0, 0.5}};
  m.gamma = 0.5;
  const auto q = ValueIteration(m);
  EXPECT_NEAR(q[0][0], 2.0, 1e-12);
  EXPECT_NEAR(q[0][1], 1.5, 1e-12);
}

TEST(GaussSeidelOracleTest, LosslessTwoBusClosedForm) {
  // Purely reactive line, unity power factor load: |V2| from the quadratic
  // V^4 + (2QX - 1) V^2 + X^2 (P^2 + Q^2) = 0 with Q = 0.
  const double x = 0.1, p = 0.5;
  const double v2 = std::sqrt((1.0 + std::sqrt(1.0 - 4.0 * x * x * p * p)) / 2.0);
  const auto gs = SolveGaussSeidel(TwoBusGrid(0.0, x, 500.0, 1.0));
  ASSERT_TRUE(gs.converged);
  EXPECT_NEAR(std::abs(gs.v[1]), v2, 1e-10);
}

}  // namespace
}  // namespace arl::testing
