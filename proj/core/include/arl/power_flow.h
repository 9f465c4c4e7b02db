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

#ifndef ARL_POWER_FLOW_H_
#define ARL_POWER_FLOW_H_

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "arl/grid.h"

namespace arl {

using Complex = std::complex<double>;

struct PowerFlowOptions {
  double tol = 1e-8;
  int max_iter = 20;
};

struct PowerFlowSolution {
  std::vector<double> vm;      // pu; 0 on de-energized buses
  std::vector<double> va;      // rad
  std::vector<bool> energized;
  std::vector<double> line_loading;         // |S| / s_max, worst end
  std::vector<double> transformer_loading;  // |S| / s_max, worst end
  Complex slack_injection{0.0, 0.0};        // pu, into the network
  bool converged = false;
  int iterations = 0;
  double max_mismatch = 0.0;
};

// Dense complex bus admittance matrix. Out-of-service branches, and branches
// touching an out-of-service bus, contribute nothing.
Eigen::MatrixXcd BuildAdmittance(const GridModel& model);

// Buses connected to the slack through in-service branches.
std::vector<bool> EnergizedBuses(const GridModel& model);

// Specified complex injection per bus in pu (generation positive).
Eigen::VectorXcd BusInjections(const GridModel& model);

// Polar Newton-Raphson from flat start. Never throws on numerical trouble:
// non-convergence and singular Jacobians yield converged == false.
PowerFlowSolution SolvePowerFlow(const GridModel& model, const PowerFlowOptions& options = {});

}  // namespace arl

#endif  // ARL_POWER_FLOW_H_
