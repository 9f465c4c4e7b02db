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

#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "arl/environment.h"
#include "arl/grid.h"

namespace arl::testing {

// Fresh directory under the system temp path, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::filesystem::path PlansDir();
std::string ReadFile(const std::filesystem::path& path);

// Random vs random on the synthetic grid, defaults everywhere else.
nlohmann::json MinimalPlan(int horizon = 5, int rounds = 1);

// Slack plus one PQ bus behind a single line.
GridModel TwoBusGrid(double r, double x, double p_load_kw, double cos_phi);

// Environment that echoes a counter; used to exercise remote plumbing.
class CountingEnvironment final : public Environment {
 public:
  explicit CountingEnvironment(int horizon);
  ResetOutcome Reset() override;
  StepOutcome Step(const JointActions& actions) override;
  std::vector<AgentInterface> Interfaces() const override;
  bool terminated() const override { return step_ >= horizon_; }
  int step_index() const override { return step_; }
  int horizon() const override { return horizon_; }

 private:
  int horizon_;
  int step_ = 0;
};

}  // namespace arl::testing
