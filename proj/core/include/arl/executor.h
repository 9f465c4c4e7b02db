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

#ifndef ARL_EXECUTOR_H_
#define ARL_EXECUTOR_H_

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "arl/generator.h"
#include "arl/governor.h"
#include "arl/run_store.h"

namespace arl {

struct RunResult {
  std::string run_id;
  // "completed", "failed" or "integrity_error".
  std::string status;
  std::string error;
  nlohmann::json footer;
};

struct ExecutorOptions {
  int parallelism = 1;
  std::string transport = "loopback";
  GovernorOptions governor;
  // Called from executor threads as runs finish.
  std::function<void(const RunResult&)> on_done;
};

// Fans runs out to up to `parallelism` governors and collects one result per
// descriptor, in descriptor order. A failing run never stops the others.
std::vector<RunResult> Execute(const std::vector<RunDescriptor>& runs, RunStore& store, const ExecutorOptions& options);

// Index document: one entry per descriptor with its status ("pending" when
// no result is known).
nlohmann::json MakeIndex(const std::string& experiment, const std::vector<RunDescriptor>& runs,
                         const std::vector<RunResult>& results = {});

}  // namespace arl

#endif  // ARL_EXECUTOR_H_
