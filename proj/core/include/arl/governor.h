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

#ifndef ARL_GOVERNOR_H_
#define ARL_GOVERNOR_H_

#include <chrono>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "arl/generator.h"
#include "arl/run_store.h"
#include "arl/strategy.h"
#include "arl/transport.h"

namespace arl {

struct GovernorOptions {
  // Bind addresses for socket services ("host:port"); services are spread
  // over them round-robin. Ignored by the loopback transport.
  std::vector<std::string> endpoints;
  std::chrono::milliseconds timeout = kDefaultTimeout;
  const StrategyRegistry* registry = &StrategyRegistry::Default();
};

// Supervises one run: instantiates the environment as a service, starts one
// agent host per agent, paces lock-step episodes over the transport and
// streams every record into a sink.
class Governor {
 public:
  Governor(Transport& transport, GovernorOptions options);

  // Writes header, wiring, step, round and footer records. Returns the
  // footer. On failure the records written so far stay in the sink and the
  // error propagates.
  nlohmann::json Run(const RunDescriptor& descriptor, RecordSink& sink);

 private:
  std::string Address(const std::string& run_id, const std::string& service);

  Transport& transport_;
  GovernorOptions options_;
  int next_endpoint_ = 0;
};

// A governor reachable over the transport: RunAssign in, RunComplete out.
class GovernorService {
 public:
  GovernorService(Transport& transport, const std::string& address, RunStore& store, GovernorOptions options);
  ~GovernorService();
  std::string address() const { return listener_->address(); }

 private:
  Envelope OnAssign(const Envelope& request);

  Transport& transport_;
  RunStore& store_;
  GovernorOptions options_;
  std::unique_ptr<Listener> listener_;
};

// UTC wall clock as "YYYY-MM-DDTHH:MM:SSZ".
std::string UtcTimestamp();

}  // namespace arl

#endif  // ARL_GOVERNOR_H_
