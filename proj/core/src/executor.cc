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

#include "arl/executor.h"

#include <algorithm>
#include <atomic>
#include <thread>

#include <fmt/format.h>

#include "arl/error.h"

namespace arl {

namespace {

constexpr std::chrono::hours kRunTimeout{24};

RunResult ExecuteOne(const RunDescriptor& d, RunStore& store, const ExecutorOptions& options) {
  RunResult result{d.run_id, "failed", "", nlohmann::json::object()};
  try {
    auto transport = MakeTransport(options.transport);
    const std::string address = transport->name() == "socket" ? "127.0.0.1:0" : "governor/" + d.run_id;
    GovernorService governor(*transport, address, store, options.governor);
    auto channel = transport->Connect(governor.address());
    Envelope assign{kProtocolVersion, MessageKind::kRunAssign, NextCorrelationId("executor"), "executor", "executor",
                    {{"descriptor", d.ToJson()}}};
    const Envelope reply = channel->Request(assign, kRunTimeout);
    result.status = reply.payload.at("status").get<std::string>();
    result.footer = reply.payload.at("footer");
    if (result.status != "completed") result.error = result.footer.value("error", "");
  } catch (const std::exception& e) {
    result.status = "failed";
    result.error = e.what();
  }
  return result;
}

}  // namespace

std::vector<RunResult> Execute(const std::vector<RunDescriptor>& runs, RunStore& store,
                               const ExecutorOptions& options) {
  if (options.parallelism < 1) throw ConfigError("parallelism must be at least 1");
  std::vector<RunResult> results(runs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      results[i] = ExecuteOne(runs[i], store, options);
      if (options.on_done) options.on_done(results[i]);
    }
  };
  const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(options.parallelism), runs.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return results;
}

nlohmann::json MakeIndex(const std::string& experiment, const std::vector<RunDescriptor>& runs,
                         const std::vector<RunResult>& results) {
  std::map<std::string, const RunResult*> by_id;
  for (const auto& r : results) by_id[r.run_id] = &r;
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& d : runs) {
    const auto it = by_id.find(d.run_id);
    nlohmann::json e{{"run_id", d.run_id},
                     {"point", d.point},
                     {"master_seed", d.master_seed},
                     {"status", it == by_id.end() ? "pending" : it->second->status},
                     {"descriptor", d.ToJson()}};
    if (it != by_id.end() && !it->second->error.empty()) e["error"] = it->second->error;
    entries.push_back(std::move(e));
  }
  return {{"experiment", experiment},
          {"schema_version", kRecordSchemaVersion},
          {"software_version", SoftwareVersion()},
          {"runs", entries}};
}

}  // namespace arl
