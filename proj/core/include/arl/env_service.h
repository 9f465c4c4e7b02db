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

#ifndef ARL_ENV_SERVICE_H_
#define ARL_ENV_SERVICE_H_

#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "arl/environment.h"
#include "arl/transport.h"

namespace arl {

// Serves an Environment over the wire: EnvReset and EnvStep requests.
class EnvironmentServer {
 public:
  EnvironmentServer(Transport& transport, const std::string& address, std::unique_ptr<Environment> env);
  ~EnvironmentServer();

  std::string address() const { return listener_->address(); }

 private:
  Envelope OnReset(const Envelope& request);
  Envelope OnStep(const Envelope& request);

  std::unique_ptr<Environment> env_;
  std::mutex mu_;
  std::unique_ptr<Listener> listener_;
};

nlohmann::json StepOutcomeToJson(const StepOutcome& outcome);
StepOutcome StepOutcomeFromJson(const nlohmann::json& payload);

// Client side: an Environment whose every call is a request to a server.
class RemoteEnvironment final : public Environment {
 public:
  RemoteEnvironment(std::unique_ptr<Channel> channel, std::string sender_id,
                    std::chrono::milliseconds timeout = kDefaultTimeout);

  ResetOutcome Reset() override;
  StepOutcome Step(const JointActions& actions) override;
  std::vector<AgentInterface> Interfaces() const override { return interfaces_; }
  bool terminated() const override { return terminated_; }
  int step_index() const override { return step_; }
  int horizon() const override { return horizon_; }

  // Sends a heartbeat; throws TransportError if the server is gone.
  void Ping();

 private:
  Envelope Call(MessageKind kind, nlohmann::json payload);

  std::unique_ptr<Channel> channel_;
  std::string sender_id_;
  std::chrono::milliseconds timeout_;
  std::vector<AgentInterface> interfaces_;
  int horizon_ = 0;
  int step_ = 0;
  bool terminated_ = true;
};

}  // namespace arl

#endif  // ARL_ENV_SERVICE_H_
