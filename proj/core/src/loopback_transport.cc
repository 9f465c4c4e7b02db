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

#include <condition_variable>
#include <deque>
#include <future>
#include <map>
#include <thread>

#include <fmt/format.h>

#include "arl/transport.h"
#include "transport_internal.h"

namespace arl {
namespace {

struct Endpoint {
  Handler handler;
  std::atomic<bool> open{true};
};

using Registry = std::map<std::string, std::shared_ptr<Endpoint>>;

struct SharedRegistry {
  std::mutex mu;
  Registry endpoints;
};

class LoopbackListener final : public Listener {
 public:
  LoopbackListener(std::shared_ptr<SharedRegistry> registry, std::string address, std::shared_ptr<Endpoint> ep)
      : registry_(std::move(registry)), address_(std::move(address)), endpoint_(std::move(ep)) {}
  ~LoopbackListener() override {
    endpoint_->open = false;
    std::lock_guard<std::mutex> lock(registry_->mu);
    registry_->endpoints.erase(address_);
  }
  std::string address() const override { return address_; }

 private:
  std::shared_ptr<SharedRegistry> registry_;
  std::string address_;
  std::shared_ptr<Endpoint> endpoint_;
};

// Each connection owns a server thread, which gives per-connection ordering
// and lets one endpoint serve several callers at once.
class LoopbackChannel final : public Channel {
 public:
  LoopbackChannel(std::string address, std::shared_ptr<Endpoint> endpoint)
      : address_(std::move(address)), endpoint_(std::move(endpoint)), thread_([this] { Serve(); }) {}

  ~LoopbackChannel() override {
    {
      std::lock_guard<std::mutex> lock(mu_);
      stopping_ = true;
    }
    cv_.notify_all();
    thread_.join();
  }

  std::string peer() const override { return address_; }

 protected:
  std::string RoundTrip(const std::string& frame, std::chrono::milliseconds timeout) override {
    if (!endpoint_->open) throw TransportError(fmt::format("endpoint '{}' is gone", address_), false);
    auto job = std::make_shared<Job>();
    job->frame = frame;
    std::future<std::string> reply = job->promise.get_future();
    {
      std::lock_guard<std::mutex> lock(mu_);
      queue_.push_back(job);
    }
    cv_.notify_one();
    if (reply.wait_for(timeout) != std::future_status::ready) {
      throw TransportError(fmt::format("request to '{}' timed out", address_), true);
    }
    std::string out = reply.get();
    if (out.empty()) throw TransportError(fmt::format("endpoint '{}' closed", address_), false);
    return out;
  }

 private:
  struct Job {
    std::string frame;
    std::promise<std::string> promise;
  };

  void Serve() {
    for (;;) {
      std::shared_ptr<Job> job;
      {
        std::unique_lock<std::mutex> lock(mu_);
        cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
        if (queue_.empty()) return;
        job = queue_.front();
        queue_.pop_front();
      }
      if (!endpoint_->open) {
        job->promise.set_value({});
        continue;
      }
      job->promise.set_value(ServeFrame(endpoint_->handler, job->frame));
    }
  }

  std::string address_;
  std::shared_ptr<Endpoint> endpoint_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::shared_ptr<Job>> queue_;
  bool stopping_ = false;
  std::thread thread_;
};

class LoopbackTransport final : public Transport {
 public:
  std::unique_ptr<Listener> Listen(const std::string& address, Handler handler) override {
    auto ep = std::make_shared<Endpoint>();
    ep->handler = std::move(handler);
    std::lock_guard<std::mutex> lock(registry_->mu);
    if (!registry_->endpoints.emplace(address, ep).second) {
      throw TransportError(fmt::format("address '{}' already bound", address), false);
    }
    return std::make_unique<LoopbackListener>(registry_, address, ep);
  }

  std::unique_ptr<Channel> Connect(const std::string& address) override {
    std::shared_ptr<Endpoint> ep;
    {
      std::lock_guard<std::mutex> lock(registry_->mu);
      const auto it = registry_->endpoints.find(address);
      if (it == registry_->endpoints.end()) {
        throw TransportError(fmt::format("no endpoint at '{}'", address), false);
      }
      ep = it->second;
    }
    return std::make_unique<LoopbackChannel>(address, std::move(ep));
  }

  std::string name() const override { return "loopback"; }

 private:
  std::shared_ptr<SharedRegistry> registry_ = std::make_shared<SharedRegistry>();
};

}  // namespace

std::unique_ptr<Transport> MakeLoopbackTransport() { return std::make_unique<LoopbackTransport>(); }

}  // namespace arl
