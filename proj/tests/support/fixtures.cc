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

#include "fixtures.h"

#include <fstream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "arl/error.h"

namespace arl::testing {

TempDir::TempDir() {
  std::random_device rd;
  const auto base = std::filesystem::temp_directory_path();
  for (;;) {
    path_ = base / fmt::format("arl-test-{:016x}", (static_cast<std::uint64_t>(rd()) << 32) | rd());
    if (std::filesystem::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::filesystem::path PlansDir() { return ARL_PLANS_DIR; }

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json MinimalPlan(int horizon, int rounds) {
  return {
      {"schema_version", 1},
      {"name", "minimal"},
      {"environment", {{"grid", {{"seed", 1}}}, {"horizon", horizon}, {"rounds", rounds}}},
      {"agents",
       {{{"name", "attacker"},
         {"role", "attacker"},
         {"strategy", {{"kind", "random"}}},
         {"sensors", {"bus/*"}},
         {"actuators", {"load/*", "sgen/*"}}},
        {{"name", "defender"},
         {"role", "defender"},
         {"strategy", {{"kind", "random"}}},
         {"sensors", {"bus/*"}},
         {"actuators", {"load/*", "sgen/*", "trafo/*"}}}}},
      {"doe", {{"seeds", nlohmann::json::array({1})}}},
  };
}

GridModel TwoBusGrid(double r, double x, double p_load_kw, double cos_phi) {
  GridModel m;
  m.name = "two-bus";
  const auto a = m.AddBus("a", VoltageLevel::kMV);
  const auto b = m.AddBus("b", VoltageLevel::kMV);
  m.slack_bus = a;
  Line l;
  l.id = "ab";
  l.from_bus = a;
  l.to_bus = b;
  l.r = r;
  l.x = x;
  l.s_max = 2.0;
  m.lines.push_back(l);
  Injection load;
  load.id = "load";
  load.bus = b;
  load.p_nominal_kw = p_load_kw;
  load.cos_phi = cos_phi;
  m.injections.push_back(load);
  m.Validate();
  return m;
}

CountingEnvironment::CountingEnvironment(int horizon) : horizon_(horizon) {}

std::vector<AgentInterface> CountingEnvironment::Interfaces() const {
  std::vector<AgentInterface> out;
  for (const auto& [name, role] : {std::pair{"attacker", Role::kAttacker}, std::pair{"defender", Role::kDefender}}) {
    AgentInterface iface;
    iface.agent = name;
    iface.role = role;
    iface.sensors.push_back({std::string(name) + ":s000", Space::MakeBox(0.85, 1.15)});
    iface.actuators.push_back({std::string(name) + ":a000", Space::MakeDiscrete(11)});
    out.push_back(iface);
  }
  return out;
}

ResetOutcome CountingEnvironment::Reset() {
  step_ = 0;
  ResetOutcome r;
  r.interfaces = Interfaces();
  for (const auto& i : r.interfaces) r.readings[i.agent] = {{i.sensors[0].id, std::vector<double>{1.0}}};
  return r;
}

StepOutcome CountingEnvironment::Step(const JointActions& actions) {
  if (terminated()) throw ValidationError("environment", "step requested after termination");
  ++step_;
  StepOutcome o;
  for (const auto& i : Interfaces()) {
    const auto it = actions.find(i.agent);
    const double v = it == actions.end() || it->second.empty() ? 1.0 : 0.9 + 0.02 * ScalarOf(it->second[0].value);
    o.readings[i.agent] = {{i.sensors[0].id, std::vector<double>{v}}};
  }
  o.terminated = terminated();
  return o;
}

}  // namespace arl::testing
