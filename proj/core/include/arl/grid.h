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

#ifndef ARL_GRID_H_
#define ARL_GRID_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace arl {

enum class VoltageLevel { kHV, kMV, kLV };

struct Bus {
  std::string id;
  VoltageLevel level = VoltageLevel::kMV;
  bool in_service = true;
  bool operator==(const Bus&) const = default;
};

// Pi-model line, all quantities per unit on the system base.
struct Line {
  std::string id;
  std::size_t from_bus = 0;
  std::size_t to_bus = 0;
  double r = 0.0;
  double x = 0.0;
  double b = 0.0;
  double s_max = 1.0;
  bool in_service = true;
  bool operator==(const Line&) const = default;
};

// Two-winding transformer with an LV-side voltage ratio
// 1 + (tap - tap_neutral) * tap_step, so raising the tap raises the LV voltage.
struct Transformer {
  std::string id;
  std::size_t hv_bus = 0;
  std::size_t lv_bus = 0;
  double r = 0.0;
  double x = 0.0;
  double s_max = 1.0;
  int tap_min = 0;
  int tap_max = 0;
  int tap_neutral = 0;
  double tap_step = 0.025;
  int tap = 0;
  bool in_service = true;

  double Ratio() const { return 1.0 + static_cast<double>(tap - tap_neutral) * tap_step; }
  int TapPositions() const { return tap_max - tap_min + 1; }
  bool operator==(const Transformer&) const = default;
};

enum class InjectionKind { kLoad, kSgen };

// Load or static generator, modelled as a PQ injection. `tag` is a free-form
// category ("subgrid", "industry", "plant", "wind", "pv").
struct Injection {
  std::string id;
  InjectionKind kind = InjectionKind::kLoad;
  std::string tag;
  std::size_t bus = 0;
  double p_nominal_kw = 0.0;
  double cos_phi = 1.0;
  double scaling = 1.0;
  bool in_service = true;

  double ActivePowerKw() const { return in_service ? scaling * p_nominal_kw : 0.0; }
  double TanPhi() const;
  bool operator==(const Injection&) const = default;
};

struct GridModel {
  std::string name;
  double s_base_mva = 1.0;
  std::size_t slack_bus = 0;
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<Transformer> transformers;
  std::vector<Injection> injections;

  std::optional<std::size_t> FindBus(const std::string& id) const;
  std::optional<std::size_t> FindLine(const std::string& id) const;
  std::optional<std::size_t> FindTransformer(const std::string& id) const;
  std::optional<std::size_t> FindInjection(const std::string& id) const;

  std::size_t AddBus(std::string id, VoltageLevel level);

  // Throws ModelError on broken references or violated element invariants.
  void Validate() const;

  bool operator==(const GridModel&) const = default;
};

const char* ToString(VoltageLevel level);
const char* ToString(InjectionKind kind);

inline constexpr int kGridFormatVersion = 1;

nlohmann::json GridToJson(const GridModel& model);
GridModel GridFromJson(const nlohmann::json& j);

}  // namespace arl

#endif  // ARL_GRID_H_
