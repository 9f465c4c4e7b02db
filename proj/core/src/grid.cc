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

#include "arl/grid.h"

#include <cmath>
#include <set>

#include <fmt/format.h>

#include "arl/error.h"

namespace arl {
namespace {

template <typename T>
std::optional<std::size_t> FindById(const std::vector<T>& items, const std::string& id) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].id == id) return i;
  }
  return std::nullopt;
}

VoltageLevel LevelFromString(const std::string& s) {
  if (s == "HV") return VoltageLevel::kHV;
  if (s == "MV") return VoltageLevel::kMV;
  if (s == "LV") return VoltageLevel::kLV;
  throw ModelError("unknown voltage level '" + s + "'");
}

InjectionKind KindFromString(const std::string& s) {
  if (s == "load") return InjectionKind::kLoad;
  if (s == "sgen") return InjectionKind::kSgen;
  throw ModelError("unknown injection kind '" + s + "'");
}

}  // namespace

double Injection::TanPhi() const { return std::tan(std::acos(cos_phi)); }

const char* ToString(VoltageLevel level) {
  switch (level) {
    case VoltageLevel::kHV: return "HV";
    case VoltageLevel::kMV: return "MV";
    case VoltageLevel::kLV: return "LV";
  }
  return "?";
}

const char* ToString(InjectionKind kind) {
  return kind == InjectionKind::kLoad ? "load" : "sgen";
}

std::optional<std::size_t> GridModel::FindBus(const std::string& id) const { return FindById(buses, id); }
std::optional<std::size_t> GridModel::FindLine(const std::string& id) const { return FindById(lines, id); }
std::optional<std::size_t> GridModel::FindTransformer(const std::string& id) const {
  return FindById(transformers, id);
}
std::optional<std::size_t> GridModel::FindInjection(const std::string& id) const {
  return FindById(injections, id);
}

std::size_t GridModel::AddBus(std::string id, VoltageLevel level) {
  buses.push_back(Bus{std::move(id), level, true});
  return buses.size() - 1;
}

void GridModel::Validate() const {
  if (buses.empty()) throw ModelError("grid has no buses");
  if (slack_bus >= buses.size()) throw ModelError("slack bus index out of range");
  if (!buses[slack_bus].in_service) throw ModelError("slack bus is out of service");
  if (!(s_base_mva > 0.0)) throw ModelError("s_base_mva must be positive");

  std::set<std::string> ids;
  auto unique = [&ids](const std::string& id) {
    if (id.empty()) throw ModelError("element with empty id");
    if (!ids.insert(id).second) throw ModelError("duplicate element id '" + id + "'");
  };
  auto bus_ok = [this](std::size_t b, const std::string& who) {
    if (b >= buses.size()) throw ModelError(who + " references an unknown bus");
  };

  for (const auto& bus : buses) unique(bus.id);
  for (const auto& l : lines) {
    unique(l.id);
    bus_ok(l.from_bus, l.id);
    bus_ok(l.to_bus, l.id);
    if (l.from_bus == l.to_bus) throw ModelError(l.id + " connects a bus to itself");
    if (!(l.r >= 0.0) || l.x == 0.0 || !std::isfinite(l.x)) throw ModelError(l.id + " needs r >= 0 and x != 0");
    if (!(l.s_max > 0.0)) throw ModelError(l.id + " needs s_max > 0");
  }
  for (const auto& t : transformers) {
    unique(t.id);
    bus_ok(t.hv_bus, t.id);
    bus_ok(t.lv_bus, t.id);
    if (t.hv_bus == t.lv_bus) throw ModelError(t.id + " connects a bus to itself");
    if (!(t.r >= 0.0) || t.x == 0.0) throw ModelError(t.id + " needs r >= 0 and x != 0");
    if (!(t.s_max > 0.0)) throw ModelError(t.id + " needs s_max > 0");
    if (t.tap_min > t.tap_max || t.tap < t.tap_min || t.tap > t.tap_max ||
        t.tap_neutral < t.tap_min || t.tap_neutral > t.tap_max) {
      throw ModelError(t.id + " has a tap outside its declared range");
    }
    for (int tap = t.tap_min; tap <= t.tap_max; ++tap) {
      if (!(1.0 + (tap - t.tap_neutral) * t.tap_step > 0.0)) {
        throw ModelError(t.id + " has a non-positive ratio in its tap range");
      }
    }
  }
  for (const auto& inj : injections) {
    unique(inj.id);
    bus_ok(inj.bus, inj.id);
    if (!(inj.p_nominal_kw > 0.0)) throw ModelError(inj.id + " needs P_N > 0");
    if (!(inj.cos_phi > 0.0 && inj.cos_phi <= 1.0)) throw ModelError(inj.id + " needs 0 < cos_phi <= 1");
    if (!(inj.scaling >= 0.0 && inj.scaling <= 1.0)) throw ModelError(inj.id + " needs scaling in [0, 1]");
  }
}

nlohmann::json GridToJson(const GridModel& m) {
  using nlohmann::json;
  json buses = json::array();
  for (const auto& b : m.buses) {
    buses.push_back({{"id", b.id}, {"level", ToString(b.level)}, {"in_service", b.in_service}});
  }
  json lines = json::array();
  for (const auto& l : m.lines) {
    lines.push_back({{"id", l.id},
                     {"from", m.buses[l.from_bus].id},
                     {"to", m.buses[l.to_bus].id},
                     {"r", l.r},
                     {"x", l.x},
                     {"b", l.b},
                     {"s_max", l.s_max},
                     {"in_service", l.in_service}});
  }
  json trafos = json::array();
  for (const auto& t : m.transformers) {
    trafos.push_back({{"id", t.id},
                      {"hv", m.buses[t.hv_bus].id},
                      {"lv", m.buses[t.lv_bus].id},
                      {"r", t.r},
                      {"x", t.x},
                      {"s_max", t.s_max},
                      {"tap_min", t.tap_min},
                      {"tap_max", t.tap_max},
                      {"tap_neutral", t.tap_neutral},
                      {"tap_step", t.tap_step},
                      {"tap", t.tap},
                      {"in_service", t.in_service}});
  }
  json injections = json::array();
  for (const auto& i : m.injections) {
    injections.push_back({{"id", i.id},
                          {"kind", ToString(i.kind)},
                          {"tag", i.tag},
                          {"bus", m.buses[i.bus].id},
                          {"p_nominal_kw", i.p_nominal_kw},
                          {"cos_phi", i.cos_phi},
                          {"scaling", i.scaling},
                          {"in_service", i.in_service}});
  }
  return {{"format", "arl-grid"},
          {"version", kGridFormatVersion},
          {"name", m.name},
          {"s_base_mva", m.s_base_mva},
          {"slack", m.buses.at(m.slack_bus).id},
          {"buses", buses},
          {"lines", lines},
          {"transformers", trafos},
          {"injections", injections}};
}

GridModel GridFromJson(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "arl-grid") throw ModelError("not a grid document");
    const int version = j.at("version").get<int>();
    if (version != kGridFormatVersion) {
      throw ModelError(fmt::format("unsupported grid format version {}", version));
    }
    GridModel m;
    m.name = j.at("name").get<std::string>();
    m.s_base_mva = j.at("s_base_mva").get<double>();
    for (const auto& b : j.at("buses")) {
      m.buses.push_back(Bus{b.at("id").get<std::string>(), LevelFromString(b.at("level").get<std::string>()),
                            b.at("in_service").get<bool>()});
    }
    auto bus = [&m](const nlohmann::json& v) {
      const auto id = v.get<std::string>();
      auto idx = m.FindBus(id);
      if (!idx) throw ModelError("unknown bus '" + id + "'");
      return *idx;
    };
    m.slack_bus = bus(j.at("slack"));
    for (const auto& l : j.at("lines")) {
      m.lines.push_back(Line{l.at("id").get<std::string>(), bus(l.at("from")), bus(l.at("to")),
                             l.at("r").get<double>(), l.at("x").get<double>(), l.at("b").get<double>(),
                             l.at("s_max").get<double>(), l.at("in_service").get<bool>()});
    }
    for (const auto& t : j.at("transformers")) {
      Transformer tr;
      tr.id = t.at("id").get<std::string>();
      tr.hv_bus = bus(t.at("hv"));
      tr.lv_bus = bus(t.at("lv"));
      tr.r = t.at("r").get<double>();
      tr.x = t.at("x").get<double>();
      tr.s_max = t.at("s_max").get<double>();
      tr.tap_min = t.at("tap_min").get<int>();
      tr.tap_max = t.at("tap_max").get<int>();
      tr.tap_neutral = t.at("tap_neutral").get<int>();
      tr.tap_step = t.at("tap_step").get<double>();
      tr.tap = t.at("tap").get<int>();
      tr.in_service = t.at("in_service").get<bool>();
      m.transformers.push_back(std::move(tr));
    }
    for (const auto& i : j.at("injections")) {
      Injection inj;
      inj.id = i.at("id").get<std::string>();
      inj.kind = KindFromString(i.at("kind").get<std::string>());
      inj.tag = i.at("tag").get<std::string>();
      inj.bus = bus(i.at("bus"));
      inj.p_nominal_kw = i.at("p_nominal_kw").get<double>();
      inj.cos_phi = i.at("cos_phi").get<double>();
      inj.scaling = i.at("scaling").get<double>();
      inj.in_service = i.at("in_service").get<bool>();
      m.injections.push_back(std::move(inj));
    }
    m.Validate();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed grid document: ") + e.what());
  }
}

}  // namespace arl
