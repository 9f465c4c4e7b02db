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

#include "arl/spaces.h"

#include <cmath>

#include <fmt/format.h>

#include "arl/error.h"

namespace arl {

Space Space::MakeDiscrete(std::int64_t n) {
  if (n < 1) throw ConfigError(fmt::format("Discrete cardinality must be >= 1, got {}", n));
  return Space(Discrete{n});
}

Space Space::MakeBox(std::vector<double> low, std::vector<double> high) {
  if (low.empty() || low.size() != high.size()) {
    throw ConfigError("Box bounds must be non-empty and of equal dimension");
  }
  for (std::size_t i = 0; i < low.size(); ++i) {
    if (!std::isfinite(low[i]) || !std::isfinite(high[i]) || !(low[i] < high[i])) {
      throw ConfigError(fmt::format("Box dimension {} needs finite low < high", i));
    }
  }
  return Space(Box{std::move(low), std::move(high)});
}

const Discrete& Space::discrete() const {
  if (!is_discrete()) throw DomainTypeError("space is not Discrete");
  return std::get<Discrete>(domain_);
}

const Box& Space::box() const {
  if (!is_box()) throw DomainTypeError("space is not a Box");
  return std::get<Box>(domain_);
}

std::string Space::ToString() const {
  if (is_discrete()) return fmt::format("Discrete({})", discrete().n);
  const Box& b = box();
  if (b.dim() == 1) return fmt::format("Box({},{})", b.low[0], b.high[0]);
  return fmt::format("Box(dim={})", b.dim());
}

bool Contains(const Space& space, const SpaceValue& value) {
  if (space.is_discrete()) {
    const auto* v = std::get_if<std::int64_t>(&value);
    if (v == nullptr) throw DomainTypeError("vector value offered to a Discrete space");
    return *v >= 0 && *v < space.discrete().n;
  }
  const auto* v = std::get_if<std::vector<double>>(&value);
  if (v == nullptr) throw DomainTypeError("integer value offered to a Box space");
  const Box& b = space.box();
  if (v->size() != b.dim()) return false;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const double x = (*v)[i];
    if (!(x >= b.low[i] && x <= b.high[i])) return false;
  }
  return true;
}

double DiscretizeSetpoint(const Space& space, std::int64_t index, std::int64_t steps) {
  const Box& b = space.box();
  if (b.dim() != 1) throw DomainTypeError("discretization needs a one-dimensional Box");
  if (steps < 2) throw BoundsError(fmt::format("steps must be >= 2, got {}", steps));
  if (index < 0 || index >= steps) {
    throw BoundsError(fmt::format("index {} outside [0, {})", index, steps));
  }
  if (index == steps - 1) return b.high[0];
  // Dividing last keeps i/10 exact for the 11-step unit box.
  return b.low[0] + static_cast<double>(index) * (b.high[0] - b.low[0]) /
                        static_cast<double>(steps - 1);
}

SpaceValue SampleUniform(const Space& space, Rng& rng) {
  if (space.is_discrete()) {
    return static_cast<std::int64_t>(rng.UniformIndex(static_cast<std::uint64_t>(space.discrete().n)));
  }
  const Box& b = space.box();
  std::vector<double> v(b.dim());
  for (std::size_t i = 0; i < b.dim(); ++i) v[i] = rng.Uniform(b.low[i], b.high[i]);
  return v;
}

double ScalarOf(const SpaceValue& value) {
  if (const auto* i = std::get_if<std::int64_t>(&value)) return static_cast<double>(*i);
  const auto& v = std::get<std::vector<double>>(value);
  if (v.empty()) throw DomainTypeError("empty vector value");
  return v.front();
}

nlohmann::json SpaceToJson(const Space& space) {
  if (space.is_discrete()) return {{"discrete", space.discrete().n}};
  const Box& b = space.box();
  return {{"box", {{"low", b.low}, {"high", b.high}}}};
}

Space SpaceFromJson(const nlohmann::json& j) {
  if (!j.is_object() || j.size() != 1) throw ConfigError("space must be {\"discrete\": n} or {\"box\": {...}}");
  if (j.contains("discrete")) {
    const auto& n = j.at("discrete");
    if (!n.is_number_integer()) throw ConfigError("discrete cardinality must be an integer");
    return Space::MakeDiscrete(n.get<std::int64_t>());
  }
  if (j.contains("box")) {
    const auto& b = j.at("box");
    return Space::MakeBox(b.at("low").get<std::vector<double>>(), b.at("high").get<std::vector<double>>());
  }
  throw ConfigError("unknown space variant");
}

nlohmann::json ValueToJson(const SpaceValue& value) {
  if (const auto* i = std::get_if<std::int64_t>(&value)) return *i;
  return std::get<std::vector<double>>(value);
}

SpaceValue ValueFromJson(const nlohmann::json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_array()) {
    std::vector<double> v;
    v.reserve(j.size());
    for (const auto& x : j) {
      if (!x.is_number()) throw DomainTypeError("box value components must be numbers");
      v.push_back(x.get<double>());
    }
    return v;
  }
  throw DomainTypeError("space value must be an integer or an array of numbers");
}

}  // namespace arl
