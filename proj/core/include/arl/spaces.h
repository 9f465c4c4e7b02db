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

#ifndef ARL_SPACES_H_
#define ARL_SPACES_H_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "arl/random.h"

namespace arl {

// Integers 0..n-1.
struct Discrete {
  std::int64_t n = 1;
  bool operator==(const Discrete&) const = default;
};

// Closed per-dimension intervals [low_i, high_i].
struct Box {
  std::vector<double> low;
  std::vector<double> high;
  std::size_t dim() const { return low.size(); }
  bool operator==(const Box&) const = default;
};

// The only thing an agent learns about a sensor or actuator. Construct through
// the factories, which enforce the invariants.
class Space {
 public:
  static Space MakeDiscrete(std::int64_t n);
  static Space MakeBox(std::vector<double> low, std::vector<double> high);
  static Space MakeBox(double low, double high) {
    return MakeBox(std::vector<double>{low}, std::vector<double>{high});
  }

  bool is_discrete() const { return std::holds_alternative<Discrete>(domain_); }
  bool is_box() const { return std::holds_alternative<Box>(domain_); }
  const Discrete& discrete() const;
  const Box& box() const;

  std::string ToString() const;
  bool operator==(const Space&) const = default;

 private:
  explicit Space(std::variant<Discrete, Box> d) : domain_(std::move(d)) {}
  std::variant<Discrete, Box> domain_;
};

// Integer for Discrete spaces, real vector for Box spaces.
using SpaceValue = std::variant<std::int64_t, std::vector<double>>;

struct SensorReading {
  std::string id;
  SpaceValue value;
  bool operator==(const SensorReading&) const = default;
};

struct ActuatorSetpoint {
  std::string id;
  SpaceValue value;
  bool operator==(const ActuatorSetpoint&) const = default;
};

// Throws DomainTypeError when the value kind does not match the space variant.
bool Contains(const Space& space, const SpaceValue& value);

// low + index * (high - low) / (steps - 1) on a one-dimensional box.
double DiscretizeSetpoint(const Space& box, std::int64_t index, std::int64_t steps);

// Uniform sample; used by the random strategy.
SpaceValue SampleUniform(const Space& space, Rng& rng);

// Scalar view of a value: the integer itself or the first box component.
double ScalarOf(const SpaceValue& value);

nlohmann::json SpaceToJson(const Space& space);
Space SpaceFromJson(const nlohmann::json& j);
nlohmann::json ValueToJson(const SpaceValue& value);
SpaceValue ValueFromJson(const nlohmann::json& j);

}  // namespace arl

#endif  // ARL_SPACES_H_
