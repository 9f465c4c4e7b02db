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

#ifndef ARL_RANDOM_H_
#define ARL_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace arl {

// 64-bit FNV-1a over raw bytes.
constexpr std::uint64_t Fnv1a64(std::string_view bytes,
                                std::uint64_t basis = 0xcbf29ce484222325ULL) {
  std::uint64_t h = basis;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-component seed: keyed hash of the master seed and the component name, so
// that adding a component never shifts another component's stream.
constexpr std::uint64_t DeriveSeed(std::uint64_t master, std::string_view component) {
  return SplitMix64(master ^ Fnv1a64(component));
}

// Seeded generator with distribution code that is identical on every
// standard library (std:: distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform integer in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t UniformIndex(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Uniform real in [0, 1) with 53 random bits.
  double UniformUnit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * UniformUnit(); }

  bool Bernoulli(double p) { return UniformUnit() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace arl

#endif  // ARL_RANDOM_H_
