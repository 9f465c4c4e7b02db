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

#include "arl/synthetic_grid.h"

#include <array>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "arl/random.h"

namespace arl {
namespace {

using C = CityGridComposition;

constexpr int kFeedersPerSubstation = 3;
constexpr int kNodesPerFeeder = 3;
constexpr int kFeederNodes = 2 * kFeedersPerSubstation * kNodesPerFeeder;
static_assert(kFeederNodes == C::kMvLvTransformers);

// Base impedances at 1 MVA.
constexpr double kZBaseHv = 110.0 * 110.0;
constexpr double kZBaseMv = 20.0 * 20.0;

// Typical 20 kV cable per km and 110 kV overhead line per km, in ohms.
constexpr double kMvROhmPerKm = 0.12;
constexpr double kMvXOhmPerKm = 0.11;
constexpr double kHvROhmPerKm = 0.06;
constexpr double kHvXOhmPerKm = 0.40;

Transformer MakeTransformer(std::string id, std::size_t hv, std::size_t lv, double rating_mva, double uk,
                            double ur) {
  Transformer t;
  t.id = std::move(id);
  t.hv_bus = hv;
  t.lv_bus = lv;
  // Short-circuit voltages are relative to the rated power; rescale to 1 MVA.
  t.r = ur / rating_mva;
  t.x = std::sqrt(uk * uk - ur * ur) / rating_mva;
  t.s_max = rating_mva;
  t.tap_min = -2;
  t.tap_max = 2;
  t.tap_neutral = 0;
  t.tap_step = 0.025;
  t.tap = 0;
  return t;
}

Injection MakeInjection(std::string id, InjectionKind kind, std::string tag, std::size_t bus, double p_kw,
                        double cos_phi) {
  Injection inj;
  inj.id = std::move(id);
  inj.kind = kind;
  inj.tag = std::move(tag);
  inj.bus = bus;
  inj.p_nominal_kw = p_kw;
  inj.cos_phi = cos_phi;
  return inj;
}

// n integer kW sizes around `mean` with +-`spread` relative jitter.
std::vector<int> JitteredSizes(Rng& rng, int n, double mean, double spread) {
  std::vector<int> sizes(n);
  for (auto& s : sizes) s = static_cast<int>(std::lround(mean * (1.0 + spread * (2.0 * rng.UniformUnit() - 1.0))));
  return sizes;
}

}  // namespace

GridModel GenerateSyntheticCityGrid(std::uint64_t seed) {
  Rng rng(DeriveSeed(seed, "synthetic-city-grid"));
  GridModel m;
  m.name = fmt::format("synthetic-city-{}", seed);
  m.s_base_mva = 1.0;

  m.slack_bus = m.AddBus("bus/hv0", VoltageLevel::kHV);
  const std::array<std::size_t, 2> hv{m.AddBus("bus/hv1", VoltageLevel::kHV),
                                      m.AddBus("bus/hv2", VoltageLevel::kHV)};
  const std::array<std::size_t, 2> sub{m.AddBus("bus/mv_a", VoltageLevel::kMV),
                                       m.AddBus("bus/mv_b", VoltageLevel::kMV)};

  for (int k = 0; k < 2; ++k) {
    const double km = 4.0 + 4.0 * rng.UniformUnit();
    m.lines.push_back(Line{fmt::format("line/hv{}", k + 1), m.slack_bus, hv[k], kHvROhmPerKm * km / kZBaseHv,
                           kHvXOhmPerKm * km / kZBaseHv, 0.0, 120.0, true});
  }
  // HV/MV pairs in parallel between each HV bus and its substation.
  for (int k = 0; k < C::kHvMvTransformers; ++k) {
    m.transformers.push_back(
        MakeTransformer(fmt::format("trafo/hvmv{}", k + 1), hv[k / 2], sub[k / 2], 10.0, 0.10, 0.005));
  }

  std::vector<std::size_t> mv_nodes;
  std::vector<std::size_t> lv_nodes;
  int node = 0;
  for (int s = 0; s < 2; ++s) {
    for (int f = 0; f < kFeedersPerSubstation; ++f) {
      std::size_t upstream = sub[s];
      for (int k = 0; k < kNodesPerFeeder; ++k, ++node) {
        const std::size_t mv = m.AddBus(fmt::format("bus/mv{:02d}", node + 1), VoltageLevel::kMV);
        const std::size_t lv = m.AddBus(fmt::format("bus/lv{:02d}", node + 1), VoltageLevel::kLV);
        const double km = 1.0 + 2.0 * rng.UniformUnit();
        m.lines.push_back(Line{fmt::format("line/mv{:02d}", node + 1), upstream, mv, kMvROhmPerKm * km / kZBaseMv,
                               kMvXOhmPerKm * km / kZBaseMv, 0.0, 14.0, true});
        m.transformers.push_back(
            MakeTransformer(fmt::format("trafo/mvlv{:02d}", node + 1), mv, lv, 2.5, 0.06, 0.01));
        mv_nodes.push_back(mv);
        lv_nodes.push_back(lv);
        upstream = mv;
      }
    }
  }

  // Loads: one aggregated district per LV bus, industry on MV feeder nodes
  // (the first four nodes of the pattern carry a second plant).
  const auto subgrid_kw = JitteredSizes(rng, C::kSubgridLoads, 1500.0, 0.3);
  for (int k = 0; k < C::kSubgridLoads; ++k) {
    m.injections.push_back(MakeInjection(fmt::format("load/subgrid{:02d}", k + 1), InjectionKind::kLoad, "subgrid",
                                         lv_nodes[k], subgrid_kw[k], C::kLoadCosPhi));
  }
  const auto industry_kw = JitteredSizes(rng, C::kIndustryLoads, 1800.0, 0.4);
  for (int k = 0; k < C::kIndustryLoads; ++k) {
    const std::size_t at = mv_nodes[(k * 5) % kFeederNodes];
    m.injections.push_back(MakeInjection(fmt::format("load/industry{:02d}", k + 1), InjectionKind::kLoad,
                                         "industry", at, industry_kw[k], C::kLoadCosPhi));
  }

  // Generation sums to exactly 51,000 kW: PV and wind are drawn, the two
  // plants split the remainder.
  const auto pv_kw = JitteredSizes(rng, C::kPvNodes, 600.0, 0.3);
  const auto wind_kw = JitteredSizes(rng, C::kWindFarms, 3500.0, 0.25);
  const int drawn = std::accumulate(pv_kw.begin(), pv_kw.end(), 0) + std::accumulate(wind_kw.begin(), wind_kw.end(), 0);
  const int remainder = static_cast<int>(C::kTotalGenerationKw) - drawn;
  const std::array<int, 2> plant_kw{remainder / 2, remainder - remainder / 2};
  for (int k = 0; k < C::kPlants; ++k) {
    m.injections.push_back(MakeInjection(fmt::format("sgen/plant{}", k + 1), InjectionKind::kSgen, "plant", sub[k],
                                         plant_kw[k], C::kPlantCosPhi));
  }
  for (int k = 0; k < C::kWindFarms; ++k) {
    const std::size_t at = mv_nodes[(k * 7 + 2) % kFeederNodes];
    m.injections.push_back(MakeInjection(fmt::format("sgen/wind{}", k + 1), InjectionKind::kSgen, "wind", at,
                                         wind_kw[k], C::kWindCosPhi));
  }
  for (int k = 0; k < C::kPvNodes; ++k) {
    m.injections.push_back(MakeInjection(fmt::format("sgen/pv{:02d}", k + 1), InjectionKind::kSgen, "pv",
                                         lv_nodes[k], pv_kw[k], C::kPvCosPhi));
  }

  m.Validate();
  return m;
}

}  // namespace arl
