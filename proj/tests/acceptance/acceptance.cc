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

// Acceptance suite. One PASS/FAIL line per criterion; exits 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include "arl/ctf.h"
#include "arl/environment.h"
#include "arl/generator.h"
#include "arl/governor.h"
#include "arl/plan.h"
#include "arl/power_flow.h"
#include "arl/protection.h"
#include "arl/reward.h"
#include "arl/run_store.h"
#include "arl/synthetic_grid.h"
#include "arl/tabular_q.h"
#include "arl/transport.h"
#include "fixtures.h"
#include "oracles.h"

namespace arl {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void Check(bool ok, std::string note) {
    pass = pass && ok;
    notes.push_back(fmt::format("{}{}", ok ? "" : "[failed] ", note));
  }
};

double Seconds(Clock::time_point since) { return std::chrono::duration<double>(Clock::now() - since).count(); }

std::vector<Record> Play(const RunDescriptor& d, const std::string& transport = "loopback") {
  auto t = MakeTransport(transport);
  Governor g(*t, {});
  MemorySink sink;
  g.Run(d, sink);
  return sink.records();
}

std::vector<std::string> Lines(const std::vector<Record>& records) {
  std::vector<std::string> out;
  for (const auto& r : WithoutTimestamps(records)) out.push_back(RecordLine(r));
  return out;
}

const Record& Footer(const std::vector<Record>& records) {
  if (records.empty() || records.back().at("type") != "footer") throw std::runtime_error("run has no footer");
  return records.back();
}

RunDescriptor Single(const json& doc) { return GenerateRuns(ParsePlan(doc)).at(0); }

// Power flow --------------------------------------------------------------

Verdict PowerFlowOracle() {
  Verdict v;
  Rng rng(20260401);
  const auto start = Clock::now();
  double worst = 0.0;
  int failures = 0;
  for (int i = 0; i < 200; ++i) {
    const GridModel m = testing::RandomConnectedNetwork(rng, 10);
    const auto nr = SolvePowerFlow(m);
    const auto gs = testing::SolveGaussSeidel(m);
    if (!nr.converged || !gs.converged) {
      ++failures;
      continue;
    }
    for (std::size_t b = 0; b < m.buses.size(); ++b) worst = std::max(worst, std::abs(nr.vm[b] - std::abs(gs.v[b])));
  }
  const double elapsed = Seconds(start);
  v.Check(failures == 0, fmt::format("{} of 200 cases failed to converge", failures));
  v.Check(worst <= 1e-6, fmt::format("max |dVm| = {:.3e} pu", worst));
  v.Check(elapsed < 10.0, fmt::format("{:.2f} s", elapsed));
  return v;
}

// Reward ------------------------------------------------------------------

Verdict RewardClosedForm() {
  Verdict v;
  RewardParams def;
  RewardParams att;
  att.role = Role::kAttacker;
  const double expected = std::exp(-0.5);
  const double err = std::max(std::abs(Performance(def, def.mu + def.sigma) - expected),
                              std::abs(Performance(def, def.mu - def.sigma) - expected));
  v.Check(err <= 1e-12, fmt::format("|perf(mu +- sigma) - exp(-1/2)| = {:.1e}", err));

  int mismatches = 0;
  for (int i = 0; i <= 400; ++i) {
    const double mean = 0.5 + 0.0025 * i;
    if (Performance(att, mean) != -Performance(def, mean)) ++mismatches;
  }
  v.Check(mismatches == 0, fmt::format("sign inversion mismatches: {}", mismatches));

  const double t8 = std::abs(Performance(def, 0.8) + def.c);
  const double t5 = std::abs(Performance(def, 0.5) + def.c);
  v.Check(std::max(t8, t5) <= 1e-10,
          fmt::format("tail at sigma 0.05: |perf(0.8) + c| = {:.3e}, |perf(0.5) + c| = {:.3e}", t8, t5));
  return v;
}

// Coins -------------------------------------------------------------------

GridModel OneBranchGrid(bool transformer, double s_max) {
  GridModel m;
  m.name = transformer ? "one-trafo" : "one-line";
  const auto a = m.AddBus("bus/a", VoltageLevel::kMV);
  const auto b = m.AddBus("bus/b", VoltageLevel::kMV);
  m.slack_bus = a;
  if (transformer) {
    Transformer t;
    t.id = "trafo/t";
    t.hv_bus = a;
    t.lv_bus = b;
    t.r = 0.005;
    t.x = 0.04;
    t.s_max = s_max;
    m.transformers.push_back(t);
  } else {
    m.lines.push_back(Line{"line/l", a, b, 0.01, 0.05, 0.0, s_max, true});
  }
  return m;
}

void AddInjection(GridModel& m, const std::string& id, InjectionKind kind, double kw) {
  Injection inj;
  inj.id = id;
  inj.kind = kind;
  inj.bus = 1;
  inj.p_nominal_kw = kw;
  inj.cos_phi = 1.0;
  m.injections.push_back(inj);
}

json FixedDuel(const GridModel& grid, int horizon, int rounds, const std::vector<std::string>& attacker_actuators,
               double attacker_value, const std::vector<std::string>& defender_actuators) {
  auto fixed = [](double value) { return json{{"kind", "fixed"}, {"hyper", {{"value", value}}}}; };
  return {{"schema_version", kPlanSchemaVersion},
          {"name", "coins"},
          {"environment", {{"grid", {{"model", GridToJson(grid)}}}, {"horizon", horizon}, {"rounds", rounds}}},
          {"agents",
           {{{"name", "attacker"},
             {"role", "attacker"},
             {"strategy", fixed(attacker_value)},
             {"sensors", {"bus/*"}},
             {"actuators", attacker_actuators}},
            {{"name", "defender"},
             {"role", "defender"},
             {"strategy", fixed(1.0)},
             {"sensors", {"bus/*"}},
             {"actuators", defender_actuators}}}},
          {"doe", {{"seeds", json::array({1})}}}};
}

// Final attacker totals per round and how many events named `id` each round saw.
struct RoundCoins {
  std::vector<std::int64_t> totals;
  std::vector<int> hits;
};

RoundCoins Coins(const std::vector<Record>& records, const std::string& id) {
  RoundCoins out;
  for (const auto& r : records) {
    if (r.at("type") == "round_start") out.hits.push_back(0);
    if (r.at("type") == "round") out.totals.push_back(r.at("attacker_total").get<std::int64_t>());
    if (r.at("type") != "step") continue;
    for (const auto& e : r.at("events")) out.hits.back() += e.at("id") == id ? 1 : 0;
  }
  return out;
}

Verdict CoinConservation() {
  Verdict v;
  std::int64_t steps = 0, broken = 0, events = 0;
  for (std::uint64_t seed : {1, 2, 3}) {
    auto doc = testing::MinimalPlan(50, 4);
    doc["doe"]["seeds"] = json::array({seed});
    for (const auto& r : Play(Single(doc))) {
      if (r.at("type") != "step") continue;
      ++steps;
      events += static_cast<std::int64_t>(r.at("events").size());
      const auto& l = r.at("ledger");
      if (l.at("defender_balance").get<std::int64_t>() + l.at("attacker_total").get<std::int64_t>() != kInitialStake) {
        ++broken;
      }
    }
  }
  v.Check(broken == 0 && events > 0,
          fmt::format("{} steps, {} disconnections, {} steps off the 10000-coin stake", steps, events, broken));

  // A 1000 kW generator behind a transformer whose tap the attacker pins at
  // the top: overvoltage trips it on step 0 and it stays out.
  for (int horizon : {50, 7}) {
    GridModel g = OneBranchGrid(true, 5.0);
    auto& t = g.transformers[0];
    t.tap_min = -2;
    t.tap_max = 2;
    t.tap_step = 0.1;
    AddInjection(g, "sgen/g", InjectionKind::kSgen, 1000.0);
    const auto c = Coins(Play(Single(FixedDuel(g, horizon, 2, {"trafo/*"}, 1.0, {"sgen/*"}))), "sgen/g");
    const bool ok = std::all_of(c.totals.begin(), c.totals.end(), [](auto x) { return x == 100'000; }) &&
                    std::all_of(c.hits.begin(), c.hits.end(), [](int h) { return h == 1; });
    v.Check(ok, fmt::format("1000 kW generator offline for T = {}: {} milli-coins per round", horizon,
                            c.totals.empty() ? -1 : c.totals.front()));
  }

  // The attacker switches off the generator that balances the load; the
  // branch overloads, trips, and islands both injections.
  for (bool transformer : {true, false}) {
    GridModel g = OneBranchGrid(transformer, 0.5);
    AddInjection(g, "load/l", InjectionKind::kLoad, 1000.0);
    AddInjection(g, "sgen/g", InjectionKind::kSgen, 1000.0);
    const std::string branch = transformer ? "trafo/t" : "line/l";
    const auto c = Coins(Play(Single(FixedDuel(g, 50, 3, {"sgen/*"}, 0.0, {"load/*"}))), branch);
    const std::int64_t expected = (transformer ? kTransformerPayout : kLinePayout) + 2 * 100'000;
    const bool ok = std::all_of(c.totals.begin(), c.totals.end(), [&](auto x) { return x == expected; }) &&
                    std::all_of(c.hits.begin(), c.hits.end(), [](int h) { return h == 1; });
    v.Check(ok, fmt::format("{} trip: {} milli-coins per round, expected {}", branch,
                            c.totals.empty() ? -1 : c.totals.front(), expected));
  }
  return v;
}

// Cascade -----------------------------------------------------------------

std::vector<std::size_t> InjectionsAt(const GridModel& m, std::size_t bus) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m.injections.size(); ++i) {
    if (m.injections[i].bus == bus) out.push_back(i);
  }
  return out;
}

double BranchFlow(const GridModel& m, std::size_t k) {
  const auto sol = SolvePowerFlow(m);
  return sol.transformer_loading[k] * m.transformers[k].s_max;
}

Verdict CascadeConsistency() {
  Verdict v;
  const GridModel base = GenerateSyntheticCityGrid(1);
  const ConstraintConfig cc;
  int feeders = 0, bad_direct = 0, bad_env = 0;

  for (std::size_t k = 0; k < base.transformers.size(); ++k) {
    const auto& tr = base.transformers[k];
    if (tr.id.rfind("trafo/mvlv", 0) != 0) continue;
    ++feeders;
    const auto behind = InjectionsAt(base, tr.lv_bus);

    // Switched out directly.
    GridModel cut = base;
    cut.transformers[k].in_service = false;
    const auto r = CheckAndCascade(cut, cc, 4);
    for (auto i : behind) {
      const auto& id = base.injections[i].id;
      const bool seen = std::any_of(r.log.events.begin(), r.log.events.end(), [&](const DisconnectionEvent& e) {
        return e.element_id == id && e.step == 4 && e.cause == DisconnectCause::kIslanded;
      });
      if (!seen || r.model.injections[i].in_service) ++bad_direct;
    }

    // Tripped by protection inside an environment step: the rating sits
    // between the base flow and the flow after the attacker zeroes one side.
    std::size_t load = behind.front(), sgen = behind.front();
    for (auto i : behind) (base.injections[i].kind == InjectionKind::kLoad ? load : sgen) = i;
    const double s0 = BranchFlow(base, k);
    GridModel no_pv = base, no_load = base;
    no_pv.injections[sgen].scaling = 0.0;
    no_load.injections[load].scaling = 0.0;
    const double s_pv = BranchFlow(no_pv, k), s_load = BranchFlow(no_load, k);
    const bool zero_pv = s_pv >= s_load;
    const double s1 = zero_pv ? s_pv : s_load;
    if (!(s1 > s0)) {
      ++bad_env;
      continue;
    }
    GridEnvironmentConfig ec;
    ec.grid = base;
    ec.grid.transformers[k].s_max = 0.5 * (s0 + s1) / cc.loading_limit;
    ec.horizon = 3;
    const std::string target = base.injections[zero_pv ? sgen : load].id;
    ec.agents.push_back({"attacker", Role::kAttacker, {"bus/*"}, {target}, ActionView::kDiscrete});
    ec.agents.push_back({"defender", Role::kDefender, {"bus/*"}, {"trafo/hvmv1"}, ActionView::kDiscrete});
    GridEnvironment env(ec);
    const auto reset = env.Reset();
    JointActions acts;
    for (const auto& iface : reset.interfaces) {
      for (const auto& a : iface.actuators) {
        const bool attack = iface.role == Role::kAttacker;
        acts[iface.agent].push_back(
            {a.id, attack ? std::int64_t{0} : static_cast<std::int64_t>(env.DescribeActuator(a.id).neutral)});
      }
    }
    const auto out = env.Step(acts);
    auto tripped = [&](const std::string& id) {
      return std::any_of(out.events.begin(), out.events.end(),
                         [&](const DisconnectionEvent& e) { return e.element_id == id && e.step == 0; });
    };
    bool ok = tripped(tr.id);
    for (auto i : behind) ok = ok && tripped(base.injections[i].id) && !env.model().injections[i].in_service;
    if (!ok) ++bad_env;
  }
  v.Check(feeders == 18 && bad_direct == 0,
          fmt::format("{} feeders switched out, {} injections left on", feeders, bad_direct));
  v.Check(bad_env == 0, fmt::format("overload trip inside a step: {} feeders with stragglers", bad_env));

  Rng rng(77);
  int perturbed = 0, not_fixed = 0;
  for (int n = 0; n < 60; ++n) {
    GridModel m = GenerateSyntheticCityGrid(1 + static_cast<std::uint64_t>(n % 4));
    for (auto& inj : m.injections) inj.scaling = rng.Uniform(0.0, 1.0);
    for (auto& t : m.transformers) t.tap = t.tap_min + static_cast<int>(rng.UniformIndex(t.TapPositions()));
    if (n % 3 == 0) {
      for (auto& l : m.lines) l.s_max *= rng.Uniform(0.2, 1.0);
    }
    const auto once = CheckAndCascade(m, cc, n);
    const auto twice = CheckAndCascade(once.model, cc, n);
    perturbed += once.log.events.empty() ? 0 : 1;
    if (!twice.log.events.empty() || !(twice.model == once.model)) ++not_fixed;
  }
  v.Check(not_fixed == 0,
          fmt::format("cascade of cascade: {} of 60 states changed again ({} had events)", not_fixed, perturbed));
  return v;
}

// Reproducibility ---------------------------------------------------------

json LearningDuel(int horizon, int rounds) {
  auto doc = testing::MinimalPlan(horizon, rounds);
  doc["agents"][0]["strategy"] = {{"kind", "tabular_q"}, {"hyper", {{"alpha", 0.5}, {"gamma", 0.0}}}};
  doc["agents"][0]["workers"] = 2;
  return doc;
}

Verdict Reproducibility() {
  Verdict v;
  const auto d = Single(LearningDuel(40, 3));
  const auto first = Lines(Play(d));
  v.Check(first == Lines(Play(d)), fmt::format("replay of {}: {} records", d.run_id, first.size()));
  v.Check(first == Lines(Play(d, "socket")), "loopback and socket records agree");

  const auto big = Single(LearningDuel(200, 10));
  const auto start = Clock::now();
  const auto records = Play(big);
  const double elapsed = Seconds(start);
  v.Check(Footer(records).at("status") == "completed" && elapsed < 60.0,
          fmt::format("10 rounds x 200 steps on the synthetic grid: {:.1f} s", elapsed));
  return v;
}

// DoE ---------------------------------------------------------------------

Verdict DoeExpansion() {
  Verdict v;
  auto doc = testing::MinimalPlan();
  doc["agents"][1]["strategy"] = {{"kind", "tabular_q"}};
  doc["doe"] = {{"axes",
                 {{"agents.defender.reward.sigma", {0.03, 0.05}},
                  {"agents.defender.strategy.hyper.epsilon_start", {0.1, 0.2, 0.3}}}},
                {"seeds", {11, 12, 13, 14, 15}}};
  const auto plan = ParsePlan(doc);
  const auto runs = GenerateRuns(plan);
  std::set<std::string> ids;
  for (const auto& r : runs) ids.insert(r.run_id);
  v.Check(runs.size() == 30 && ids.size() == 30, fmt::format("{} descriptors, {} distinct ids", runs.size(), ids.size()));

  const auto again = GenerateRuns(ParsePlan(json::parse(plan.document.dump())));
  bool stable = again.size() == runs.size();
  for (std::size_t i = 0; stable && i < runs.size(); ++i) stable = again[i].run_id == runs[i].run_id;
  v.Check(stable, "ids unchanged after re-reading the normalized plan");
  return v;
}

// Learning signal ---------------------------------------------------------

double LastQuarterSum(const std::vector<std::int64_t>& series) {
  const std::size_t q = series.size() / 4;
  double sum = 0.0;
  for (std::size_t i = series.size() - q; i < series.size(); ++i) sum += ToCoins(series[i]);
  return sum;
}

double Mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

Verdict LearningSignal() {
  Verdict v;
  const auto start = Clock::now();

  std::map<std::uint64_t, double> learner, random;
  for (const auto& d : GenerateRuns(LoadPlan((testing::PlansDir() / "desk_tournament.json").string()))) {
    const auto series = Footer(Play(d)).at("attacker_total_series").get<std::vector<std::int64_t>>();
    const std::string kind = d.point.at("agents.attacker.strategy").at("kind");
    (kind == "tabular_q" ? learner : random)[d.master_seed] = LastQuarterSum(series);
  }
  std::vector<double> x, y;
  for (const auto& [seed, coins] : learner) {
    if (!random.count(seed)) continue;
    x.push_back(coins);
    y.push_back(random.at(seed));
  }
  const auto w = testing::WilcoxonGreater(x, y);
  v.Check(x.size() == 20 && w.p_value < 0.05,
          fmt::format("attacker last-quarter coins over {} seeds: TabularQ {:.0f} vs Random {:.0f}, W+ = {}, p = {:.2e}",
                      x.size(), Mean(x), Mean(y), w.w_plus, w.p_value));

  std::vector<double> first, last;
  for (const auto& d : GenerateRuns(LoadPlan((testing::PlansDir() / "desk_defense.json").string()))) {
    std::vector<double> per_round;
    for (const auto& r : Play(d)) {
      if (r.at("type") == "round") per_round.push_back(r.at("mean_rewards").at("defender").get<double>());
    }
    const std::size_t q = per_round.size() / 4;
    first.push_back(Mean({per_round.begin(), per_round.begin() + static_cast<std::ptrdiff_t>(q)}));
    last.push_back(Mean({per_round.end() - static_cast<std::ptrdiff_t>(q), per_round.end()}));
  }
  v.Check(Mean(last) > Mean(first), fmt::format("defender mean reward over {} seeds: first quarter {:.4f}, last {:.4f}",
                                                first.size(), Mean(first), Mean(last)));

  const double elapsed = Seconds(start);
  v.Check(elapsed < 1800.0, fmt::format("{:.0f} s", elapsed));
  return v;
}

// Heterogeneous tournament ------------------------------------------------

Verdict HeterogeneousTournament() {
  Verdict v;
  auto doc = LearningDuel(50, 10);
  const auto d = Single(doc);
  const auto records = Play(d, "socket");
  const auto& footer = Footer(records);

  // Re-check every step against the published wiring.
  std::map<std::string, std::map<std::string, Space>> wired;
  for (const auto& r : records) {
    if (r.at("type") != "wiring") continue;
    for (const auto& a : r.at("agents")) {
      for (const auto& x : a.at("actuators")) wired[a.at("name")].insert_or_assign(x.at("id").get<std::string>(), SpaceFromJson(x.at("space")));
    }
  }
  std::int64_t steps = 0, bad = 0;
  for (const auto& r : records) {
    if (r.at("type") != "step") continue;
    ++steps;
    for (const auto& [agent, actuators] : wired) {
      std::set<std::string> seen;
      for (const auto& sp : SetpointsFromJson(r.at("setpoints").at(agent))) {
        const auto it = actuators.find(sp.id);
        if (it == actuators.end() || !seen.insert(sp.id).second || !Contains(it->second, sp.value)) ++bad;
      }
      if (seen.size() != actuators.size()) ++bad;
    }
  }
  const auto& msgs = footer.at("messages");
  const std::int64_t agents = static_cast<std::int64_t>(wired.size());
  const bool counts = msgs.value(ToString(MessageKind::kActRequest), std::int64_t{0}) == steps * agents &&
                      msgs.value(ToString(MessageKind::kEnvStepResult), std::int64_t{0}) == steps * agents &&
                      msgs.value(ToString(MessageKind::kEnvStep), std::int64_t{0}) == steps;
  const auto& versions = footer.at("parameter_versions").at("attacker");
  const int conductor = versions.at("conductor");
  bool synced = conductor == 10;
  for (const auto& w : versions.at("workers")) synced = synced && w == conductor;

  v.Check(footer.at("status") == "completed" && footer.at("episodes") == 10,
          fmt::format("tabular_q attacker vs random defender: {}, {} episodes, winner {}",
                      footer.at("status").get<std::string>(), footer.at("episodes").get<int>(),
                      footer.at("winner").get<std::string>()));
  v.Check(footer.at("conformance").at("violations") == 0 && bad == 0,
          fmt::format("{} requests, {} steps re-checked, {} setpoint violations",
                      footer.at("conformance").at("requests").get<std::int64_t>(), steps, bad));
  v.Check(counts, "request counts match steps x agents");
  v.Check(synced, fmt::format("attacker parameters at version {} everywhere", conductor));
  return v;
}

// TabularQ ----------------------------------------------------------------

AgentInterface OneSensorOneActuator() {
  AgentInterface iface;
  iface.agent = "q";
  iface.role = Role::kDefender;
  iface.sensors.push_back({"q:s000", Space::MakeBox(0.85, 1.15)});
  iface.actuators.push_back({"q:a000", Space::MakeDiscrete(2)});
  return iface;
}

Readings At(double x) { return {{"q:s000", std::vector<double>{x}}}; }

double LearnedGap(const testing::Mdp& mdp, std::uint64_t seed) {
  const auto q_star = testing::ValueIteration(mdp);
  const auto iface = OneSensorOneActuator();
  const auto cfg = TabularQConfig::FromJson(
      {{"alpha", 0.5}, {"gamma", mdp.gamma}, {"bins", 2}, {"epsilon_start", 1.0}, {"epsilon_end", 1.0}});
  const double obs[2] = {0.9, 1.1};
  TabularQStrategy strategy(cfg, iface);
  TabularQMutator mutator(cfg, iface);
  ParameterSet params{QTables::Zero(iface, cfg.bins).ToJson(), 0};
  Rng rng(seed);
  int s = 0;
  for (int episode = 0; episode < 400; ++episode) {
    ExperienceBatch batch{0, params.version, {}};
    for (int t = 0; t < 25; ++t) {
      const auto a = std::get<std::int64_t>(strategy.ProposeActions(At(obs[s]), {}, rng)[0].value);
      const int next = mdp.next[s][a];
      batch.tuples.push_back({0, At(obs[s]), {{"q:a000", a}}, mdp.reward[s][a], At(obs[next]), false});
      s = next;
    }
    const auto u = mutator.Mutate(batch, params);
    params = {u.blob, u.version};
    strategy.SetParameters(params);
  }
  const auto q = QTables::FromJson(params.blob);
  double gap = 0.0;
  for (int st = 0; st < 2; ++st) {
    for (int a = 0; a < 2; ++a) gap = std::max(gap, std::abs(q.q[0][st][a] - q_star[st][a]));
  }
  return gap;
}

Verdict TabularQCorrectness() {
  Verdict v;
  testing::Mdp swap{2, 2, {{0, 1}, {0, 1}}, {{0.0, 1.0}, {2.0, -1.0}}, 0.9};
  testing::Mdp stay{2, 2, {{1, 0}, {0, 1}}, {{0.5, -0.5}, {1.0, 0.25}}, 0.5};
  const double g1 = LearnedGap(swap, 11);
  const double g2 = LearnedGap(stay, 12);
  v.Check(g1 <= 1e-6, fmt::format("max |Q - Q*| = {:.2e} (gamma 0.9)", g1));
  v.Check(g2 <= 1e-6, fmt::format("max |Q - Q*| = {:.2e} (gamma 0.5)", g2));
  return v;
}

}  // namespace
}  // namespace arl

int main(int argc, char** argv) {
  // Optional arguments pick criteria by number.
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const std::vector<std::pair<const char*, std::function<arl::Verdict()>>> criteria{
      {"power-flow oracle equivalence", arl::PowerFlowOracle},
      {"reward closed form", arl::RewardClosedForm},
      {"coin conservation", arl::CoinConservation},
      {"cascade consistency", arl::CascadeConsistency},
      {"reproducibility", arl::Reproducibility},
      {"experiment expansion", arl::DoeExpansion},
      {"learning signal", arl::LearningSignal},
      {"heterogeneous tournament", arl::HeterogeneousTournament},
      {"tabular Q correctness", arl::TabularQCorrectness},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, run] : criteria) {
    ++n;
    if (!only.empty() && !only.count(n)) continue;
    arl::Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      v = run();
    } catch (const std::exception& e) {
      v.Check(false, fmt::format("threw: {}", e.what()));
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string notes;
    for (const auto& note : v.notes) notes += (notes.empty() ? "" : "; ") + note;
    fmt::print("{} {} {} [{:.1f} s]: {}\n", v.pass ? "PASS" : "FAIL", n, name, s, notes);
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  const int ran = only.empty() ? n : static_cast<int>(only.size());
  fmt::print("{} of {} criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
