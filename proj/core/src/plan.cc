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

#include "arl/plan.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "arl/synthetic_grid.h"

namespace arl {

namespace {

using nlohmann::json;

// Collects violations while reading a document; every getter falls back to a
// default so reading can continue past a bad field.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& out) : out_(out) {}

  void Fail(const std::string& path, const std::string& what) { out_.push_back(fmt::format("{}: {}", path, what)); }

  const json* Field(const json& obj, const std::string& path, const char* key, bool required) {
    if (!obj.is_object() || !obj.contains(key)) {
      if (required) Fail(path + "." + key, "missing");
      return nullptr;
    }
    return &obj.at(key);
  }

  template <typename T>
  T Number(const json& obj, const std::string& path, const char* key, T def, bool required = false) {
    const json* v = Field(obj, path, key, required);
    if (!v) return def;
    if constexpr (std::is_integral_v<T>) {
      if (!v->is_number_integer()) {
        Fail(path + "." + key, "must be an integer");
        return def;
      }
    } else if (!v->is_number()) {
      Fail(path + "." + key, "must be a number");
      return def;
    }
    return v->get<T>();
  }

  std::string String(const json& obj, const std::string& path, const char* key, const std::string& def,
                     bool required = false) {
    const json* v = Field(obj, path, key, required);
    if (!v) return def;
    if (!v->is_string()) {
      Fail(path + "." + key, "must be a string");
      return def;
    }
    return v->get<std::string>();
  }

  std::vector<std::string> Strings(const json& obj, const std::string& path, const char* key) {
    std::vector<std::string> out;
    const json* v = Field(obj, path, key, false);
    if (!v) return out;
    if (!v->is_array()) {
      Fail(path + "." + key, "must be a list of strings");
      return out;
    }
    for (const auto& e : *v) {
      if (!e.is_string()) {
        Fail(path + "." + key, "must be a list of strings");
        return {};
      }
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  void RejectUnknown(const json& obj, const std::string& path, std::initializer_list<const char*> known) {
    if (!obj.is_object()) return;
    for (const auto& [key, unused] : obj.items()) {
      if (std::none_of(known.begin(), known.end(), [&key](const char* k) { return key == k; })) {
        Fail(path + "." + key, "unknown field");
      }
    }
  }

 private:
  std::vector<std::string>& out_;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json NormalizeEnvironment(Reader& r, const json& env, const std::string& base_dir, EnvironmentPlan& out) {
  const std::string p = "environment";
  if (!env.is_object()) {
    r.Fail(p, "must be an object");
    return json::object();
  }
  r.RejectUnknown(env, p, {"grid", "horizon", "rounds", "constraints", "power_flow"});
  json grid = json{{"seed", 1}};
  if (const json* g = r.Field(env, p, "grid", false)) {
    if (!g->is_object() || g->size() != 1 || !(g->contains("seed") || g->contains("file") || g->contains("model"))) {
      r.Fail(p + ".grid", "must hold exactly one of seed, file or model");
    } else if (g->contains("seed")) {
      out.grid_seed = r.Number<std::uint64_t>(*g, p + ".grid", "seed", 1);
      grid = {{"seed", out.grid_seed}};
    } else {
      try {
        json model;
        if (g->contains("file")) {
          const std::filesystem::path file = g->at("file").get<std::string>();
          model = json::parse(ReadFile((std::filesystem::path(base_dir) / file).string()));
        } else {
          model = g->at("model");
        }
        out.grid_model = GridFromJson(model);
        grid = {{"model", GridToJson(*out.grid_model)}};
      } catch (const std::exception& e) {
        r.Fail(p + ".grid", e.what());
      }
    }
  }
  out.horizon = r.Number<int>(env, p, "horizon", out.horizon, true);
  if (out.horizon <= 0) r.Fail(p + ".horizon", "must be positive");
  out.rounds = r.Number<int>(env, p, "rounds", out.rounds);
  if (out.rounds <= 0) r.Fail(p + ".rounds", "must be positive");

  if (const json* c = r.Field(env, p, "constraints", false)) {
    r.RejectUnknown(*c, p + ".constraints", {"v_min", "v_max", "v_cut", "loading_limit", "cascade_cap"});
    try {
      out.constraints = ConstraintConfigFromJson(*c);
    } catch (const std::exception& e) {
      r.Fail(p + ".constraints", e.what());
    }
  }
  if (const json* pf = r.Field(env, p, "power_flow", false)) {
    r.RejectUnknown(*pf, p + ".power_flow", {"tol", "max_iter"});
    out.power_flow.tol = r.Number<double>(*pf, p + ".power_flow", "tol", out.power_flow.tol);
    out.power_flow.max_iter = r.Number<int>(*pf, p + ".power_flow", "max_iter", out.power_flow.max_iter);
    if (!(out.power_flow.tol > 0.0)) r.Fail(p + ".power_flow.tol", "must be positive");
    if (out.power_flow.max_iter < 1) r.Fail(p + ".power_flow.max_iter", "must be positive");
  }
  return {{"grid", grid},
          {"horizon", out.horizon},
          {"rounds", out.rounds},
          {"constraints", ConstraintConfigToJson(out.constraints)},
          {"power_flow", {{"tol", out.power_flow.tol}, {"max_iter", out.power_flow.max_iter}}}};
}

json NormalizeAgent(Reader& r, const json& a, const std::string& p, const StrategyRegistry& registry, AgentPlan& out) {
  if (!a.is_object()) {
    r.Fail(p, "must be an object");
    return json::object();
  }
  r.RejectUnknown(a, p, {"name", "role", "strategy", "reward", "sensors", "actuators", "workers", "view"});
  out.name = r.String(a, p, "name", "", true);
  const std::string role = r.String(a, p, "role", "", true);
  if (role == "attacker" || role == "defender") {
    out.role = RoleFromString(role);
  } else if (!role.empty()) {
    r.Fail(p + ".role", "must be attacker or defender");
  }

  const StrategyKind* kind = nullptr;
  if (const json* s = r.Field(a, p, "strategy", true)) {
    r.RejectUnknown(*s, p + ".strategy", {"kind", "hyper"});
    out.kind = r.String(*s, p + ".strategy", "kind", "", true);
    if (!out.kind.empty()) {
      if (registry.Has(out.kind)) {
        kind = &registry.Get(out.kind);
      } else {
        r.Fail(p + ".strategy.kind", fmt::format("unknown strategy kind '{}'", out.kind));
      }
    }
    if (const json* h = r.Field(*s, p + ".strategy", "hyper", false)) {
      if (!h->is_object()) {
        r.Fail(p + ".strategy.hyper", "must be an object");
      } else {
        out.hyper = *h;
      }
    }
  }
  if (kind) {
    for (const auto& [key, unused] : out.hyper.items()) {
      if (std::find(kind->hyper_keys.begin(), kind->hyper_keys.end(), key) == kind->hyper_keys.end()) {
        r.Fail(p + ".strategy.hyper." + key, fmt::format("not a {} hyperparameter", out.kind));
      }
    }
    for (const auto& problem : kind->check_hyper(out.hyper)) r.Fail(p + ".strategy.hyper", problem);
  }

  json reward = json::object();
  if (const json* rw = r.Field(a, p, "reward", false)) {
    r.RejectUnknown(*rw, p + ".reward", {"c", "mu", "sigma"});
    reward = *rw;
  }
  out.reward.role = out.role;
  out.reward.c = r.Number<double>(reward, p + ".reward", "c", out.reward.c);
  out.reward.mu = r.Number<double>(reward, p + ".reward", "mu", out.reward.mu);
  out.reward.sigma = r.Number<double>(reward, p + ".reward", "sigma", out.reward.sigma);
  if (!(out.reward.sigma > 0.0)) r.Fail(p + ".reward.sigma", "must be positive");

  out.sensors = r.Strings(a, p, "sensors");
  out.actuators = r.Strings(a, p, "actuators");
  if (out.sensors.empty()) r.Fail(p + ".sensors", "must select at least one element");
  if (out.actuators.empty()) r.Fail(p + ".actuators", "must select at least one element");
  out.workers = r.Number<int>(a, p, "workers", 1);
  if (out.workers < 1) r.Fail(p + ".workers", "must be at least 1");

  const bool continuous = kind && kind->capability == Capability::kContinuous;
  const std::string view = r.String(a, p, "view", continuous ? "continuous" : "discrete");
  if (view == "discrete" || view == "continuous") {
    out.view = ActionViewFromString(view);
    if (out.view == ActionView::kContinuous && kind && !continuous) {
      r.Fail(p + ".view", fmt::format("{} cannot act on continuous actuators", out.kind));
    }
  } else {
    r.Fail(p + ".view", "must be discrete or continuous");
  }
  return {{"name", out.name},
          {"role", role},
          {"strategy", {{"kind", out.kind}, {"hyper", out.hyper}}},
          {"reward", {{"c", out.reward.c}, {"mu", out.reward.mu}, {"sigma", out.reward.sigma}}},
          {"sensors", out.sensors},
          {"actuators", out.actuators},
          {"workers", out.workers},
          {"view", view}};
}

json NormalizeExecution(Reader& r, const json& e, ExecutionPlan& out) {
  const std::string p = "execution";
  r.RejectUnknown(e, p, {"parallelism", "transport", "endpoints", "timeout_ms"});
  out.parallelism = r.Number<int>(e, p, "parallelism", out.parallelism);
  if (out.parallelism < 1) r.Fail(p + ".parallelism", "must be at least 1");
  out.transport = r.String(e, p, "transport", out.transport);
  if (out.transport != "loopback" && out.transport != "socket") r.Fail(p + ".transport", "must be loopback or socket");
  out.endpoints = r.Strings(e, p, "endpoints");
  const auto ms = r.Number<std::int64_t>(e, p, "timeout_ms", out.timeout.count());
  if (ms <= 0) r.Fail(p + ".timeout_ms", "must be positive");
  out.timeout = std::chrono::milliseconds(ms);
  return {{"parallelism", out.parallelism},
          {"transport", out.transport},
          {"endpoints", out.endpoints},
          {"timeout_ms", out.timeout.count()}};
}

std::vector<std::string> SplitPath(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : path) {
    if (ch == '.') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  return parts;
}

json* AgentNode(json& doc, const std::string& name) {
  for (auto& a : doc["agents"]) {
    if (a.value("name", "") == name) return &a;
  }
  return nullptr;
}

// Resolves an axis path to the json node it replaces. `parent_only` allows
// the final key to be absent (used for hyperparameters).
json* Resolve(json& doc, const std::vector<std::string>& parts, bool create) {
  json* node = &doc;
  std::size_t i = 0;
  if (parts.size() >= 2 && parts[0] == "agents") {
    node = AgentNode(doc, parts[1]);
    if (!node) return nullptr;
    i = 2;
  }
  for (; i < parts.size(); ++i) {
    if (!node->is_object()) return nullptr;
    if (!node->contains(parts[i])) {
      if (!create || i + 1 != parts.size()) return nullptr;
    }
    node = &(*node)[parts[i]];
  }
  return node;
}

}  // namespace

const AgentPlan& ExperimentPlan::agent(const std::string& agent_name) const {
  for (const auto& a : agents) {
    if (a.name == agent_name) return a;
  }
  throw ConfigError("no agent named '" + agent_name + "'");
}

PlanError::PlanError(std::vector<std::string> violations)
    : ValidationError("plan", violations.empty() ? std::string("invalid plan")
                                                 : fmt::format("{} violation(s), first: {}", violations.size(),
                                                               violations.front())),
      violations_(std::move(violations)) {}

std::optional<std::string> CheckAxisPath(const json& normalized, const std::string& path,
                                         const StrategyRegistry& registry) {
  const auto parts = SplitPath(path);
  auto bad = [&path](const std::string& why) { return std::optional<std::string>(fmt::format("axis '{}' {}", path, why)); };
  if (parts.size() < 2) return bad("does not name a plan field");
  json doc = normalized;
  if (parts[0] == "environment") {
    static const std::set<std::string> kTop = {"horizon", "rounds"};
    static const std::set<std::string> kNested = {"constraints", "power_flow"};
    const bool ok = (parts.size() == 2 && kTop.count(parts[1])) ||
                    (parts.size() == 3 && parts[1] == "grid" && parts[2] == "seed") ||
                    (parts.size() == 3 && kNested.count(parts[1]));
    if (!ok) return bad("does not name a sweepable environment field");
    if (parts[1] == "grid" && !doc["environment"]["grid"].contains("seed")) return bad("needs a seeded grid");
    if (!Resolve(doc, parts, false)) return bad("does not name a plan field");
    return std::nullopt;
  }
  if (parts[0] == "agents") {
    if (!AgentNode(doc, parts[1])) return bad(fmt::format("names no agent '{}'", parts[1]));
    const std::vector<std::string> rest(parts.begin() + 2, parts.end());
    if (rest.size() == 1 && rest[0] == "workers") return std::nullopt;
    if (rest.size() == 2 && rest[0] == "reward" && (rest[1] == "c" || rest[1] == "mu" || rest[1] == "sigma")) {
      return std::nullopt;
    }
    if (rest.size() == 1 && rest[0] == "strategy") return std::nullopt;
    if (rest.size() == 2 && rest[0] == "strategy" && rest[1] == "kind") return std::nullopt;
    if (rest.size() == 3 && rest[0] == "strategy" && rest[1] == "hyper") {
      const std::string kind = (*AgentNode(doc, parts[1]))["strategy"].value("kind", "");
      if (!registry.Has(kind)) return bad("belongs to an agent of unknown kind");
      const auto& keys = registry.Get(kind).hyper_keys;
      if (std::find(keys.begin(), keys.end(), rest[2]) == keys.end()) {
        return bad(fmt::format("is not a {} hyperparameter", kind));
      }
      return std::nullopt;
    }
    return bad("does not name a sweepable agent field");
  }
  return bad("does not name a plan field");
}

void ApplyAxis(json& normalized, const std::string& path, const json& value) {
  json* node = Resolve(normalized, SplitPath(path), true);
  if (!node) throw ConfigError("axis '" + path + "' does not resolve");
  *node = value;
}

PlanValidation ValidatePlan(const json& document, const std::string& base_dir, const StrategyRegistry& registry) {
  PlanValidation result;
  auto& v = result.violations;
  Reader r(v);
  if (!document.is_object()) {
    v.push_back("plan: must be an object");
    return result;
  }
  ExperimentPlan plan;
  r.RejectUnknown(document, "plan", {"schema_version", "name", "environment", "agents", "doe", "execution"});
  plan.schema_version = r.Number<int>(document, "plan", "schema_version", 0, true);
  if (document.contains("schema_version") && plan.schema_version != kPlanSchemaVersion) {
    r.Fail("plan.schema_version", fmt::format("unsupported version {} (expected {})", plan.schema_version,
                                              kPlanSchemaVersion));
  }
  plan.name = r.String(document, "plan", "name", "", true);
  if (document.contains("name") && plan.name.empty()) r.Fail("plan.name", "must not be empty");
  if (plan.name.find_first_of("/\\") != std::string::npos || plan.name == "." || plan.name == "..") {
    r.Fail("plan.name", "must be usable as a directory name");
  }

  json norm = json::object();
  norm["schema_version"] = kPlanSchemaVersion;
  norm["name"] = plan.name;
  const json* env = r.Field(document, "plan", "environment", true);
  norm["environment"] = env ? NormalizeEnvironment(r, *env, base_dir, plan.environment) : json::object();

  norm["agents"] = json::array();
  const json* agents = r.Field(document, "plan", "agents", true);
  if (agents && !agents->is_array()) r.Fail("plan.agents", "must be a list");
  if (agents && agents->is_array()) {
    std::set<std::string> names;
    for (std::size_t i = 0; i < agents->size(); ++i) {
      AgentPlan a;
      norm["agents"].push_back(NormalizeAgent(r, agents->at(i), fmt::format("agents[{}]", i), registry, a));
      if (!a.name.empty() && !names.insert(a.name).second) {
        r.Fail(fmt::format("agents[{}].name", i), fmt::format("duplicate agent name '{}'", a.name));
      }
      plan.agents.push_back(std::move(a));
    }
  }
  const auto count = [&](Role role) {
    return std::count_if(plan.agents.begin(), plan.agents.end(), [role](const AgentPlan& a) { return a.role == role; });
  };
  const auto declared = [&](const char* role) {
    return agents && agents->is_array() &&
           std::any_of(agents->begin(), agents->end(),
                       [role](const json& a) { return a.is_object() && a.value("role", "") == role; });
  };
  if (!declared("attacker") || count(Role::kAttacker) == 0) r.Fail("plan.agents", "needs at least one attacker");
  if (!declared("defender") || count(Role::kDefender) == 0) r.Fail("plan.agents", "needs at least one defender");

  json doe = json::object();
  if (const json* d = r.Field(document, "plan", "doe", false)) doe = *d;
  r.RejectUnknown(doe, "doe", {"axes", "seeds", "repetitions"});
  json norm_axes = json::object();
  if (const json* axes = r.Field(doe, "doe", "axes", false)) {
    if (!axes->is_object()) {
      r.Fail("doe.axes", "must map axis paths to value lists");
    } else {
      for (const auto& [path, values] : axes->items()) {
        if (!values.is_array() || values.empty()) {
          r.Fail("doe.axes." + path, "must be a non-empty list");
          continue;
        }
        if (auto problem = CheckAxisPath(norm, path, registry)) {
          r.Fail("doe.axes", *problem);
          continue;
        }
        plan.doe.axes.emplace_back(path, std::vector<json>(values.begin(), values.end()));
        norm_axes[path] = values;
      }
    }
  }
  const bool has_seeds = doe.contains("seeds");
  const bool has_reps = doe.contains("repetitions");
  if (has_seeds && has_reps) {
    r.Fail("doe", "give either seeds or repetitions, not both");
  } else if (has_seeds) {
    const json& s = doe.at("seeds");
    if (!s.is_array() || s.empty()) {
      r.Fail("doe.seeds", "must be a non-empty list of integers");
    } else {
      std::set<std::uint64_t> seen;
      for (const auto& e : s) {
        if (!e.is_number_integer() || (!e.is_number_unsigned() && e.get<std::int64_t>() < 0)) {
          r.Fail("doe.seeds", "must be a non-empty list of non-negative integers");
          break;
        }
        if (!seen.insert(e.get<std::uint64_t>()).second) r.Fail("doe.seeds", "seeds must be distinct");
        plan.doe.seeds.push_back(e.get<std::uint64_t>());
      }
    }
  } else {
    const int reps = r.Number<int>(doe, "doe", "repetitions", 1);
    if (reps < 1) r.Fail("doe.repetitions", "must be at least 1");
    for (int i = 1; i <= reps; ++i) plan.doe.seeds.push_back(static_cast<std::uint64_t>(i));
  }
  norm["doe"] = {{"axes", norm_axes}, {"seeds", plan.doe.seeds}};

  json exec = json::object();
  if (const json* e = r.Field(document, "plan", "execution", false)) exec = *e;
  norm["execution"] = NormalizeExecution(r, exec, plan.execution);

  // Axis values have to make sense for their field too.
  for (const auto& [path, values] : plan.doe.axes) {
    for (const auto& value : values) {
      json probe = norm;
      probe["doe"] = {{"axes", json::object()}, {"seeds", json::array({1})}};
      ApplyAxis(probe, path, value);
      std::vector<std::string> inner;
      Reader pr(inner);
      EnvironmentPlan e;
      NormalizeEnvironment(pr, probe["environment"], base_dir, e);
      for (std::size_t i = 0; i < probe["agents"].size(); ++i) {
        AgentPlan a;
        NormalizeAgent(pr, probe["agents"][i], fmt::format("agents[{}]", i), registry, a);
      }
      for (const auto& problem : inner) r.Fail("doe.axes." + path, fmt::format("value {}: {}", value.dump(), problem));
    }
  }

  if (v.empty()) {
    plan.document = std::move(norm);
    result.plan = std::move(plan);
  }
  return result;
}

ExperimentPlan ParsePlan(const json& document, const std::string& base_dir, const StrategyRegistry& registry) {
  PlanValidation v = ValidatePlan(document, base_dir, registry);
  if (!v.ok()) throw PlanError(std::move(v.violations));
  return std::move(*v.plan);
}

ExperimentPlan LoadPlan(const std::string& path, const StrategyRegistry& registry) {
  json doc;
  try {
    doc = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw PlanError({fmt::format("{}: not valid JSON ({})", path, e.what())});
  }
  const auto dir = std::filesystem::path(path).parent_path();
  return ParsePlan(doc, dir.empty() ? "." : dir.string(), registry);
}

GridEnvironmentConfig MakeEnvironmentConfig(const ExperimentPlan& plan) {
  GridEnvironmentConfig c;
  const auto& e = plan.environment;
  c.grid = e.grid_model ? *e.grid_model : GenerateSyntheticCityGrid(e.grid_seed);
  c.constraints = e.constraints;
  c.power_flow = e.power_flow;
  c.horizon = e.horizon;
  for (const auto& a : plan.agents) c.agents.push_back({a.name, a.role, a.sensors, a.actuators, a.view});
  return c;
}

}  // namespace arl
