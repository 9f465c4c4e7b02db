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

// Operator entry point: validate, generate, run, report, dump-grid.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "arl/error.h"
#include "arl/executor.h"
#include "arl/generator.h"
#include "arl/grid.h"
#include "arl/plan.h"
#include "arl/report.h"
#include "arl/run_store.h"
#include "arl/synthetic_grid.h"
#include "arl/transport.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitExecution = 3;
constexpr int kExitIo = 4;

const char* kStoreRootEnv = "ARL_STORE_ROOT";

// One JSON object per line on stderr.
void ErrorLine(const std::string& cls, const std::string& message, const std::string& subject = "") {
  nlohmann::json j{{"level", "error"}, {"class", cls}, {"message", message}};
  if (!subject.empty()) j["subject"] = subject;
  std::cerr << j.dump() << '\n';
}

class ExitError : public std::runtime_error {
 public:
  ExitError(int code, std::string cls, const std::string& message)
      : std::runtime_error(message), code_(code), cls_(std::move(cls)) {}
  int code() const { return code_; }
  const std::string& cls() const { return cls_; }

 private:
  int code_;
  std::string cls_;
};

struct Options {
  std::string plan;
  std::string out;
  int parallelism = 0;
  std::string transport;
  std::vector<std::string> endpoints;
  std::optional<std::uint64_t> seed_override;
  std::uint64_t grid_seed = 1;
  std::string from;
};

std::string OutDir(const Options& o) {
  if (!o.out.empty()) return o.out;
  if (const char* env = std::getenv(kStoreRootEnv); env && *env) return env;
  throw ExitError(kExitValidation, "usage", fmt::format("--out is required (or set {})", kStoreRootEnv));
}

arl::ExperimentPlan Load(const Options& o) {
  arl::ExperimentPlan plan = arl::LoadPlan(o.plan);
  if (o.seed_override) plan.doe.seeds = {*o.seed_override};
  return plan;
}

int Validate(const Options& o) {
  std::ifstream in(o.plan, std::ios::binary);
  if (!in) throw arl::IoError("cannot read " + o.plan);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    ErrorLine("validation", e.what(), o.plan);
    return kExitValidation;
  }
  const auto dir = fs::path(o.plan).parent_path();
  const arl::PlanValidation v = arl::ValidatePlan(doc, dir.empty() ? "." : dir.string());
  for (const auto& problem : v.violations) ErrorLine("validation", problem, o.plan);
  if (!v.ok()) return kExitValidation;
  spdlog::info("plan '{}' is valid: {} agent(s), {} axis/axes, {} seed(s)", v.plan->name, v.plan->agents.size(),
               v.plan->doe.axes.size(), v.plan->doe.seeds.size());
  return kExitOk;
}

int Generate(const Options& o) {
  const arl::ExperimentPlan plan = Load(o);
  const auto runs = arl::GenerateRuns(plan);
  arl::FileRunStore store(OutDir(o));
  store.WriteIndex(plan.name, arl::MakeIndex(plan.name, runs));
  spdlog::info("wrote {}", (store.root() / plan.name / "index.json").string());
  std::cout << runs.size() << '\n';
  return kExitOk;
}

int Run(const Options& o) {
  const arl::ExperimentPlan plan = Load(o);
  arl::ExecutorOptions exec;
  exec.parallelism = o.parallelism > 0 ? o.parallelism : plan.execution.parallelism;
  exec.transport = o.transport.empty() ? plan.execution.transport : o.transport;
  exec.governor.endpoints = o.endpoints.empty() ? plan.execution.endpoints : o.endpoints;
  exec.governor.timeout = plan.execution.timeout;
  if (exec.transport == "socket" && exec.governor.endpoints.empty()) {
    throw ExitError(kExitValidation, "usage", "socket transport needs at least one --endpoint");
  }
  const auto runs = arl::GenerateRuns(plan);
  arl::FileRunStore store(OutDir(o));
  store.WriteIndex(plan.name, arl::MakeIndex(plan.name, runs));
  std::mutex progress_mu;
  std::size_t done = 0;
  exec.on_done = [&](const arl::RunResult& r) {
    std::lock_guard<std::mutex> lock(progress_mu);
    ++done;
    if (r.status == "completed") {
      spdlog::info("[{}/{}] run {} completed", done, runs.size(), r.run_id);
    } else {
      spdlog::error("[{}/{}] run {} {}: {}", done, runs.size(), r.run_id, r.status, r.error);
    }
  };
  spdlog::info("executing {} run(s) of '{}' over {} with parallelism {}", runs.size(), plan.name, exec.transport,
               exec.parallelism);
  const auto results = arl::Execute(runs, store, exec);
  store.WriteIndex(plan.name, arl::MakeIndex(plan.name, runs, results));
  int failed = 0;
  for (const auto& r : results) {
    if (r.status != "completed") {
      ++failed;
      ErrorLine(r.status == "integrity_error" ? "integrity" : "execution", r.error, r.run_id);
    }
  }
  return failed == 0 ? kExitOk : kExitExecution;
}

int Report(const Options& o) {
  const arl::ExperimentPlan plan = arl::LoadPlan(o.plan);
  arl::FileRunStore store(OutDir(o));
  arl::Report report;
  try {
    report = arl::BuildReport(store.Completed(plan.name));
  } catch (const arl::ValidationError& e) {
    throw ExitError(kExitExecution, "execution", e.what());
  }
  const fs::path dir = store.root() / plan.name / "report";
  arl::WriteReport(report, dir);
  spdlog::info("report over {} run(s) written to {}", report.runs, dir.string());
  return kExitOk;
}

int DumpGrid(const Options& o) {
  arl::GridModel model;
  if (!o.from.empty()) {
    std::ifstream in(o.from, std::ios::binary);
    if (!in) throw arl::IoError("cannot read " + o.from);
    try {
      model = arl::GridFromJson(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
      throw ExitError(kExitValidation, "validation", e.what());
    }
  } else {
    model = arl::GenerateSyntheticCityGrid(o.grid_seed);
  }
  const std::string text = arl::GridToJson(model).dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(o.out, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text)) throw arl::IoError("cannot write " + o.out);
    spdlog::info("wrote {}", o.out);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("arl");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("%^%l%$ %v");

  CLI::App app{"Adversarial resilience learning experiments on a simulated power grid"};
  app.require_subcommand(1);
  Options o;

  auto add_plan = [&o](CLI::App* c) { c->add_option("--plan", o.plan, "Experiment plan (JSON)")->required(); };
  auto add_out = [&o](CLI::App* c) {
    c->add_option("--out", o.out, fmt::format("Store root directory (default: ${})", kStoreRootEnv));
  };
  auto add_seed = [&o](CLI::App* c) {
    c->add_option("--seed-override", o.seed_override, "Replace the plan's seed list with this one seed");
  };

  auto* validate = app.add_subcommand("validate", "Check a plan and list every violation");
  add_plan(validate);

  auto* generate = app.add_subcommand("generate", "Expand a plan into run descriptors and print their count");
  add_plan(generate);
  add_out(generate);
  add_seed(generate);

  auto* run = app.add_subcommand("run", "Execute every run of a plan and persist the records");
  add_plan(run);
  add_out(run);
  add_seed(run);
  run->add_option("--parallelism", o.parallelism, "Concurrent governors (default: from the plan)")
      ->check(CLI::PositiveNumber);
  run->add_option("--transport", o.transport, "Message transport")->check(CLI::IsMember({"loopback", "socket"}));
  run->add_option("--endpoint", o.endpoints, "Socket bind address host[:port], repeatable");

  auto* report = app.add_subcommand("report", "Aggregate completed runs into CSV tables");
  add_plan(report);
  add_out(report);

  auto* dump = app.add_subcommand("dump-grid", "Write the synthetic grid for a seed, or re-serialize a grid file");
  dump->add_option("--seed", o.grid_seed, "Synthetic grid seed");
  dump->add_option("--from", o.from, "Grid document to reload");
  dump->add_option("--out", o.out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    ErrorLine("usage", e.what());
    return kExitValidation;
  }

  try {
    if (*validate) return Validate(o);
    if (*generate) return Generate(o);
    if (*run) return Run(o);
    if (*report) return Report(o);
    if (*dump) return DumpGrid(o);
  } catch (const ExitError& e) {
    ErrorLine(e.cls(), e.what());
    return e.code();
  } catch (const arl::PlanError& e) {
    for (const auto& v : e.violations()) ErrorLine("validation", v, o.plan);
    return kExitValidation;
  } catch (const arl::IoError& e) {
    ErrorLine("io", e.what());
    return kExitIo;
  } catch (const arl::ValidationError& e) {
    ErrorLine("validation", e.what(), e.subject());
    return kExitValidation;
  } catch (const arl::ConfigError& e) {
    ErrorLine("validation", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    ErrorLine("execution", e.what());
    return kExitExecution;
  }
  return kExitOk;
}
