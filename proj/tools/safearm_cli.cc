// Copyright 2026 The safearm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: bank building, scene generation, single plans and
// benchmarks.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "safearm/harness/benchmark.h"
#include "safearm/harness/config.h"
#include "safearm/harness/scene.h"
#include "safearm/harness/trial.h"
#include "safearm/jrs/jrs.h"

namespace {

using namespace safearm;
using nlohmann::json;

harness::HarnessConfig ConfigOrDefault(const std::string& path) {
  return path.empty() ? harness::DefaultConfig() : harness::LoadConfig(path);
}

int JrsBuild(const std::string& config_path, const std::string& out, int validate, int threads) {
  const harness::HarnessConfig c = ConfigOrDefault(config_path);
  const jrs::JrsBank bank = jrs::BuildBank(c.bank, validate, threads);
  jrs::SaveBank(bank, out);
  std::cout << "wrote " << bank.sequences.size() << " sequences to " << out << "\n";
  return 0;
}

int JrsValidate(const std::string& bank_path, int samples, std::uint64_t seed) {
  const jrs::JrsBank bank = jrs::LoadBank(bank_path);
  std::int64_t total = 0, violations = 0;
  double worst = -1.0;
  for (size_t i = 0; i < bank.sequences.size(); ++i) {
    const jrs::ContainmentReport r = jrs::ValidateContainment(bank.sequences[i], samples, seed + i);
    total += r.samples;
    violations += r.violations;
    worst = std::max(worst, r.max_margin);
    if (r.violations > 0) {
      std::cout << "sequence " << i << ": " << r.violations << " violations\n";
    }
  }
  std::cout << json{{"sequences", bank.sequences.size()},
                    {"samples", total},
                    {"violations", violations},
                    {"max_margin", worst}}
                   .dump()
            << "\n";
  return violations == 0 ? 0 : 1;
}

int Plan(const std::string& arm_path, const std::string& scene_path, const std::string& bank_path,
         const std::string& config_path, const std::string& out, double dt) {
  harness::HarnessConfig c = ConfigOrDefault(config_path);
  const harness::Scene scene = harness::LoadScene(scene_path);
  const arm::ArmModel arm = arm::LoadArm(
      arm_path.empty() ? harness::ResolveArmPath(scene.arm_file, scene_path) : arm_path);
  const jrs::JrsBank bank =
      bank_path.empty() ? jrs::BuildBank(c.bank, 0, c.threads) : jrs::LoadBank(bank_path);
  c.planner.constraints.num_threads = c.threads;
  c.planner.compose.num_threads = c.threads;
  const harness::Metrics m = harness::RunTrial(arm, scene, bank, c);
  if (!out.empty()) {
    std::ofstream f(out);
    harness::WriteTrackCsv(harness::SampleTrack(m, dt), f);
    if (!f) throw std::runtime_error("failed writing " + out);
  }
  json j{{"scene", scene.name},
         {"outcome", m.outcome()},
         {"iterations", m.iterations},
         {"feasible_iterations", m.feasible_iterations},
         {"overruns", m.overruns},
         {"mean_solve_time", m.mean_solve_time},
         {"path_length", m.path_length},
         {"mnpd", m.normalized_path_distance},
         {"final_speed", m.final_speed},
         {"sim_time", m.sim_time}};
  if (m.crashed) j["oracle"] = m.oracle.ToString();
  std::cout << std::setw(2) << j << "\n";
  return m.crashed ? 2 : 0;
}

int Bench(const std::string& config_path, const std::string& out, int threads) {
  harness::BenchmarkConfig c = harness::LoadBenchmarkConfig(config_path);
  if (threads > 0) c.harness.threads = threads;
  const harness::BenchmarkResult r = harness::RunBenchmark(c);
  harness::WriteBenchmarkOutputs(r, out);
  std::cout << std::setw(2) << r.summary << "\n";
  return r.crashes == 0 ? 0 : 1;
}

int SceneGen(const std::string& arm_path, int n_obs, std::uint64_t seed, const std::string& out) {
  const arm::ArmModel arm = arm::LoadArm(arm_path);
  harness::Scene s = harness::GenerateRandomScene(arm, n_obs, seed);
  s.arm_file = arm_path;
  if (out.empty()) {
    std::cout << std::setw(2) << harness::ToJson(s) << "\n";
  } else {
    harness::SaveScene(s, out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"safearm: reachability-based safe arm trajectory planning"};
  app.require_subcommand(1);

  auto* jrs_cmd = app.add_subcommand("jrs", "joint reachable set bank");
  jrs_cmd->require_subcommand(1);
  std::string config, out, bank, arm_path, scene;
  int validate = 0, threads = 0, samples = 1000, n_obs = 0;
  std::uint64_t seed = 1;
  double dt = 0.01;

  auto* build = jrs_cmd->add_subcommand("build", "compute and save a bank");
  build->add_option("--config", config, "planner config (defaults when omitted)");
  build->add_option("--out", out, "bank file")->required();
  build->add_option("--validate", validate, "containment samples per sequence");
  build->add_option("--threads", threads, "worker threads (0 = hardware)");

  auto* val = jrs_cmd->add_subcommand("validate", "Monte Carlo containment check");
  val->add_option("--bank", bank, "bank file")->required()->check(CLI::ExistingFile);
  val->add_option("--samples", samples, "samples per sequence");
  val->add_option("--seed", seed, "sampling seed");

  auto* plan = app.add_subcommand("plan", "run one scene and log the trajectory");
  plan->add_option("--arm", arm_path, "arm file (defaults to the scene's)");
  plan->add_option("--scene", scene, "scene file")->required()->check(CLI::ExistingFile);
  plan->add_option("--bank", bank, "bank file (built in memory when omitted)");
  plan->add_option("--config", config, "planner config");
  plan->add_option("--out", out, "trajectory CSV");
  plan->add_option("--dt", dt, "CSV sample period [s]");

  auto* bench = app.add_subcommand("bench", "run a scene matrix");
  bench->add_option("--config", config, "benchmark config")->required();
  bench->add_option("--out", out, "output directory")->required();
  bench->add_option("--threads", threads, "trial worker threads");

  auto* scene_cmd = app.add_subcommand("scene", "scenes");
  scene_cmd->require_subcommand(1);
  auto* gen = scene_cmd->add_subcommand("gen", "generate a random scene");
  gen->add_option("--arm", arm_path, "arm file")->required()->check(CLI::ExistingFile);
  gen->add_option("--n-obs", n_obs, "obstacle count")->required()->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", seed, "scene seed");
  gen->add_option("--out", out, "scene file (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (build->parsed()) return JrsBuild(config, out, validate, threads);
    if (val->parsed()) return JrsValidate(bank, samples, seed);
    if (plan->parsed()) return Plan(arm_path, scene, bank, config, out, dt);
    if (bench->parsed()) return Bench(config, out, threads);
    if (gen->parsed()) return SceneGen(arm_path, n_obs, seed, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
