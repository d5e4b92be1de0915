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

#include "safearm/harness/benchmark.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include "safearm/jrs/jrs.h"

namespace safearm::harness {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kSceneAttempts = 10;

std::string Stem(const std::string& path) { return fs::path(path).stem().string(); }

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Job {
  arm::ArmModel arm;
  std::string arm_name;
  Scene scene;
  int n_obs = 0;
  int index = 0;
};

json GroupSummary(const std::vector<const TrialRecord*>& group) {
  int goals = 0, crashes = 0, stopped = 0, iterations = 0;
  double mnpd = 0.0, solve = 0.0;
  for (const TrialRecord* t : group) {
    const Metrics& m = t->metrics;
    goals += m.goal_reached;
    crashes += m.crashed;
    stopped += m.safely_stopped;
    if (m.goal_reached) mnpd += m.normalized_path_distance;
    for (const auto& l : m.log) solve += l.total_time;
    iterations += static_cast<int>(m.log.size());
  }
  const int n = static_cast<int>(group.size());
  return {{"trials", n},
          {"goals", goals},
          {"crashes", crashes},
          {"safely_stopped", stopped},
          {"goal_rate", n ? static_cast<double>(goals) / n : 0.0},
          {"mnpd", goals ? mnpd / goals : 0.0},
          {"mst", iterations ? solve / iterations : 0.0}};
}

json Summarize(const BenchmarkConfig& config, const BenchmarkResult& r) {
  std::vector<double> times;
  int overruns = 0;
  for (const auto& t : r.trials) {
    for (const auto& l : t.metrics.log) {
      times.push_back(l.total_time);
      overruns += l.overrun;
    }
  }
  std::sort(times.begin(), times.end());
  const double t_plan = config.harness.planner.timing.t_plan;
  const auto within = std::upper_bound(times.begin(), times.end(), t_plan) - times.begin();
  double sum = 0.0;
  for (double t : times) sum += t;
  const auto quantile = [&](double q) {
    if (times.empty()) return 0.0;
    const size_t i = std::min(times.size() - 1, static_cast<size_t>(q * (times.size() - 1) + 0.5));
    return times[i];
  };

  std::map<std::pair<std::string, int>, std::vector<const TrialRecord*>> groups;
  std::vector<const TrialRecord*> all;
  for (const auto& t : r.trials) {
    groups[{t.arm, t.n_obs}].push_back(&t);
    all.push_back(&t);
  }
  json out = GroupSummary(all);
  out["master_seed"] = config.master_seed;
  out["iterations"] = times.size();
  out["overruns"] = overruns;
  out["iteration_time_mean"] = times.empty() ? 0.0 : sum / times.size();
  out["iteration_time_p95"] = quantile(0.95);
  out["iteration_time_max"] = times.empty() ? 0.0 : times.back();
  out["within_budget_fraction"] =
      times.empty() ? 1.0 : static_cast<double>(within) / times.size();
  json g = json::array();
  for (const auto& [key, members] : groups) {
    json e = GroupSummary(members);
    e["arm"] = key.first;
    e["n_obs"] = key.second;
    g.push_back(e);
  }
  out["groups"] = g;
  return out;
}

}  // namespace

std::uint64_t TrialSeed(std::uint64_t master_seed, int entry, int n_obs, int index,
                        int attempt) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(entry), static_cast<std::uint32_t>(n_obs),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(attempt)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

BenchmarkConfig BenchmarkConfigFromJson(const json& j, const std::string& base_path) {
  if (!j.is_object()) throw std::invalid_argument("benchmark config: expected an object");
  for (const auto& [key, value] : j.items()) {
    static const char* kKeys[] = {"harness", "master_seed", "matrix", "scenes",
                                  "scene_options", "description"};
    if (std::find_if(std::begin(kKeys), std::end(kKeys),
                     [&](const char* k) { return key == k; }) == std::end(kKeys)) {
      throw std::invalid_argument("benchmark config: unknown key '" + key + "'");
    }
  }
  BenchmarkConfig c;
  if (j.contains("harness")) {
    const json& h = j.at("harness");
    c.harness = h.is_string() ? LoadConfig(ResolveArmPath(h.get<std::string>(), base_path))
                              : ConfigFromJson(h);
  }
  c.master_seed = j.value("master_seed", std::uint64_t{1});
  for (const json& e : j.value("matrix", json::array())) {
    MatrixEntry m;
    m.arm = ResolveArmPath(e.at("arm").get<std::string>(), base_path);
    m.n_obs = e.at("n_obs").get<std::vector<int>>();
    m.scenes = e.value("scenes", 10);
    for (int n : m.n_obs) {
      if (n < 0) throw std::invalid_argument("benchmark config: negative n_obs");
    }
    if (m.scenes < 0) throw std::invalid_argument("benchmark config: negative scene count");
    c.matrix.push_back(m);
  }
  for (const json& s : j.value("scenes", json::array())) {
    c.scene_files.push_back(ResolveArmPath(s.get<std::string>(), base_path));
  }
  if (j.contains("scene_options")) {
    const json& o = j.at("scene_options");
    c.scene_options.base_clearance = o.value("base_clearance", c.scene_options.base_clearance);
    c.scene_options.min_side = o.value("min_side", c.scene_options.min_side);
    c.scene_options.max_side = o.value("max_side", c.scene_options.max_side);
    c.scene_options.max_rejections = o.value("max_rejections", c.scene_options.max_rejections);
    c.scene_options.min_goal_distance =
        o.value("min_goal_distance", c.scene_options.min_goal_distance);
  }
  return c;
}

BenchmarkConfig LoadBenchmarkConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open benchmark config " + path);
  return BenchmarkConfigFromJson(json::parse(in), path);
}

BenchmarkResult RunBenchmark(const BenchmarkConfig& config) {
  std::vector<Job> jobs;
  for (size_t e = 0; e < config.matrix.size(); ++e) {
    const MatrixEntry& entry = config.matrix[e];
    const arm::ArmModel arm = arm::LoadArm(entry.arm);
    for (int n_obs : entry.n_obs) {
      for (int i = 0; i < entry.scenes; ++i) {
        Job job{arm, Stem(entry.arm), {}, n_obs, i};
        for (int attempt = 0;; ++attempt) {
          try {
            job.scene = GenerateRandomScene(
                arm, n_obs, TrialSeed(config.master_seed, static_cast<int>(e), n_obs, i, attempt),
                config.scene_options);
            break;
          } catch (const SceneGenerationError&) {
            if (attempt + 1 >= kSceneAttempts) throw;
          }
        }
        job.scene.name = job.arm_name + "-n" + std::to_string(n_obs) + "-" + std::to_string(i);
        jobs.push_back(std::move(job));
      }
    }
  }
  for (size_t s = 0; s < config.scene_files.size(); ++s) {
    const std::string& path = config.scene_files[s];
    Scene scene = LoadScene(path);
    const std::string arm_path = ResolveArmPath(scene.arm_file, path);
    if (scene.name.empty()) scene.name = Stem(path);
    const int n_obs = static_cast<int>(scene.obstacles.size());
    jobs.push_back({arm::LoadArm(arm_path), Stem(arm_path), std::move(scene), n_obs,
                    static_cast<int>(s)});
  }

  const jrs::JrsBank bank = jrs::BuildBank(config.harness.bank, 0, 1);
  BenchmarkResult result;
  result.trials.resize(jobs.size());
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (size_t k = next++; k < jobs.size(); k = next++) {
      try {
        const Job& job = jobs[k];
        HarnessConfig hc = config.harness;
        hc.planner.solver.rng_seed = job.scene.seed;
        result.trials[k] = {job.arm_name, job.scene.name, job.n_obs, job.index, job.scene.seed,
                            RunTrial(job.arm, job.scene, bank, hc)};
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(config.harness.threads, jobs.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (const auto& t : result.trials) result.crashes += t.metrics.crashed;
  result.summary = Summarize(config, result);
  return result;
}

void WriteResultsCsv(const BenchmarkResult& result, std::ostream& out) {
  out << "arm,scene,n_obs,scene_index,seed,outcome,goal_reached,crashed,safely_stopped,"
         "iterations,feasible_iterations,path_length,mnpd,final_speed\n";
  for (const auto& t : result.trials) {
    const Metrics& m = t.metrics;
    out << t.arm << ',' << t.scene << ',' << t.n_obs << ',' << t.scene_index << ',' << t.seed
        << ',' << m.outcome() << ',' << m.goal_reached << ',' << m.crashed << ','
        << m.safely_stopped << ',' << m.iterations << ',' << m.feasible_iterations << ','
        << FormatDouble(m.path_length) << ',' << FormatDouble(m.normalized_path_distance) << ','
        << FormatDouble(m.final_speed) << '\n';
  }
}

void WriteIterationsCsv(const BenchmarkResult& result, std::ostream& out) {
  out << "scene,iteration,status,adopted,overrun,num_constraints,compose_time,"
         "constraint_time,solve_time,total_time\n";
  for (const auto& t : result.trials) {
    for (const auto& l : t.metrics.log) {
      out << t.scene << ',' << l.iteration << ',' << opt::ToString(l.status) << ','
          << l.adopted << ',' << l.overrun << ',' << l.num_constraints << ','
          << FormatDouble(l.compose_time) << ',' << FormatDouble(l.constraint_time) << ','
          << FormatDouble(l.solve_time) << ',' << FormatDouble(l.total_time) << '\n';
    }
  }
}

void WriteBenchmarkOutputs(const BenchmarkResult& result, const std::string& dir) {
  fs::create_directories(dir);
  const fs::path d(dir);
  std::ofstream results(d / "results.csv");
  WriteResultsCsv(result, results);
  std::ofstream iterations(d / "iterations.csv");
  WriteIterationsCsv(result, iterations);
  std::ofstream summary(d / "summary.json");
  summary << std::setw(2) << result.summary << '\n';
  if (!results || !iterations || !summary) {
    throw std::runtime_error("failed writing benchmark outputs to " + dir);
  }
}

}  // namespace safearm::harness
