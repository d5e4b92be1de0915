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

// Scene-matrix benchmark: random scenes per (arm, obstacle count) plus
// optional fixed scene files, each run as one trial.

#ifndef SAFEARM_HARNESS_BENCHMARK_H_
#define SAFEARM_HARNESS_BENCHMARK_H_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "safearm/harness/config.h"
#include "safearm/harness/scene.h"
#include "safearm/harness/trial.h"

namespace safearm::harness {

struct MatrixEntry {
  std::string arm;  // arm file path
  std::vector<int> n_obs;
  int scenes = 10;
};

struct BenchmarkConfig {
  HarnessConfig harness = DefaultConfig();
  std::uint64_t master_seed = 1;
  std::vector<MatrixEntry> matrix;
  std::vector<std::string> scene_files;
  SceneOptions scene_options;
};

// Arm and scene paths are resolved against the file's directory and its
// parent. The "harness" member holds an inline config object or a path.
BenchmarkConfig BenchmarkConfigFromJson(const nlohmann::json& j, const std::string& base_path);
BenchmarkConfig LoadBenchmarkConfig(const std::string& path);

// Seed of one random scene; stable across platforms.
std::uint64_t TrialSeed(std::uint64_t master_seed, int entry, int n_obs, int index,
                        int attempt = 0);

struct TrialRecord {
  std::string arm;    // arm file stem
  std::string scene;  // scene name
  int n_obs = 0;
  int scene_index = 0;
  std::uint64_t seed = 0;
  Metrics metrics;
};

struct BenchmarkResult {
  std::vector<TrialRecord> trials;
  int crashes = 0;
  nlohmann::json summary;
};

BenchmarkResult RunBenchmark(const BenchmarkConfig& config);

// Deterministic per-trial table; no wall-clock columns.
void WriteResultsCsv(const BenchmarkResult& result, std::ostream& out);
// Per-iteration timing table.
void WriteIterationsCsv(const BenchmarkResult& result, std::ostream& out);
// Writes results.csv, iterations.csv and summary.json into dir.
void WriteBenchmarkOutputs(const BenchmarkResult& result, const std::string& dir);

}  // namespace safearm::harness

#endif  // SAFEARM_HARNESS_BENCHMARK_H_
