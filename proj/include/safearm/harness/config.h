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

// JSON configuration shared by the CLI and the benchmark. Numeric fields
// accept plain numbers or expressions such as "pi/24".

#ifndef SAFEARM_HARNESS_CONFIG_H_
#define SAFEARM_HARNESS_CONFIG_H_

#include <string>

#include <nlohmann/json.hpp>

#include "safearm/harness/oracle.h"
#include "safearm/jrs/jrs.h"
#include "safearm/planner/planner.h"

namespace safearm::harness {

struct HarnessConfig {
  jrs::BankParams bank;
  planner::PlannerConfig planner;
  double oracle_dt = kOracleDt;
  // Worker threads for trials (benchmark) or RS cells (single plans).
  int threads = 1;
};

// Defaults: t_plan 0.5, t_f 1, dt 0.01, 400 bank entries, dq_lim pi,
// ddq_lim pi/3, r_a1 1/3, r_a2 pi/24.
HarnessConfig DefaultConfig();

// Missing keys keep their defaults; unknown top-level keys are rejected.
HarnessConfig ConfigFromJson(const nlohmann::json& j);
HarnessConfig LoadConfig(const std::string& path);
nlohmann::json ToJson(const HarnessConfig& c);

}  // namespace safearm::harness

#endif  // SAFEARM_HARNESS_CONFIG_H_
