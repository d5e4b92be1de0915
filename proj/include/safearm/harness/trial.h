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

#ifndef SAFEARM_HARNESS_TRIAL_H_
#define SAFEARM_HARNESS_TRIAL_H_

#include <ostream>
#include <string>
#include <vector>

#include "safearm/arm/arm_model.h"
#include "safearm/harness/config.h"
#include "safearm/harness/oracle.h"
#include "safearm/harness/scene.h"
#include "safearm/jrs/jrs.h"
#include "safearm/planner/planner.h"

namespace safearm::harness {

// A stretch of simulation time during which one plan executed.
struct ExecutedSegment {
  planner::Plan plan;
  double sim_start = 0.0;
  double exec_start = 0.0;  // time into the plan at sim_start
  double duration = 0.0;
  // Whether the iteration that ended this segment produced a new plan.
  bool feasible = false;
};

struct Metrics {
  bool goal_reached = false;
  bool crashed = false;
  bool safely_stopped = false;
  int iterations = 0;
  int feasible_iterations = 0;
  int overruns = 0;
  double mean_solve_time = 0.0;
  double path_length = 0.0;
  double normalized_path_distance = 0.0;
  double final_speed = 0.0;
  double sim_time = 0.0;
  OracleReport oracle;
  std::vector<planner::IterationLog> log;
  std::vector<ExecutedSegment> segments;

  std::string outcome() const;
};

Metrics RunTrial(const arm::ArmModel& arm, const Scene& scene, const jrs::JrsBank& bank,
                 const HarnessConfig& config);

// Executed states every dt from 0 to the end of the trial.
struct TrackSample {
  double t = 0.0;
  Eigen::VectorXd q;
  Eigen::VectorXd dq;
  int plan_id = 0;
  bool feasible = false;
};

std::vector<TrackSample> SampleTrack(const Metrics& m, double dt);

// Columns: t, q_1..q_n, dq_1..dq_n, plan_id, feasible_flag.
void WriteTrackCsv(const std::vector<TrackSample>& track, std::ostream& out);

}  // namespace safearm::harness

#endif  // SAFEARM_HARNESS_TRIAL_H_
