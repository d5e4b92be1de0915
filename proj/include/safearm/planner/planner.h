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

// Receding-horizon loop. Plans are adopted at multiples of t_plan; when no
// new plan verifies, the executing plan keeps running into its braking tail.

#ifndef SAFEARM_PLANNER_PLANNER_H_
#define SAFEARM_PLANNER_PLANNER_H_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "safearm/arm/arm_model.h"
#include "safearm/constraints/constraints.h"
#include "safearm/geom/zonotope.h"
#include "safearm/jrs/jrs.h"
#include "safearm/opt/optimizer.h"
#include "safearm/rs/compose.h"
#include "safearm/traj/trajectory.h"

namespace safearm::planner {

struct Plan {
  traj::TrajParam k;
  Eigen::VectorXd q0;
  traj::TimingConfig timing;
  double created_at = 0.0;  // simulation time of adoption
  int id = 0;

  // State at time t into the plan, clamped to [0, t_f].
  traj::TrajState At(double t) const;
  Eigen::VectorXd dq0() const { return k.k_v; }
};

// Plan that holds q forever.
Plan RestPlan(const Eigen::VectorXd& q, const traj::TimingConfig& timing,
              double created_at = 0.0, int id = 0);

struct IterationLog {
  int iteration = 0;
  double sim_time = 0.0;  // handoff instant the iteration plans for
  opt::OptStatus status = opt::OptStatus::kInfeasibleTimeout;
  bool adopted = false;
  bool overrun = false;
  bool from_rest = false;
  int plan_id = -1;
  int num_constraints = 0;
  double hlp_time = 0.0;
  double compose_time = 0.0;
  double constraint_time = 0.0;
  double solve_time = 0.0;  // optimize + verify
  double total_time = 0.0;
};

struct PlannerState {
  Plan current_plan;
  double exec_time = 0.0;
  bool stopped = true;
  double sim_time = 0.0;
  int next_plan_id = 1;
  int iterations = 0;
  std::vector<IterationLog> history;

  traj::TrajState Current() const { return current_plan.At(exec_time); }
};

PlannerState InitialState(const Eigen::VectorXd& q_start, const traj::TimingConfig& timing);

// State of the executing plan t_plan ahead (clamped to t_f); (q, 0) when
// stopped.
traj::TrajState PredictInitialCondition(const PlannerState& state);

// Advances execution by sim_dt; marks the state stopped once the braking
// tail completes.
PlannerState StepExecution(PlannerState state, double sim_dt);

class HighLevelPlanner {
 public:
  virtual ~HighLevelPlanner() = default;
  virtual Eigen::VectorXd Waypoint(const Eigen::VectorXd& q, const Eigen::VectorXd& goal,
                                   const std::vector<geom::Zonotope>& obstacles) const = 0;
};

// Waypoints along the straight line to the goal, at most `step` (2-norm)
// ahead of the current configuration.
class StraightLineHlp : public HighLevelPlanner {
 public:
  explicit StraightLineHlp(double step = 0.35) : step_(step) {}
  Eigen::VectorXd Waypoint(const Eigen::VectorXd& q, const Eigen::VectorXd& goal,
                           const std::vector<geom::Zonotope>& obstacles) const override;

 private:
  double step_;
};

struct PlannerConfig {
  traj::TimingConfig timing;
  rs::ComposeOptions compose;
  constraints::ConstraintOptions constraints;
  opt::SolverOptions solver;
  double hlp_step = 0.35;
  double goal_tolerance = 0.05;
  int stagnation_iterations = 20;
  double progress_tolerance = 1e-3;
  // Moving without improving the best goal distance for this many
  // iterations ends the trial as well.
  int livelock_iterations = 40;
  int max_iterations = 400;
  // Extra iterations spent closing in once the goal tolerance is met.
  double settle_tolerance = 1e-4;
  int settle_iterations = 10;
  // Overruns of t_plan count as infeasible.
  bool strict_real_time = false;
  // Keep executing the current plan when its rest position is at least as
  // close to the waypoint as the new plan's.
  bool keep_better_plan = true;
  // Fixed optimizer budget instead of the t_plan remainder.
  std::optional<double> budget_override;
};

struct PlanOutcome {
  opt::OptStatus status = opt::OptStatus::kInfeasibleTimeout;
  std::optional<Plan> plan;  // adopted at the next handoff when present
  IterationLog log;
};

// One planning iteration for the handoff t_plan ahead of the current
// execution point.
PlanOutcome MakePlan(const PlannerState& state, const arm::ArmModel& arm,
                     const std::vector<geom::Zonotope>& obstacles,
                     const Eigen::VectorXd& goal, const HighLevelPlanner& hlp,
                     const jrs::JrsBank& bank, const PlannerConfig& config);

// Executes t_plan of the current plan, then adopts the outcome's plan if any.
PlannerState Handoff(PlannerState state, const PlanOutcome& outcome);

}  // namespace safearm::planner

#endif  // SAFEARM_PLANNER_PLANNER_H_
