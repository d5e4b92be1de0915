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

#include "safearm/planner/planner.h"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace safearm::planner {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

}  // namespace

traj::TrajState Plan::At(double t) const {
  return traj::EvalTrajectory(k, q0, std::clamp(t, 0.0, timing.t_f), timing);
}

Plan RestPlan(const Eigen::VectorXd& q, const traj::TimingConfig& timing, double created_at,
              int id) {
  Plan p;
  p.k.k_v = Eigen::VectorXd::Zero(q.size());
  p.k.k_a = Eigen::VectorXd::Zero(q.size());
  p.q0 = q;
  p.timing = timing;
  p.created_at = created_at;
  p.id = id;
  return p;
}

PlannerState InitialState(const Eigen::VectorXd& q_start, const traj::TimingConfig& timing) {
  timing.Validate();
  PlannerState s;
  s.current_plan = RestPlan(q_start, timing);
  s.exec_time = timing.t_f;
  s.stopped = true;
  return s;
}

traj::TrajState PredictInitialCondition(const PlannerState& state) {
  const auto& tc = state.current_plan.timing;
  if (state.stopped) {
    traj::TrajState s = state.Current();
    s.dq.setZero();
    return s;
  }
  return state.current_plan.At(std::min(state.exec_time + tc.t_plan, tc.t_f));
}

PlannerState StepExecution(PlannerState state, double sim_dt) {
  if (!(sim_dt > 0.0)) throw std::invalid_argument("StepExecution: sim_dt must be > 0");
  const double t_f = state.current_plan.timing.t_f;
  state.exec_time = std::min(state.exec_time + sim_dt, t_f);
  state.sim_time += sim_dt;
  if (state.exec_time >= t_f) state.stopped = true;
  return state;
}

Eigen::VectorXd StraightLineHlp::Waypoint(const Eigen::VectorXd& q, const Eigen::VectorXd& goal,
                                          const std::vector<geom::Zonotope>&) const {
  const Eigen::VectorXd d = goal - q;
  const double n = d.norm();
  if (n <= step_) return goal;
  return q + d * (step_ / n);
}

PlanOutcome MakePlan(const PlannerState& state, const arm::ArmModel& arm,
                     const std::vector<geom::Zonotope>& obstacles,
                     const Eigen::VectorXd& goal, const HighLevelPlanner& hlp,
                     const jrs::JrsBank& bank, const PlannerConfig& config) {
  if (goal.size() != arm.n_q() || state.current_plan.q0.size() != arm.n_q()) {
    throw std::invalid_argument("MakePlan: scene and arm disagree on joint count");
  }
  for (const auto& o : obstacles) {
    if (o.dim() != 3) throw std::invalid_argument("MakePlan: obstacles must be 3-D");
  }
  if (!(bank.params.timing == config.timing)) {
    throw std::invalid_argument("MakePlan: bank timing differs from planner timing");
  }
  const double t_plan = config.timing.t_plan;
  PlanOutcome out;
  IterationLog& log = out.log;
  log.iteration = state.iterations;
  log.sim_time = state.sim_time + t_plan;
  log.from_rest = state.stopped;

  const auto t0 = Clock::now();
  const traj::TrajState init = PredictInitialCondition(state);
  const Eigen::VectorXd q_des = hlp.Waypoint(init.q, goal, obstacles);
  const auto t1 = Clock::now();
  const rs::ComposedRS rs = rs::ComposeRS(arm, init.q, init.dq, bank, config.compose);
  const auto t2 = Clock::now();
  const constraints::ConstraintSet cs =
      constraints::BuildConstraints(rs, arm, obstacles, config.constraints);
  const auto t3 = Clock::now();
  log.num_constraints = cs.size();

  // Deterministic runs must not depend on how long composition took.
  double budget = config.solver.deterministic ? t_plan : t_plan - Seconds(t0, t3);
  if (config.budget_override) budget = *config.budget_override;
  opt::SolverOptions solver = config.solver;
  const std::uint64_t seed = solver.rng_seed + static_cast<std::uint64_t>(state.iterations);
  const auto seeds = opt::DefaultSeeds(cs, init.dq, t_plan, solver.n_rand, seed);
  const opt::OptResult res =
      opt::OptTraj(opt::GoalCost(init.q, init.dq, q_des, config.timing), cs, budget, seeds,
                   solver);
  const auto t4 = Clock::now();

  log.hlp_time = Seconds(t0, t1);
  log.compose_time = Seconds(t1, t2);
  log.constraint_time = Seconds(t2, t3);
  log.solve_time = Seconds(t3, t4);
  log.total_time = Seconds(t0, t4);
  log.overrun = log.total_time > t_plan;
  log.status = res.status;
  if (config.strict_real_time && log.overrun) log.status = opt::OptStatus::kInfeasibleTimeout;
  out.status = log.status;

  bool adopt = out.status == opt::OptStatus::kFeasible;
  if (adopt && config.keep_better_plan && !state.stopped) {
    const Eigen::VectorXd rest = state.current_plan.At(config.timing.t_f).q;
    adopt = (rest - q_des).squaredNorm() > res.cost;
  }
  if (adopt) {
    Plan p;
    p.k.k_v = init.dq;
    p.k.k_a = res.k_a;
    p.q0 = init.q;
    p.timing = config.timing;
    p.created_at = log.sim_time;
    p.id = state.next_plan_id;
    out.plan = p;
    log.adopted = true;
    log.plan_id = p.id;
  }
  return out;
}

PlannerState Handoff(PlannerState state, const PlanOutcome& outcome) {
  const double t_plan = state.current_plan.timing.t_plan;
  state = StepExecution(std::move(state), t_plan);
  if (outcome.plan) {
    state.current_plan = *outcome.plan;
    state.current_plan.created_at = state.sim_time;
    state.exec_time = 0.0;
    state.stopped = false;
    state.next_plan_id = outcome.plan->id + 1;
  }
  state.history.push_back(outcome.log);
  ++state.iterations;
  return state;
}

}  // namespace safearm::planner
