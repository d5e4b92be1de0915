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

#include "safearm/harness/trial.h"

#include <cmath>
#include <iomanip>
#include <stdexcept>

namespace safearm::harness {
namespace {

double GoalDistance(const Eigen::VectorXd& q, const Eigen::VectorXd& goal) {
  return (q - goal).lpNorm<Eigen::Infinity>();
}

}  // namespace

std::string Metrics::outcome() const {
  if (crashed) return "crashed";
  if (goal_reached) return "goal_reached";
  return "safely_stopped";
}

Metrics RunTrial(const arm::ArmModel& arm, const Scene& scene, const jrs::JrsBank& bank,
                 const HarnessConfig& config) {
  if (scene.q_start.size() != arm.n_q() || scene.q_goal.size() != arm.n_q()) {
    throw std::invalid_argument("RunTrial: scene does not match the arm");
  }
  if ((arm.dq_lim().array() > bank.params.dq_lim).any()) {
    throw std::invalid_argument("RunTrial: bank does not cover the arm's speed limits");
  }
  const auto& pc = config.planner;
  const double t_plan = pc.timing.t_plan;
  const auto obstacles = ObstacleZonotopes(scene.obstacles);
  const planner::StraightLineHlp hlp(pc.hlp_step);

  Metrics m;
  planner::PlannerState state = planner::InitialState(scene.q_start, pc.timing);
  int stall = 0;
  int since_best = 0;
  double best_distance = GoalDistance(scene.q_start, scene.q_goal);
  auto record = [&](double duration, bool feasible) {
    m.segments.push_back({state.current_plan, state.sim_time, state.exec_time, duration, feasible});
  };

  int settle = 0;
  while (true) {
    const Eigen::VectorXd rest = state.current_plan.At(pc.timing.t_f).q;
    const double rest_distance = GoalDistance(rest, scene.q_goal);
    if (rest_distance <= pc.goal_tolerance) {
      m.goal_reached = true;
      // Inside the tolerance, keep refining for a few iterations.
      if (rest_distance <= pc.settle_tolerance || settle >= pc.settle_iterations) break;
      ++settle;
    }
    if (stall >= pc.stagnation_iterations || since_best >= pc.livelock_iterations ||
        state.iterations >= pc.max_iterations) {
      break;
    }

    const double before = GoalDistance(planner::PredictInitialCondition(state).q, scene.q_goal);
    const planner::PlanOutcome out =
        planner::MakePlan(state, arm, obstacles, scene.q_goal, hlp, bank, pc);
    record(t_plan, out.plan.has_value());
    const bool from_rest = state.stopped;
    state = planner::Handoff(std::move(state), out);

    bool progress = false;
    if (out.plan) {
      ++m.feasible_iterations;
      const double after = GoalDistance(out.plan->At(pc.timing.t_f).q, scene.q_goal);
      progress = before - after >= pc.progress_tolerance;
    }
    stall = from_rest && !progress ? stall + 1 : 0;
    const double now = GoalDistance(state.current_plan.At(pc.timing.t_f).q, scene.q_goal);
    if (now < best_distance - pc.progress_tolerance) {
      best_distance = now;
      since_best = 0;
    } else {
      ++since_best;
    }
  }
  // Run out whatever is left of the last plan; it ends at rest.
  if (!state.stopped) {
    record(pc.timing.t_f - state.exec_time, false);
    state = planner::StepExecution(std::move(state), pc.timing.t_f - state.exec_time);
  }
  m.iterations = state.iterations;
  m.log = state.history;
  m.sim_time = state.sim_time;
  const traj::TrajState final_state = state.Current();
  m.final_speed = final_state.dq.lpNorm<Eigen::Infinity>();
  if (m.goal_reached) {
    m.goal_reached = GoalDistance(final_state.q, scene.q_goal) <= pc.goal_tolerance;
  }

  double total = 0.0;
  for (const auto& l : m.log) {
    total += l.total_time;
    m.overruns += l.overrun;
  }
  m.mean_solve_time = m.log.empty() ? 0.0 : total / m.log.size();

  // Dense oracle replay and path length over the executed segments.
  Eigen::VectorXd prev;
  for (const auto& seg : m.segments) {
    auto sampler = [&](double t, Eigen::VectorXd* q, Eigen::VectorXd* dq) {
      const traj::TrajState s = seg.plan.At(seg.exec_start + (t - seg.sim_start));
      *q = s.q;
      *dq = s.dq;
      if (prev.size() > 0) m.path_length += (s.q - prev).norm();
      prev = s.q;
    };
    if (!m.crashed) {
      const OracleReport rep = CheckTrajectory(arm, scene.obstacles, sampler, seg.sim_start,
                                               seg.sim_start + seg.duration, config.oracle_dt);
      if (rep.collision) {
        m.crashed = true;
        m.oracle = rep;
      }
    }
  }
  const double straight = (scene.q_goal - scene.q_start).norm();
  m.normalized_path_distance = straight > 0.0 ? m.path_length / straight : 0.0;
  if (m.crashed) m.goal_reached = false;
  m.safely_stopped = !m.crashed && !m.goal_reached;
  return m;
}

std::vector<TrackSample> SampleTrack(const Metrics& m, double dt) {
  std::vector<TrackSample> out;
  if (m.segments.empty()) return out;
  std::size_t seg = 0;
  const long steps = std::lround(m.sim_time / dt);
  for (long s = 0; s <= steps; ++s) {
    const double t = std::min(s * dt, m.sim_time);
    while (seg + 1 < m.segments.size() && t >= m.segments[seg + 1].sim_start) ++seg;
    const auto& sg = m.segments[seg];
    const traj::TrajState st = sg.plan.At(sg.exec_start + (t - sg.sim_start));
    out.push_back({t, st.q, st.dq, sg.plan.id, sg.feasible});
  }
  return out;
}

void WriteTrackCsv(const std::vector<TrackSample>& track, std::ostream& out) {
  const int n = track.empty() ? 0 : static_cast<int>(track.front().q.size());
  out << "t";
  for (int i = 1; i <= n; ++i) out << ",q_" << i;
  for (int i = 1; i <= n; ++i) out << ",dq_" << i;
  out << ",plan_id,feasible_flag\n";
  out << std::setprecision(17);
  for (const auto& s : track) {
    out << s.t;
    for (int i = 0; i < n; ++i) out << "," << s.q(i);
    for (int i = 0; i < n; ++i) out << "," << s.dq(i);
    out << "," << s.plan_id << "," << (s.feasible ? 1 : 0) << "\n";
  }
}

}  // namespace safearm::harness
