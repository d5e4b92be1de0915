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

#include "safearm/traj/trajectory.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace safearm::traj {
namespace {

bool IsMultiple(double t, double dt) {
  const double ratio = t / dt;
  return std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, ratio);
}

void CheckTime(double t, const TimingConfig& timing) {
  if (!(t >= 0.0 && t <= timing.t_f)) {
    throw std::invalid_argument("trajectory time " + std::to_string(t) +
                                " outside [0, t_f]");
  }
}

// Fraction of the braking-phase displacement covered by time t >= t_plan,
// scaled by the braking duration: [(T)^2 - (t_f - t)^2] / (2 T).
double BrakeIntegral(double t, const TimingConfig& timing) {
  const double span = timing.t_f - timing.t_plan;
  const double rest = timing.t_f - t;
  return (span * span - rest * rest) / (2.0 * span);
}

}  // namespace

void TimingConfig::Validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("timing: dt must be positive");
  if (!(t_plan > 0.0 && t_plan < t_f)) {
    throw std::invalid_argument("timing: need 0 < t_plan < t_f");
  }
  if (!IsMultiple(t_f, dt) || !IsMultiple(t_plan, dt)) {
    throw std::invalid_argument("timing: t_plan and t_f must be multiples of dt");
  }
}

int TimingConfig::num_steps() const {
  return static_cast<int>(std::lround(t_f / dt));
}

int TimingConfig::plan_steps() const {
  return static_cast<int>(std::lround(t_plan / dt));
}

Basis PositionBasis(double t, const TimingConfig& timing) {
  const double tp = timing.t_plan;
  if (t <= tp) return {t, 0.5 * t * t};
  const double phi = BrakeIntegral(t, timing);
  return {tp + phi, 0.5 * tp * tp + tp * phi};
}

Basis VelocityBasis(double t, const TimingConfig& timing) {
  const double tp = timing.t_plan;
  if (t < tp) return {1.0, t};
  const double ramp = (timing.t_f - t) / (timing.t_f - tp);
  return {ramp, tp * ramp};
}

double JointPosition(double k_v, double k_a, double q0, double t,
                     const TimingConfig& timing) {
  CheckTime(t, timing);
  const Basis b = PositionBasis(t, timing);
  return q0 + b.a_v * k_v + b.a_a * k_a;
}

double JointVelocity(double k_v, double k_a, double t,
                     const TimingConfig& timing) {
  CheckTime(t, timing);
  if (t == timing.t_f) return 0.0;
  const Basis b = VelocityBasis(t, timing);
  return b.a_v * k_v + b.a_a * k_a;
}

TrajState EvalTrajectory(const TrajParam& k, const Eigen::VectorXd& q0,
                         double t, const TimingConfig& timing) {
  const auto n = q0.size();
  if (k.k_v.size() != n || k.k_a.size() != n) {
    throw std::invalid_argument("EvalTrajectory: joint count mismatch");
  }
  TrajState s{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    s.q(i) = JointPosition(k.k_v(i), k.k_a(i), q0(i), t, timing);
    s.dq(i) = JointVelocity(k.k_v(i), k.k_a(i), t, timing);
  }
  return s;
}

TrajState EvalTrajectory(const TrajParam& k, const Eigen::VectorXd& q0,
                         const Eigen::VectorXd& dq0, double t,
                         const TimingConfig& timing) {
  if (dq0 != k.k_v) {
    throw std::invalid_argument("EvalTrajectory: dq0 must equal k_v");
  }
  return EvalTrajectory(k, q0, t, timing);
}

JointExtrema JointTrajectoryExtrema(double k_v, double k_a, double q0,
                                    const TimingConfig& timing) {
  const double tp = timing.t_plan;
  JointExtrema e;
  e.dq_absmax = std::max(std::abs(k_v), std::abs(k_v + k_a * tp));
  const double at_plan = JointPosition(k_v, k_a, q0, tp, timing);
  const double at_end = JointPosition(k_v, k_a, q0, timing.t_f, timing);
  e.q_min = std::min({q0, at_plan, at_end});
  e.q_max = std::max({q0, at_plan, at_end});
  if (k_a != 0.0) {
    const double t_star = -k_v / k_a;
    if (t_star > 0.0 && t_star < tp) {
      const double q_star = JointPosition(k_v, k_a, q0, t_star, timing);
      e.q_min = std::min(e.q_min, q_star);
      e.q_max = std::max(e.q_max, q_star);
    }
  }
  return e;
}

std::vector<JointExtrema> TrajectoryExtrema(const TrajParam& k,
                                            const Eigen::VectorXd& q0,
                                            const TimingConfig& timing) {
  std::vector<JointExtrema> out;
  out.reserve(q0.size());
  for (Eigen::Index i = 0; i < q0.size(); ++i) {
    out.push_back(JointTrajectoryExtrema(k.k_v(i), k.k_a(i), q0(i), timing));
  }
  return out;
}

JointParamBox BuildParamBox(double kv_center, double kv_halfwidth,
                            double ddq_lim, double r_a1, double r_a2) {
  if (kv_halfwidth < 0.0 || ddq_lim < 0.0 || r_a1 < 0.0 || r_a2 < 0.0) {
    throw std::invalid_argument("BuildParamBox: negative input");
  }
  const double delta = std::max(r_a2, r_a1 * std::abs(kv_center));
  const double lo = std::max(-ddq_lim, -delta);
  const double hi = std::min(ddq_lim, delta);
  if (lo > hi) throw std::invalid_argument("BuildParamBox: empty K_a");
  JointParamBox box;
  box.kv_center = kv_center;
  box.kv_halfwidth = kv_halfwidth;
  box.ka_center = 0.5 * (lo + hi);
  box.ka_halfwidth = 0.5 * (hi - lo);
  return box;
}

}  // namespace safearm::traj
