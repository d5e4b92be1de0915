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

// Piecewise trajectories: constant acceleration k_a from velocity k_v on
// [0, t_plan], then a linear velocity ramp to zero at t_f.

#ifndef SAFEARM_TRAJ_TRAJECTORY_H_
#define SAFEARM_TRAJ_TRAJECTORY_H_

#include <vector>

#include <Eigen/Dense>

namespace safearm::traj {

struct TimingConfig {
  double t_plan = 0.5;
  double t_f = 1.0;
  double dt = 0.01;

  // Throws std::invalid_argument unless dt > 0, 0 < t_plan < t_f and both
  // times are integer multiples of dt.
  void Validate() const;
  int num_steps() const;   // t_f / dt
  int plan_steps() const;  // t_plan / dt

  bool operator==(const TimingConfig&) const = default;
};

struct JointParamBox {
  double kv_center = 0.0;
  double kv_halfwidth = 0.0;
  double ka_center = 0.0;
  double ka_halfwidth = 0.0;

  double ka_lo() const { return ka_center - ka_halfwidth; }
  double ka_hi() const { return ka_center + ka_halfwidth; }
  double kv_lo() const { return kv_center - kv_halfwidth; }
  double kv_hi() const { return kv_center + kv_halfwidth; }

  bool operator==(const JointParamBox&) const = default;
};

using ParamBox = std::vector<JointParamBox>;

struct TrajParam {
  Eigen::VectorXd k_v;
  Eigen::VectorXd k_a;
};

struct TrajState {
  Eigen::VectorXd q;
  Eigen::VectorXd dq;
};

// Coefficients with q(t) - q0 = a_v k_v + a_a k_a.
struct Basis {
  double a_v = 0.0;
  double a_a = 0.0;
};

Basis PositionBasis(double t, const TimingConfig& timing);
Basis VelocityBasis(double t, const TimingConfig& timing);

// Single-joint evaluation; t must lie in [0, t_f].
double JointPosition(double k_v, double k_a, double q0, double t,
                     const TimingConfig& timing);
double JointVelocity(double k_v, double k_a, double t,
                     const TimingConfig& timing);

TrajState EvalTrajectory(const TrajParam& k, const Eigen::VectorXd& q0,
                         double t, const TimingConfig& timing);
// As above, additionally requiring dq0 == k.k_v exactly.
TrajState EvalTrajectory(const TrajParam& k, const Eigen::VectorXd& q0,
                         const Eigen::VectorXd& dq0, double t,
                         const TimingConfig& timing);

struct JointExtrema {
  double q_min = 0.0;
  double q_max = 0.0;
  double dq_absmax = 0.0;
};

JointExtrema JointTrajectoryExtrema(double k_v, double k_a, double q0,
                                    const TimingConfig& timing);
std::vector<JointExtrema> TrajectoryExtrema(const TrajParam& k,
                                            const Eigen::VectorXd& q0,
                                            const TimingConfig& timing);

// Acceleration box centered at zero with half-width
// max(r_a2, r_a1 |kv_center|), clipped to [-ddq_lim, ddq_lim].
JointParamBox BuildParamBox(double kv_center, double kv_halfwidth,
                            double ddq_lim, double r_a1, double r_a2);

}  // namespace safearm::traj

#endif  // SAFEARM_TRAJ_TRAJECTORY_H_
