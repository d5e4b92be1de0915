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

// Dense-time collision oracle. Links are capsules around the segments
// between consecutive joints. Nothing here uses the set-based geometry or the
// arm kinematics of the planner; only the arm's raw parameters are read.

#ifndef SAFEARM_HARNESS_ORACLE_H_
#define SAFEARM_HARNESS_ORACLE_H_

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "safearm/arm/arm_model.h"

namespace safearm::harness {

inline constexpr double kOracleDt = 1e-3;

// Axis-aligned box obstacle.
struct Box {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d half = Eigen::Vector3d::Zero();

  bool operator==(const Box&) const = default;
};

enum class ViolationKind { kNone, kObstacle, kSelf, kPositionLimit, kSpeedLimit };

struct OracleReport {
  bool collision = false;
  ViolationKind kind = ViolationKind::kNone;
  double time = 0.0;
  int link = -1;
  // Obstacle index, other link for self contact, or -1.
  int other = -1;

  std::string ToString() const;
};

// Joint positions p_0 = 0, ..., p_n (the last is the tip of the last link),
// via an independent rotation chain.
std::vector<Eigen::Vector3d> OracleSkeleton(const arm::ArmModel& arm,
                                            const Eigen::VectorXd& q);

double PointBoxDistance(const Eigen::Vector3d& p, const Box& box);
// Exact distance between the segment [a, b] and the box.
double SegmentBoxDistance(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                          const Box& box);
double SegmentSegmentDistance(const Eigen::Vector3d& p1, const Eigen::Vector3d& q1,
                              const Eigen::Vector3d& p2, const Eigen::Vector3d& q2);

struct OracleOptions {
  bool check_self = true;
  bool check_limits = true;
  double limit_tol = 1e-9;
};

// Checks a single configuration; dq may be empty to skip speed limits.
OracleReport CheckState(const arm::ArmModel& arm, const std::vector<Box>& obstacles,
                        const Eigen::VectorXd& q, const Eigen::VectorXd& dq,
                        double time = 0.0, const OracleOptions& options = {});

using StateSampler = std::function<void(double t, Eigen::VectorXd* q, Eigen::VectorXd* dq)>;

// Samples [t0, t1] every dt (both ends included) and returns the first
// violation.
OracleReport CheckTrajectory(const arm::ArmModel& arm, const std::vector<Box>& obstacles,
                             const StateSampler& sampler, double t0, double t1,
                             double dt = kOracleDt, const OracleOptions& options = {});

}  // namespace safearm::harness

#endif  // SAFEARM_HARNESS_ORACLE_H_
