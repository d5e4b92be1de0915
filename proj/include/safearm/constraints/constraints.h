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

// Unsafe-parameter constraints in the acceleration parameters k_a. Every
// constraint h satisfies: h(k_a) <= -margin implies the corresponding
// collision or limit violation cannot happen along the trajectory.

#ifndef SAFEARM_CONSTRAINTS_CONSTRAINTS_H_
#define SAFEARM_CONSTRAINTS_CONSTRAINTS_H_

#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "safearm/arm/arm_model.h"
#include "safearm/geom/zonotope.h"
#include "safearm/rs/compose.h"
#include "safearm/traj/trajectory.h"

namespace safearm::constraints {

inline constexpr double kDefaultMargin = 1e-6;

struct PolynomialTerm {
  Eigen::Vector3d coef;
  // Multiset of joint indices whose normalized k_a multiply `coef`.
  std::vector<int> joints;
};

// k_a -> point, the evaluation of a fully sliceable rotatotope.
struct PolynomialPoint {
  Eigen::Vector3d constant = Eigen::Vector3d::Zero();
  std::vector<PolynomialTerm> terms;
};

PolynomialPoint ToPolynomialPoint(const geom::Rotatotope& slc);

// Normalized coordinates lambda_i = (k_a,i - center) / halfwidth; zero for
// joints with a degenerate interval.
Eigen::VectorXd NormalizeKa(const traj::ParamBox& boxes, const Eigen::VectorXd& k_a);
bool InBox(const traj::ParamBox& boxes, const Eigen::VectorXd& k_a);

Eigen::Vector3d EvalPoint(const PolynomialPoint& p, const traj::ParamBox& boxes,
                          const Eigen::VectorXd& k_a);
// Point and its 3 x n_q Jacobian with respect to k_a.
Eigen::Vector3d EvalPoint(const PolynomialPoint& p, const traj::ParamBox& boxes,
                          const Eigen::VectorXd& k_a, Eigen::Matrix3Xd* jacobian);

// -max(A y - b) with the first maximizing row reported in *row.
double HalfspaceValue(const geom::HalfspaceRep& rep, const Eigen::Vector3d& y,
                      int* row = nullptr);

struct ObstacleConstraint {
  int link = 0;
  int step = 0;
  int obstacle = 0;
  int point = 0;  // index into ConstraintSet::points
  geom::HalfspaceRep rep;
};

struct SelfConstraint {
  int link_a = 0;
  int link_b = 0;
  int step = 0;
  int point_a = 0;
  int point_b = 0;
  geom::HalfspaceRep rep;
};

enum class LimitKind { kPositionMax, kPositionMin, kSpeed };

struct LimitComponent {
  int joint = 0;
  LimitKind kind = LimitKind::kSpeed;
};

struct JointLimits {
  Eigen::VectorXd q0;
  Eigen::VectorXd dq0;
  Eigen::VectorXd q_min;
  Eigen::VectorXd q_max;
  Eigen::VectorXd dq_lim;
  traj::TimingConfig timing;
  std::vector<LimitComponent> components;
};

struct ConstraintOptions {
  double margin = kDefaultMargin;
  // Buffer generators kept before Minkowski-summing with obstacles; <= 0
  // keeps every generator.
  int n_buf = 8;
  bool prune = true;
  int num_threads = 1;
};

struct ConstraintSet {
  traj::ParamBox boxes;
  double margin = kDefaultMargin;
  int n_q = 0;
  // points[step * n_q + link].
  std::vector<PolynomialPoint> points;
  std::vector<ObstacleConstraint> obstacle;
  std::vector<SelfConstraint> self;
  JointLimits limits;

  int size() const {
    return static_cast<int>(obstacle.size() + self.size() +
                            limits.components.size());
  }
};

std::vector<PolynomialPoint> ExtractPoints(const rs::ComposedRS& rs);

std::vector<ObstacleConstraint> BuildObstacleConstraints(
    const rs::ComposedRS& rs, const std::vector<geom::Zonotope>& obstacles,
    const ConstraintOptions& options = {});

std::vector<SelfConstraint> BuildSelfIntersectionConstraints(
    const rs::ComposedRS& rs, const std::vector<std::pair<int, int>>& pairs,
    const ConstraintOptions& options = {});

JointLimits BuildJointLimitConstraints(const Eigen::VectorXd& q0,
                                       const Eigen::VectorXd& dq0,
                                       const arm::ArmModel& arm,
                                       const traj::TimingConfig& timing);

// Value of one limit component and its derivative in k_a of that joint.
double EvalLimit(const JointLimits& limits, const LimitComponent& c, double k_a,
                 double* derivative = nullptr);

ConstraintSet BuildConstraints(const rs::ComposedRS& rs, const arm::ArmModel& arm,
                               const std::vector<geom::Zonotope>& obstacles,
                               const ConstraintOptions& options = {});

struct ConstraintValues {
  Eigen::VectorXd values;
  // One row per constraint, one column per joint; empty unless requested.
  Eigen::MatrixXd subgradients;
};

// Order: obstacle, self-intersection, joint-limit components.
ConstraintValues EvalConstraints(const ConstraintSet& cs, const Eigen::VectorXd& k_a,
                                 bool with_subgradients = true);

nlohmann::json MetadataJson(const ConstraintSet& cs);

}  // namespace safearm::constraints

#endif  // SAFEARM_CONSTRAINTS_CONSTRAINTS_H_
