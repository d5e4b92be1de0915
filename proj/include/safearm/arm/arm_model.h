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

// Serial revolute chains. Joint 0 sits at the origin; the displacement of
// joint i is the vector from joint i to joint i + 1 (or to the tip) in the
// frame of link i, and axis i is expressed in the frame of link i - 1.

#ifndef SAFEARM_ARM_ARM_MODEL_H_
#define SAFEARM_ARM_ARM_MODEL_H_

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "safearm/geom/zonotope.h"

namespace safearm::arm {

struct JointSpec {
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d displacement = Eigen::Vector3d::Zero();
  double q_min = -std::numeric_limits<double>::infinity();
  double q_max = std::numeric_limits<double>::infinity();
  double dq_lim = 0.0;
  // Link volume in the link frame, with joint i at the origin.
  geom::Zonotope link_volume;
  // Radius of the capsule around the segment 0 -> displacement.
  double capsule_radius = 0.0;
};

struct ArmModel {
  std::string name;
  std::vector<JointSpec> joints;
  // Link index pairs (0-based, j >= i + 2) checked for self-intersection.
  std::vector<std::pair<int, int>> self_pairs;

  int n_q() const { return static_cast<int>(joints.size()); }
  Eigen::VectorXd q_min() const;
  Eigen::VectorXd q_max() const;
  Eigen::VectorXd dq_lim() const;
};

Eigen::Matrix3d Skew(const Eigen::Vector3d& u);
// Rodrigues rotation; throws std::invalid_argument for a non-unit axis.
Eigen::Matrix3d RotationMatrix(const Eigen::Vector3d& axis, double q);

// Products R_0 ... R_i for every joint i.
std::vector<Eigen::Matrix3d> CumulativeRotations(const ArmModel& arm,
                                                 const Eigen::VectorXd& q);
// Position of every joint; entry 0 is the origin.
std::vector<Eigen::Vector3d> JointPositions(const ArmModel& arm,
                                            const Eigen::VectorXd& q);
// Workspace volume of every link at configuration q.
std::vector<geom::Zonotope> ForwardOccupancy(const ArmModel& arm,
                                             const Eigen::VectorXd& q);

// Box zonotope (3 generators) enclosing the capsule of the given radius
// around the segment 0 -> displacement.
geom::Zonotope CapsuleBox(const Eigen::Vector3d& displacement, double radius);

// Throws std::invalid_argument when the capsule of some link is not
// contained in its link volume or the model is otherwise inconsistent.
void ValidateArm(const ArmModel& arm);

ArmModel ArmFromJson(const nlohmann::json& j);
ArmModel LoadArm(const std::string& path);
nlohmann::json ArmToJson(const ArmModel& arm);

}  // namespace safearm::arm

#endif  // SAFEARM_ARM_ARM_MODEL_H_
