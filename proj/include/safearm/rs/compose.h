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

// Workspace reachable sets of every link over the time grid, parameterized
// by the acceleration parameters of the joints.

#ifndef SAFEARM_RS_COMPOSE_H_
#define SAFEARM_RS_COMPOSE_H_

#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "safearm/arm/arm_model.h"
#include "safearm/geom/zonotope.h"
#include "safearm/jrs/jrs.h"
#include "safearm/traj/trajectory.h"

namespace safearm::rs {

inline constexpr int kDefaultReduceLimit = 40;

struct RsCell {
  // Center plus every fully k-sliceable generator.
  geom::Rotatotope slc;
  // Zero center plus all remaining generators.
  geom::Rotatotope buf;
};

struct ComposedRS {
  Eigen::VectorXd q0;
  Eigen::VectorXd dq0;
  std::vector<int> jrs_index;
  traj::ParamBox boxes;
  traj::TimingConfig timing;
  // cells[n][i]: link i over time interval n.
  std::vector<std::vector<RsCell>> cells;

  int n_q() const { return static_cast<int>(q0.size()); }
  int num_steps() const { return static_cast<int>(cells.size()); }
  const RsCell& cell(int link, int step) const { return cells[step][link]; }
};

struct ComposeOptions {
  int n_red = kDefaultReduceLimit;
  int num_threads = 1;
};

// Evaluates the joint's Kv indeterminate at dq0; the result has no Kv
// generator. Throws std::invalid_argument if dq0 is outside the box.
geom::Zonotope SliceByInitVel(const geom::Zonotope& z, int joint, double dq0,
                              const traj::JointParamBox& box);

// Rotation enclosure from a (cos, sin, k_v, k_a) zonotope, premultiplied by
// the rotation at q0. Exactly-zero generators are dropped.
geom::MatrixZonotope MakeMatZono(const geom::Zonotope& z_sliced, double q0,
                                 const Eigen::Vector3d& axis);

std::pair<geom::Rotatotope, geom::Rotatotope> SplitSliceBuf(
    const geom::Rotatotope& v);

// Copy of a bank zonotope with ids moved to joint `joint`: Kv(0) and Ka(0)
// become Kv(joint) and Ka(joint); error ids move to a block that lies above
// the blocks of all higher-numbered joints and of the link volumes.
geom::Zonotope RelabelForJoint(const geom::Zonotope& z, int joint, int n_q);

ComposedRS ComposeRS(const arm::ArmModel& arm, const Eigen::VectorXd& q0,
                     const Eigen::VectorXd& dq0, const jrs::JrsBank& bank,
                     const ComposeOptions& options = {});

nlohmann::json ToJson(const ComposedRS& rs);

}  // namespace safearm::rs

#endif  // SAFEARM_RS_COMPOSE_H_
