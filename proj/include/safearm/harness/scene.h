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

#ifndef SAFEARM_HARNESS_SCENE_H_
#define SAFEARM_HARNESS_SCENE_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "safearm/arm/arm_model.h"
#include "safearm/geom/zonotope.h"
#include "safearm/harness/oracle.h"

namespace safearm::harness {

struct Scene {
  std::string name;
  // Arm file as written in the scene; resolved by ResolveArmPath.
  std::string arm_file;
  std::vector<Box> obstacles;
  Eigen::VectorXd q_start;
  Eigen::VectorXd q_goal;
  std::uint64_t seed = 0;

  bool operator==(const Scene&) const = default;
};

class SceneGenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SceneOptions {
  double base_clearance = 0.1;
  double min_side = 0.01;
  double max_side = 0.5;
  int max_rejections = 10000;
  // Start and goal closer than this (2-norm, rad) are resampled.
  double min_goal_distance = 0.5;
  // Arms moving only in the z = 0 plane get obstacle centers in the reach
  // disk instead of the reach ball.
  bool planar_in_plane = true;
};

// Obstacles as box zonotopes with distinct generic ids.
std::vector<geom::Zonotope> ObstacleZonotopes(const std::vector<Box>& boxes);

double ReachRadius(const arm::ArmModel& arm);
bool IsPlanarArm(const arm::ArmModel& arm);

Scene GenerateRandomScene(const arm::ArmModel& arm, int n_obs, std::uint64_t seed,
                          const SceneOptions& options = {});

nlohmann::json ToJson(const Scene& scene);
Scene SceneFromJson(const nlohmann::json& j);
Scene LoadScene(const std::string& path);
void SaveScene(const Scene& scene, const std::string& path);

// Looks for the arm file next to the scene, one directory up, then as given.
std::string ResolveArmPath(const std::string& arm_file, const std::string& scene_path);

}  // namespace safearm::harness

#endif  // SAFEARM_HARNESS_SCENE_H_
