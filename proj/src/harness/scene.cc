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

#include "safearm/harness/scene.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "safearm/util/json_number.h"

namespace safearm::harness {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr std::uint64_t kObstacleUidBase = std::uint64_t{1} << 60;

json VecJson(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

bool CollisionFree(const arm::ArmModel& arm, const std::vector<Box>& obstacles,
                   const Eigen::VectorXd& q) {
  return !CheckState(arm, obstacles, q, Eigen::VectorXd()).collision;
}

}  // namespace

std::vector<geom::Zonotope> ObstacleZonotopes(const std::vector<Box>& boxes) {
  std::vector<geom::Zonotope> out;
  for (std::size_t k = 0; k < boxes.size(); ++k) {
    out.push_back(geom::Zonotope::Box(boxes[k].center, boxes[k].half,
                                      kObstacleUidBase + 3 * k));
  }
  return out;
}

double ReachRadius(const arm::ArmModel& arm) {
  double r = 0.0;
  for (const auto& j : arm.joints) r += j.displacement.norm();
  return r;
}

bool IsPlanarArm(const arm::ArmModel& arm) {
  for (const auto& j : arm.joints) {
    if (j.axis.head<2>().norm() > 1e-12 || j.displacement.z() != 0.0) return false;
  }
  return true;
}

Scene GenerateRandomScene(const arm::ArmModel& arm, int n_obs, std::uint64_t seed,
                          const SceneOptions& options) {
  if (n_obs < 0) throw std::invalid_argument("GenerateRandomScene: n_obs < 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0), u11(-1.0, 1.0);
  std::normal_distribution<double> gauss;
  const double reach = ReachRadius(arm);
  const bool planar = options.planar_in_plane && IsPlanarArm(arm);

  // Links whose pose does not depend on q (displacement along the axis of
  // the first joint) must stay clear of obstacles.
  const Eigen::VectorXd q_zero = Eigen::VectorXd::Zero(arm.n_q());
  const auto skeleton = OracleSkeleton(arm, q_zero);
  const bool fixed_first_link =
      arm.joints[0].axis.normalized().cross(arm.joints[0].displacement).norm() < 1e-12;

  Scene scene;
  scene.seed = seed;
  for (int k = 0; k < n_obs; ++k) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= options.max_rejections) {
        throw SceneGenerationError("could not place obstacle clear of the base");
      }
      Eigen::Vector3d dir(gauss(rng), gauss(rng), planar ? 0.0 : gauss(rng));
      if (dir.norm() == 0.0) continue;
      dir.normalize();
      const double rad = reach * std::pow(u01(rng), planar ? 0.5 : 1.0 / 3.0);
      Box b;
      b.center = dir * rad;
      for (int a = 0; a < 3; ++a) {
        b.half(a) = 0.5 * (options.min_side + (options.max_side - options.min_side) * u01(rng));
      }
      if (PointBoxDistance(Eigen::Vector3d::Zero(), b) < options.base_clearance) continue;
      if (fixed_first_link &&
          SegmentBoxDistance(skeleton[0], skeleton[1], b) <= arm.joints[0].capsule_radius) {
        continue;
      }
      scene.obstacles.push_back(b);
      break;
    }
  }

  auto sample_q = [&] {
    Eigen::VectorXd q(arm.n_q());
    for (int i = 0; i < arm.n_q(); ++i) {
      const auto& j = arm.joints[i];
      const double lo = std::isfinite(j.q_min) ? j.q_min : -std::numbers::pi;
      const double hi = std::isfinite(j.q_max) ? j.q_max : std::numbers::pi;
      q(i) = lo + (hi - lo) * u01(rng);
    }
    return q;
  };
  int rejections = 0;
  auto next_free = [&](const Eigen::VectorXd* other) {
    while (true) {
      const Eigen::VectorXd q = sample_q();
      const bool far = other == nullptr || (q - *other).norm() >= options.min_goal_distance;
      if (far && CollisionFree(arm, scene.obstacles, q)) return q;
      if (++rejections > options.max_rejections) {
        throw SceneGenerationError("scene too cluttered: rejection budget exhausted");
      }
    }
  };
  scene.q_start = next_free(nullptr);
  scene.q_goal = next_free(&scene.q_start);
  return scene;
}

json ToJson(const Scene& scene) {
  json obs = json::array();
  for (const auto& b : scene.obstacles) {
    obs.push_back({{"center", VecJson(b.center)}, {"half_extents", VecJson(b.half)}});
  }
  return {{"name", scene.name},         {"arm", scene.arm_file},
          {"seed", scene.seed},         {"q_start", VecJson(scene.q_start)},
          {"q_goal", VecJson(scene.q_goal)}, {"obstacles", obs}};
}

Scene SceneFromJson(const json& j) {
  Scene s;
  s.name = j.value("name", "");
  s.arm_file = j.value("arm", "");
  s.seed = j.value("seed", std::uint64_t{0});
  s.q_start = util::ParseVector(j.at("q_start"));
  s.q_goal = util::ParseVector(j.at("q_goal"));
  if (s.q_start.size() != s.q_goal.size()) {
    throw std::invalid_argument("scene: q_start and q_goal differ in size");
  }
  for (const auto& o : j.value("obstacles", json::array())) {
    Box b;
    b.center = util::ParseVector(o.at("center"), 3);
    b.half = util::ParseVector(o.at("half_extents"), 3);
    if ((b.half.array() < 0.0).any()) {
      throw std::invalid_argument("scene: negative half extent");
    }
    s.obstacles.push_back(b);
  }
  return s;
}

Scene LoadScene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scene file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("invalid scene file " + path + ": " + e.what());
  }
  return SceneFromJson(j);
}

void SaveScene(const Scene& scene, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << ToJson(scene).dump(2) << "\n";
}

std::string ResolveArmPath(const std::string& arm_file, const std::string& scene_path) {
  const fs::path p(arm_file);
  if (p.is_absolute()) return arm_file;
  const fs::path dir = fs::path(scene_path).parent_path();
  for (const fs::path& c : {dir / p, dir.parent_path() / p}) {
    if (fs::exists(c)) return c.string();
  }
  return arm_file;
}

}  // namespace safearm::harness
