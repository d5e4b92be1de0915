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

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include "safearm/arm/arm_model.h"
#include "safearm/geom/set_ops.h"

namespace safearm::arm {
namespace {

constexpr double kPi = std::numbers::pi;
const std::string kDataDir = SAFEARM_DATA_DIR;

Eigen::Vector3d RandomAxis(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Eigen::Vector3d(n(rng), n(rng), n(rng)).normalized();
}

Eigen::VectorXd RandomConfig(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-kPi, kPi);
  Eigen::VectorXd q(n);
  for (int i = 0; i < n; ++i) q(i) = u(rng);
  return q;
}

double SegmentDistance(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                       const Eigen::Vector3d& b) {
  const Eigen::Vector3d ab = b - a;
  const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (a + t * ab - p).norm();
}

TEST(RotationTest, KnownValues) {
  Eigen::Matrix3d expected;
  expected << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  EXPECT_TRUE(RotationMatrix(Eigen::Vector3d::UnitZ(), kPi / 2).isApprox(expected, 1e-15));
  EXPECT_EQ(RotationMatrix(Eigen::Vector3d::UnitY(), 0.0), Eigen::Matrix3d::Identity());
  EXPECT_THROW(RotationMatrix(Eigen::Vector3d(1, 1, 0), 0.3), std::invalid_argument);
}

TEST(RotationTest, OrthogonalAgainstAngleAxis) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int k = 0; k < 1000; ++k) {
    const Eigen::Vector3d axis = RandomAxis(rng);
    const double q = u(rng);
    const Eigen::Matrix3d r = RotationMatrix(axis, q);
    EXPECT_LE((r * r.transpose() - Eigen::Matrix3d::Identity()).norm(), 1e-12);
    EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
    EXPECT_LE((r - Eigen::AngleAxisd(q, axis).toRotationMatrix()).norm(), 1e-12);
  }
}

TEST(ArmFileTest, BundledArmsLoad) {
  const ArmModel p2 = LoadArm(kDataDir + "/arms/planar2.json");
  EXPECT_EQ(p2.n_q(), 2);
  EXPECT_TRUE(std::isinf(p2.joints[0].q_max));
  const ArmModel s3 = LoadArm(kDataDir + "/arms/spatial3.json");
  EXPECT_EQ(s3.n_q(), 3);
  EXPECT_NEAR(s3.joints[1].q_max, kPi / 2, 1e-15);
  ASSERT_EQ(s3.self_pairs.size(), 1u);
  EXPECT_NO_THROW(ArmFromJson(ArmToJson(s3)));
}

TEST(ArmFileTest, RejectsUncontainedCapsule) {
  nlohmann::json j = ArmToJson(LoadArm(kDataDir + "/arms/planar2.json"));
  j["joints"][0]["radius"] = 0.2;
  EXPECT_THROW(ArmFromJson(j), std::invalid_argument);
  nlohmann::json k = ArmToJson(LoadArm(kDataDir + "/arms/planar3.json"));
  k["self_pairs"] = {{0, 1}};
  EXPECT_THROW(ArmFromJson(k), std::invalid_argument);
}

TEST(ForwardOccupancyTest, DefaultAndQuarterTurn) {
  const ArmModel arm = LoadArm(kDataDir + "/arms/planar2.json");
  const auto fo = ForwardOccupancy(arm, Eigen::Vector2d::Zero());
  EXPECT_TRUE(fo[1].center().isApprox(Eigen::Vector3d(1.5, 0, 0)));
  EXPECT_EQ(fo[1].generators(), arm.joints[1].link_volume.generators());
  const auto p = JointPositions(arm, Eigen::Vector2d(kPi / 2, 0));
  EXPECT_LE((p[1] - Eigen::Vector3d(0, 1, 0)).norm(), 1e-15);
  const ArmModel single = [&] {
    ArmModel a = arm;
    a.joints.resize(1);
    return a;
  }();
  EXPECT_EQ(JointPositions(single, Eigen::VectorXd::Constant(1, 0.4))[0],
            Eigen::Vector3d::Zero());
  EXPECT_THROW(JointPositions(arm, Eigen::Vector3d::Zero()), std::invalid_argument);
}

TEST(ForwardOccupancyTest, MatchesTransformChain) {
  const ArmModel arm = LoadArm(kDataDir + "/arms/spatial3.json");
  std::mt19937_64 rng(2);
  for (int k = 0; k < 100; ++k) {
    const Eigen::VectorXd q = RandomConfig(rng, 3);
    Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
    const auto joints = JointPositions(arm, q);
    const auto fo = ForwardOccupancy(arm, q);
    for (int i = 0; i < 3; ++i) {
      t.rotate(Eigen::AngleAxisd(q(i), arm.joints[i].axis));
      EXPECT_LE((t.translation() - joints[i]).norm(), 1e-12);
      const Eigen::Vector3d link_center =
          t * Eigen::Vector3d(arm.joints[i].link_volume.center());
      EXPECT_LE((fo[i].center() - link_center).norm(), 1e-12);
      t.translate(arm.joints[i].displacement);
    }
  }
}

TEST(ForwardOccupancyTest, ConsistentWithCapsules) {
  const ArmModel arm = LoadArm(kDataDir + "/arms/spatial3.json");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0), s(0.0, 1.0);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const Eigen::VectorXd q = RandomConfig(rng, 3);
    const auto fo = ForwardOccupancy(arm, q);
    const auto joints = JointPositions(arm, q);
    const auto rots = CumulativeRotations(arm, q);
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector3d a = joints[i];
      const Eigen::Vector3d b = a + rots[i] * arm.joints[i].displacement;
      const double r = arm.joints[i].capsule_radius;
      // Box-shaped link volumes reach at most sqrt(3) r past the skeleton.
      for (int m = 0; m < 20; ++m) {
        Eigen::Vector3d p = fo[i].center();
        for (int g = 0; g < fo[i].num_generators(); ++g) {
          p += (g == m % 3 ? (u(rng) < 0 ? -1.0 : 1.0) : u(rng)) *
               fo[i].generators().col(g);
        }
        EXPECT_LE(SegmentDistance(p, a, b), std::sqrt(3.0) * r + 1e-12);
      }
      // Capsule points always lie inside the link volume.
      for (int m = 0; m < 20; ++m) {
        const Eigen::Vector3d dir =
            Eigen::Vector3d(n(rng), n(rng), n(rng)).normalized();
        const Eigen::Vector3d p = a + s(rng) * (b - a) + r * s(rng) * dir;
        EXPECT_TRUE(geom::ContainsPoint(fo[i], p));
      }
    }
  }
}

TEST(ForwardOccupancyTest, BaseRotationInvariance) {
  const ArmModel arm = LoadArm(kDataDir + "/arms/spatial3.json");
  std::mt19937_64 rng(4);
  const Eigen::Matrix3d base =
      Eigen::AngleAxisd(0.7, RandomAxis(rng)).toRotationMatrix();
  ArmModel rotated = arm;
  for (auto& j : rotated.joints) {
    j.axis = base * j.axis;
    j.displacement = base * j.displacement;
    j.link_volume = geom::LinearMap(base, j.link_volume);
  }
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd q = RandomConfig(rng, 3);
    const auto fo = ForwardOccupancy(arm, q);
    const auto fo_rot = ForwardOccupancy(rotated, q);
    for (int i = 0; i < 3; ++i) {
      for (int m = 0; m < 10; ++m) {
        const Eigen::Vector3d d = RandomAxis(rng);
        EXPECT_NEAR(geom::SupportFunction(fo_rot[i], base * d),
                    geom::SupportFunction(fo[i], d), 1e-12);
      }
    }
  }
}

}  // namespace
}  // namespace safearm::arm
