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

#include "safearm/arm/arm_model.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

#include "safearm/geom/set_ops.h"
#include "safearm/util/json_number.h"

namespace safearm::arm {
namespace {

using geom::IndeterminateId;
using nlohmann::json;

constexpr double kAxisTol = 1e-12;

void CheckConfig(const ArmModel& arm, const Eigen::VectorXd& q) {
  if (q.size() != arm.n_q()) {
    throw std::invalid_argument("configuration has " + std::to_string(q.size()) +
                                " entries, arm has " + std::to_string(arm.n_q()));
  }
}

// Unit vectors completing d (nonzero) to an orthonormal basis.
std::pair<Eigen::Vector3d, Eigen::Vector3d> Perpendiculars(const Eigen::Vector3d& d) {
  const Eigen::Vector3d u = d.normalized();
  const Eigen::Vector3d seed =
      std::abs(u.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  const Eigen::Vector3d a = u.cross(seed).normalized();
  return {a, u.cross(a)};
}

// Points on the capsule surface used for the load-time containment check.
std::vector<Eigen::Vector3d> CapsuleSurfaceSamples(const Eigen::Vector3d& l,
                                                   double r) {
  Eigen::Vector3d u = Eigen::Vector3d::UnitX();
  if (l.norm() > 0.0) u = l.normalized();
  const auto [a, b] = Perpendiculars(u);
  std::vector<Eigen::Vector3d> out;
  constexpr int kAzimuth = 16;
  constexpr int kAlong = 9;
  constexpr int kPolar = 6;
  const double pi = std::numbers::pi;
  for (int k = 0; k < kAzimuth; ++k) {
    const double phi = 2.0 * pi * k / kAzimuth;
    const Eigen::Vector3d radial = std::cos(phi) * a + std::sin(phi) * b;
    for (int s = 0; s < kAlong; ++s) {
      out.push_back(l * (static_cast<double>(s) / (kAlong - 1)) + r * radial);
    }
    for (int p = 1; p <= kPolar; ++p) {
      const double theta = 0.5 * pi * p / kPolar;
      const Eigen::Vector3d dir = std::cos(theta) * u + std::sin(theta) * radial;
      out.push_back(l + r * dir);
      out.push_back(-r * std::cos(theta) * u + r * std::sin(theta) * radial);
    }
  }
  return out;
}

geom::Zonotope ZonotopeFromJson(const json& j) {
  const Eigen::VectorXd c = util::ParseVector(j.at("center"), 3);
  const json& gens = j.at("generators");
  Eigen::MatrixXd g(3, gens.size());
  std::vector<IndeterminateId> ids;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    g.col(i) = util::ParseVector(gens[i], 3);
    ids.push_back(IndeterminateId::Generic(i));
  }
  return geom::Zonotope(c, g, ids);
}

json NumberJson(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

Eigen::VectorXd ArmModel::q_min() const {
  Eigen::VectorXd v(n_q());
  for (int i = 0; i < n_q(); ++i) v(i) = joints[i].q_min;
  return v;
}

Eigen::VectorXd ArmModel::q_max() const {
  Eigen::VectorXd v(n_q());
  for (int i = 0; i < n_q(); ++i) v(i) = joints[i].q_max;
  return v;
}

Eigen::VectorXd ArmModel::dq_lim() const {
  Eigen::VectorXd v(n_q());
  for (int i = 0; i < n_q(); ++i) v(i) = joints[i].dq_lim;
  return v;
}

Eigen::Matrix3d Skew(const Eigen::Vector3d& u) {
  Eigen::Matrix3d k;
  k << 0, -u.z(), u.y(), u.z(), 0, -u.x(), -u.y(), u.x(), 0;
  return k;
}

Eigen::Matrix3d RotationMatrix(const Eigen::Vector3d& axis, double q) {
  if (std::abs(axis.norm() - 1.0) > kAxisTol) {
    throw std::invalid_argument("RotationMatrix: axis is not a unit vector");
  }
  const Eigen::Matrix3d k = Skew(axis);
  return Eigen::Matrix3d::Identity() + std::sin(q) * k + (1.0 - std::cos(q)) * k * k;
}

std::vector<Eigen::Matrix3d> CumulativeRotations(const ArmModel& arm,
                                                 const Eigen::VectorXd& q) {
  CheckConfig(arm, q);
  std::vector<Eigen::Matrix3d> out;
  out.reserve(arm.n_q());
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  for (int i = 0; i < arm.n_q(); ++i) {
    r = r * RotationMatrix(arm.joints[i].axis, q(i));
    out.push_back(r);
  }
  return out;
}

std::vector<Eigen::Vector3d> JointPositions(const ArmModel& arm,
                                            const Eigen::VectorXd& q) {
  const std::vector<Eigen::Matrix3d> rots = CumulativeRotations(arm, q);
  std::vector<Eigen::Vector3d> out;
  out.reserve(arm.n_q());
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  for (int i = 0; i < arm.n_q(); ++i) {
    out.push_back(p);
    p += rots[i] * arm.joints[i].displacement;
  }
  return out;
}

std::vector<geom::Zonotope> ForwardOccupancy(const ArmModel& arm,
                                             const Eigen::VectorXd& q) {
  const std::vector<Eigen::Matrix3d> rots = CumulativeRotations(arm, q);
  const std::vector<Eigen::Vector3d> joints = JointPositions(arm, q);
  std::vector<geom::Zonotope> out;
  out.reserve(arm.n_q());
  for (int i = 0; i < arm.n_q(); ++i) {
    const geom::Zonotope& l = arm.joints[i].link_volume;
    out.emplace_back(joints[i] + rots[i] * l.center(), rots[i] * l.generators(),
                     l.ids());
  }
  return out;
}

geom::Zonotope CapsuleBox(const Eigen::Vector3d& displacement, double radius) {
  if (radius < 0.0) throw std::invalid_argument("CapsuleBox: negative radius");
  const double len = displacement.norm();
  Eigen::Vector3d u = Eigen::Vector3d::UnitX();
  if (len > 0.0) u = displacement / len;
  const auto [a, b] = Perpendiculars(u);
  Eigen::Matrix3d g;
  g.col(0) = (0.5 * len + radius) * u;
  g.col(1) = radius * a;
  g.col(2) = radius * b;
  return geom::Zonotope(0.5 * displacement, g,
                        {IndeterminateId::Generic(0), IndeterminateId::Generic(1),
                         IndeterminateId::Generic(2)});
}

void ValidateArm(const ArmModel& arm) {
  if (arm.n_q() == 0) throw std::invalid_argument("arm: no joints");
  for (int i = 0; i < arm.n_q(); ++i) {
    const JointSpec& j = arm.joints[i];
    const std::string where = "arm joint " + std::to_string(i) + ": ";
    if (std::abs(j.axis.norm() - 1.0) > kAxisTol) {
      throw std::invalid_argument(where + "axis is not a unit vector");
    }
    if (!(j.q_min <= j.q_max)) throw std::invalid_argument(where + "q_min > q_max");
    if (!(j.dq_lim > 0.0)) throw std::invalid_argument(where + "dq_lim <= 0");
    if (j.link_volume.dim() != 3) {
      throw std::invalid_argument(where + "link volume must be 3-D");
    }
    if (!(j.capsule_radius >= 0.0)) {
      throw std::invalid_argument(where + "negative capsule radius");
    }
    for (const Eigen::Vector3d& p :
         CapsuleSurfaceSamples(j.displacement, j.capsule_radius)) {
      if (!geom::ContainsPoint(j.link_volume, p)) {
        throw std::invalid_argument(where + "capsule not contained in link volume");
      }
    }
  }
  for (const auto& [a, b] : arm.self_pairs) {
    if (a < 0 || b >= arm.n_q() || b < a + 2) {
      throw std::invalid_argument("arm: self pair (" + std::to_string(a) + ", " +
                                  std::to_string(b) + ") invalid");
    }
  }
}

ArmModel ArmFromJson(const json& j) {
  ArmModel arm;
  arm.name = j.value("name", std::string("arm"));
  const json& joints = j.at("joints");
  if (j.contains("n_q") && j["n_q"].get<std::size_t>() != joints.size()) {
    throw std::invalid_argument("arm: n_q does not match joint list");
  }
  for (const json& jj : joints) {
    JointSpec spec;
    const Eigen::Vector3d axis = util::ParseVector(jj.at("axis"), 3);
    if (std::abs(axis.norm() - 1.0) > 1e-6) {
      throw std::invalid_argument("arm: axis must be a unit vector");
    }
    spec.axis = axis.normalized();
    spec.displacement = util::ParseVector(jj.at("displacement"), 3);
    if (jj.contains("q_min")) spec.q_min = util::ParseNumber(jj["q_min"]);
    if (jj.contains("q_max")) spec.q_max = util::ParseNumber(jj["q_max"]);
    spec.dq_lim = util::ParseNumber(jj.at("dq_lim"));
    if (jj.contains("capsule")) {
      const json& cap = jj["capsule"];
      spec.capsule_radius = util::ParseNumber(cap.at("radius"));
      if (cap.contains("length") &&
          std::abs(util::ParseNumber(cap["length"]) - spec.displacement.norm()) >
              1e-9) {
        throw std::invalid_argument("arm: capsule length must match displacement");
      }
    } else {
      spec.capsule_radius = util::ParseNumber(jj.at("radius"));
    }
    if (jj.contains("link_zonotope")) {
      spec.link_volume = ZonotopeFromJson(jj["link_zonotope"]);
    } else {
      spec.link_volume = CapsuleBox(spec.displacement, spec.capsule_radius);
    }
    arm.joints.push_back(std::move(spec));
  }
  if (j.contains("self_pairs")) {
    for (const json& p : j["self_pairs"]) {
      arm.self_pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    }
  }
  ValidateArm(arm);
  return arm;
}

ArmModel LoadArm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open arm file " + path);
  return ArmFromJson(json::parse(in));
}

json ArmToJson(const ArmModel& arm) {
  json joints = json::array();
  for (const JointSpec& j : arm.joints) {
    json gens = json::array();
    for (int k = 0; k < j.link_volume.num_generators(); ++k) {
      const Eigen::Vector3d g = j.link_volume.generators().col(k);
      gens.push_back({g.x(), g.y(), g.z()});
    }
    const Eigen::Vector3d c = j.link_volume.center();
    joints.push_back(
        {{"axis", {j.axis.x(), j.axis.y(), j.axis.z()}},
         {"displacement", {j.displacement.x(), j.displacement.y(), j.displacement.z()}},
         {"q_min", NumberJson(j.q_min)},
         {"q_max", NumberJson(j.q_max)},
         {"dq_lim", j.dq_lim},
         {"radius", j.capsule_radius},
         {"link_zonotope", {{"center", {c.x(), c.y(), c.z()}}, {"generators", gens}}}});
  }
  json pairs = json::array();
  for (const auto& [a, b] : arm.self_pairs) pairs.push_back({a, b});
  return {{"name", arm.name}, {"n_q", arm.n_q()}, {"joints", joints},
          {"self_pairs", pairs}};
}

}  // namespace safearm::arm
